import pytest
from hypothesis import given, settings, strategies as st

from towerlab.errors import PreconditionError
from towerlab.factor import distinct_irreducible_factors, squarefree_distinct_part
from towerlab.fields import ExtensionField, UniPoly, poly_to_str

F5 = ExtensionField.prime(5)
F7 = ExtensionField.prime(7)


def _poly(field, coeffs):
    return UniPoly([field.element(c) for c in coeffs])


def test_known_factorization():
    # t^12 * (t^6 + 3) over F_5; t^6 + 3 splits into three quadratics
    f = _poly(F5, [0] * 12 + [1]) * _poly(F5, [3, 0, 0, 0, 0, 0, 1])
    got = [poly_to_str(g) for g in distinct_irreducible_factors(f, F5)]
    assert got == ["0,1", "2,0,1", "2,1,1", "2,4,1"]


def test_radical_of_p_th_power():
    # (t^2 + 2)^5 has zero derivative over F_5
    g = _poly(F5, [2, 0, 1]) ** 5
    assert poly_to_str(squarefree_distinct_part(g, F5)) == "2,0,1"


def test_char_2_rejected():
    F2 = ExtensionField.prime(2)
    with pytest.raises(PreconditionError):
        distinct_irreducible_factors(_poly(F2, [1, 1]), F2)


def test_zero_rejected():
    with pytest.raises(PreconditionError):
        distinct_irreducible_factors(UniPoly.zero(), F5)


def test_seeded_determinism():
    f = _poly(F7, [1, 0, 0, 0, 0, 0, 1])  # t^6 + 1
    a = [poly_to_str(g) for g in distinct_irreducible_factors(f, F7, seed=1)]
    b = [poly_to_str(g) for g in distinct_irreducible_factors(f, F7, seed=1)]
    assert a == b


@settings(max_examples=40, deadline=None)
@given(st.lists(st.integers(0, 4), min_size=2, max_size=8))
def test_factors_multiply_to_radical(coeffs):
    f = _poly(F5, coeffs + [1])  # force nonzero leading coefficient
    factors = distinct_irreducible_factors(f, F5)
    product = UniPoly([F5.one()])
    for g in factors:
        assert g.leading() == F5.one()
        product = product * g
    assert product == squarefree_distinct_part(f, F5)
    # distinctness
    assert len({poly_to_str(g) for g in factors}) == len(factors)
