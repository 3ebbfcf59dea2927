import pytest

from towerlab.curves import (
    HyperellipticModel,
    count_points,
    kummer_pullback,
    pair_difference_count,
    twist_rank,
    weil_multiplicity,
    weil_polynomial,
    zeta_numerator,
)
from towerlab.errors import InvariantError, PreconditionError
from towerlab.fields import (
    ExtensionField,
    UniPoly,
    poly_to_str,
    quadratic_character,
)

F3 = ExtensionField.prime(3)
F5 = ExtensionField.prime(5)


def _poly(field, coeffs):
    return UniPoly([field.element(c) for c in coeffs])


def naive_count(model, m):
    """Brute-force proper-model count over F_{q^m} through a scalar field."""
    F = ExtensionField.of_degree(model.field.p, m) if m > 1 else model.field
    total = 0
    for x in F.elements():
        fx = sum((F.element(c.rep[0]) * x ** i for i, c in enumerate(model.f.coeffs)), F.zero())
        total += 1 + quadratic_character(F, fx)
    deg = model.f.degree
    if deg % 2 == 1:
        total += 1
    else:
        lc = F.element(model.f.leading().rep[0])
        total += 2 if quadratic_character(F, lc) == 1 else 0
    return total


def test_count_examples_from_small_curves():
    m1 = HyperellipticModel(F3, _poly(F3, [0, -1, 0, 1]))  # y^2 = x^3 - x
    assert count_points(m1) == 4
    m2 = HyperellipticModel(F3, _poly(F3, [-1, 0, 0, 0, 1]))  # y^2 = t^4 - 1
    assert count_points(m2) == 4
    F2 = ExtensionField.prime(2)
    m3 = HyperellipticModel(F2, _poly(F2, [0, 0, 0, 1]), h=UniPoly([F2.one()]))
    assert count_points(m3) == 3


@pytest.mark.parametrize("m", [1, 2, 3])
def test_batch_count_matches_naive(m):
    model = HyperellipticModel(F3, _poly(F3, [1, 2, 0, 0, 0, 1]))
    assert count_points(model, m) == naive_count(model, m)


def test_zeta_known_values():
    z = zeta_numerator(HyperellipticModel(F3, _poly(F3, [0, -1, 0, 1])))
    assert poly_to_str(z.poly) == "1,0,3"
    z = zeta_numerator(HyperellipticModel(F3, _poly(F3, [-1, 0, 0, 0, 1])))
    assert poly_to_str(z.poly) == "1,0,3"
    F7 = ExtensionField.prime(7)
    z = zeta_numerator(HyperellipticModel(F7, _poly(F7, [0, -1, 0, 1])))
    assert poly_to_str(z.poly) == "1,0,7"  # y^2 = x^3 - x is supersingular at 7
    z = zeta_numerator(HyperellipticModel(F5, _poly(F5, [-1, 0, 1]), genus=0))
    assert poly_to_str(z.poly) == "1"


def test_zeta_reproduces_further_counts():
    model = HyperellipticModel(F5, _poly(F5, [2, 1, 0, 1]))
    z = zeta_numerator(model)
    z.check()
    recovered = z.recovered_counts(3)
    for m in (1, 2, 3):
        assert recovered[m - 1] == count_points(model, m)


def test_kummer_pullback_genus():
    assert kummer_pullback(UniPoly([-1, 1]), 4, F3).genus == 1
    assert kummer_pullback(UniPoly([-1, 1]), 28, F3).genus == 13
    assert kummer_pullback(UniPoly([-1, 1]), 1, F3).genus == 0
    with pytest.raises(PreconditionError):
        kummer_pullback(UniPoly([-1, 1]), 3, F3)  # p | d
    with pytest.raises(PreconditionError):
        kummer_pullback(UniPoly([0, 1]), 2, F3)  # root at 0


def test_weil_multiplicity_constructed():
    w = weil_polynomial(3, 0)
    P = w.poly * w.poly * UniPoly([1, 3, 3])
    from towerlab.curves import ZetaNumerator
    zeta = ZetaNumerator(P, 3, 3, [])
    assert weil_multiplicity(zeta, w) == 2
    zeta1 = ZetaNumerator(w.poly, 3, 1, [])
    assert weil_multiplicity(zeta1, w) == 1


def test_weil_polynomial_scope():
    assert weil_polynomial(5, 0).label == "zeta4"
    assert weil_polynomial(3, 3).label == "zeta12"
    assert weil_polynomial(2, -2).label == "zeta8"
    with pytest.raises(PreconditionError):
        weil_polynomial(5, 1)
    with pytest.raises(PreconditionError):
        weil_polynomial(2, 0)


def test_twist_rank_n1():
    assert twist_rank(0, 3, UniPoly([-1, 1]), 1) == 2


def test_twist_rank_selection_rules():
    with pytest.raises(PreconditionError):
        twist_rank(0, 3, UniPoly([-1, 1]), 2)  # n must be odd
    with pytest.raises(PreconditionError):
        twist_rank(3, 3, UniPoly([-1, 1]), 1)  # needs n = 3 mod 6
    with pytest.raises(PreconditionError):
        twist_rank(2, 2, UniPoly([-1, 1]), 1)  # needs n = 2 mod 4


def test_pair_difference_counts():
    f = UniPoly([0, 0, 0, 1, 1])
    assert pair_difference_count(F5, f) == 7
    F25 = ExtensionField.of_degree(5, 2)
    count = pair_difference_count(F25, f)
    assert abs(count - 2 * 25) <= 2 * 9 * 5


def test_odd_p_rejects_square_factor():
    with pytest.raises(PreconditionError):
        HyperellipticModel(F5, _poly(F5, [0, 0, 1]))


def test_p2_needs_h():
    F2 = ExtensionField.prime(2)
    with pytest.raises(PreconditionError):
        HyperellipticModel(F2, _poly(F2, [0, 0, 0, 1]))
