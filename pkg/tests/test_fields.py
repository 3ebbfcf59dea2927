import pytest
from fractions import Fraction
from hypothesis import given, settings, strategies as st

from towerlab.errors import BudgetError, PreconditionError
from towerlab.fields import (
    ExtensionField,
    UniPoly,
    absolute_trace,
    count_monic_irreducibles,
    enumerate_monic_irreducibles,
    field_from_str,
    field_to_str,
    find_irreducible_modulus,
    is_prime,
    poly_from_str,
    poly_to_str,
    quadratic_character,
)

F9 = ExtensionField(3, (1, 0, 1))  # x^2 + 1 over F_3
F8 = ExtensionField.of_degree(2, 3)
F25 = ExtensionField.of_degree(5, 2)


def test_is_prime_small():
    assert [n for n in range(2, 30) if is_prime(n)] == [2, 3, 5, 7, 11, 13, 17, 19, 23, 29]


def test_reducible_modulus_rejected():
    with pytest.raises(PreconditionError):
        ExtensionField(3, (2, 0, 1))  # x^2 + 2 = (x+1)(x+2) mod 3


@given(st.integers(0, 8), st.integers(0, 8), st.integers(0, 8))
def test_field_ring_axioms(a, b, c):
    x, y, z = (F9.element_from_code(v) for v in (a, b, c))
    assert x * (y + z) == x * y + x * z
    assert (x * y) * z == x * (y * z)
    assert x + (-x) == F9.zero()


@given(st.integers(1, 24))
def test_inverse_and_pow(code):
    x = F25.element_from_code(code)
    assert x * x.inverse() == F25.one()
    assert x ** 24 == F25.one()  # Lagrange
    assert x ** -1 == x.inverse()


@given(st.integers(0, 24), st.integers(0, 24))
def test_quadratic_character_multiplicative(a, b):
    x, y = F25.element_from_code(a), F25.element_from_code(b)
    assert quadratic_character(F25, x * y) == quadratic_character(F25, x) * quadratic_character(F25, y)


def test_character_rejected_in_char_2():
    with pytest.raises(PreconditionError):
        quadratic_character(F8, F8.one())


@given(st.integers(0, 7), st.integers(0, 7))
def test_trace_additive(a, b):
    x, y = F8.element_from_code(a), F8.element_from_code(b)
    assert absolute_trace(F8, x + y) == (absolute_trace(F8, x) + absolute_trace(F8, y)) % 2


def test_trace_values_split_evenly():
    # a nontrivial additive character kernel has exactly q/p elements
    zeros = sum(1 for x in F8.elements() if absolute_trace(F8, x) == 0)
    assert zeros == 4


coeff_lists = st.lists(st.integers(-9, 9), min_size=0, max_size=6)


@given(coeff_lists, coeff_lists)
def test_exact_div_inverts_mul(f_coeffs, g_coeffs):
    f, g = UniPoly(f_coeffs), UniPoly(g_coeffs)
    if g.is_zero():
        return
    q = (f * g).exact_div(g)
    assert q == f


@given(coeff_lists, coeff_lists)
def test_divmod_identity(f_coeffs, g_coeffs):
    f, g = UniPoly(f_coeffs), UniPoly(g_coeffs)
    if g.is_zero():
        return
    q, r = f.divmod(g)
    assert q * g + r == f
    assert r.degree < g.degree or r.is_zero()


def test_exact_div_detects_nondivisor():
    assert UniPoly([1, 0, 1]).exact_div(UniPoly([1, 1])) is None


def test_substitute_and_reverse():
    f = UniPoly([1, 2, 3])
    assert f.substitute_power(2) == UniPoly([1, 0, 2, 0, 3])
    assert f.reversed_coeffs() == UniPoly([3, 2, 1])


def test_serialization_round_trip():
    f = UniPoly([1, 0, 3])
    assert poly_to_str(f) == "1,0,3"
    assert poly_from_str("1,0,3") == f
    text = field_to_str(F9)
    assert text == "p=3;m=1,0,1"
    back = field_from_str(text)
    assert back == F9


def test_irreducible_enumeration_order_and_count():
    F2 = ExtensionField.prime(2)
    got = [poly_to_str(f) for f in enumerate_monic_irreducibles(F2, 3)]
    assert got == ["0,1", "1,1", "1,1,1", "1,1,0,1", "1,0,1,1"]
    for q, m in ((2, 4), (3, 3), (5, 2)):
        F = ExtensionField.prime(q)
        found = sum(1 for f in enumerate_monic_irreducibles(F, m) if f.degree == m)
        assert found == count_monic_irreducibles(q, m)


def test_enumeration_budget():
    F5 = ExtensionField.prime(5)
    with pytest.raises(BudgetError):
        list(enumerate_monic_irreducibles(F5, 3, budget=100))


@given(st.sampled_from([(2, 5), (3, 4), (5, 3), (7, 2)]))
@settings(deadline=None)
def test_found_moduli_define_fields(pk):
    p, k = pk
    F = ExtensionField(p, find_irreducible_modulus(p, k))
    assert F.q == p ** k
    x = F.gen()
    assert x ** (F.q - 1) == F.one() or x.is_zero()
