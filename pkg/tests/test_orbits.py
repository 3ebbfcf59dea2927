import math

import pytest
from hypothesis import given, strategies as st

from towerlab.errors import PreconditionError
from towerlab.fields import UniPoly
from towerlab.orbits import (
    av2_conductor_exponent,
    av2_find_g,
    binomial_parity_by_carries,
    orbit_decomposition,
    predicted_divisor,
    selfdual_higher_count,
    towers_rank_bound,
)


@given(st.integers(2, 400), st.integers(2, 50))
def test_orbits_partition(d, q):
    if math.gcd(d, q) != 1:
        return
    dec = orbit_decomposition(d, q)
    elements = sorted(x for o in dec.orbits for x in o.elements)
    assert elements == list(range(d))
    for o in dec.orbits:
        # orbit size divides the multiplicative order of q mod d
        assert dec.b % o.size == 0
        assert set((x * q) % d for x in o.elements) == set(o.elements)


def test_known_decomposition_d6_q5():
    dec = orbit_decomposition(6, 5)
    assert [list(o.elements) for o in dec.orbits] == [[0], [1, 5], [2, 4], [3]]
    classes = [o.order_class for o in dec.orbits]
    assert classes == ["trivial", "higher", "higher", "order-two"]
    assert all(o.self_dual for o in dec.orbits)


@pytest.mark.parametrize("q", [2, 3, 5])
@pytest.mark.parametrize("n", [1, 2, 3, 4, 5, 6])
def test_selfdual_facts(q, n):
    d = q ** n + 1
    dec = orbit_decomposition(d, q)
    for o in dec.orbits:
        assert o.self_dual
        assert (2 * n) % o.size == 0
    actual, bound = selfdual_higher_count(q, n)
    assert actual >= (d - 2) // (2 * n)
    assert bound == -((d - 2) // -(2 * n))


def test_gcd_precondition():
    with pytest.raises(PreconditionError):
        orbit_decomposition(6, 3)


def test_predicted_divisor_d6():
    dec = orbit_decomposition(6, 5)
    product = predicted_divisor(dec, w=1, sign_rho=-1)
    assert product == UniPoly([1, 0, -25]) * UniPoly([1, 0, -25])
    partial = predicted_divisor(dec, w=1, sign_rho=-1, excluded=[(2, 4)])
    assert partial == UniPoly([1, 0, -25])
    flipped = predicted_divisor(dec, w=1, sign_rho=1)
    assert flipped == UniPoly([1, 0, 25]) * UniPoly([1, 0, 25])


def test_towers_rank_bound_counts():
    pred = towers_rank_bound(5, 1, 1, -1)
    assert pred.d == 6 and pred.lower_bound_center == 2 and pred.lower_bound_extended == 4
    pred = towers_rank_bound(5, 1, 1, -1, excluded_count=1)
    assert pred.lower_bound_center == 1 and pred.lower_bound_extended == 2
    assert pred.asymptotic_form == 6 / 2 - 1


@given(st.integers(0, 3000), st.integers(0, 3000))
def test_carry_parity_matches_comb(n, m):
    assert binomial_parity_by_carries(n, m) == math.comb(n, m) % 2 if m <= n else True


def test_av2_values():
    assert av2_conductor_exponent(3, 3) == math.comb(4, 2) - math.comb(4, 0)
    assert av2_find_g(3) == 3
    assert av2_find_g(5) == 6
    with pytest.raises(PreconditionError):
        av2_find_g(4)
    with pytest.raises(PreconditionError):
        av2_conductor_exponent(5, 7)
