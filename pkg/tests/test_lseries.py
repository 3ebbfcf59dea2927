import pytest

from towerlab import lseries as ls
from towerlab.errors import InvariantError, PreconditionError
from towerlab.fields import ExtensionField, UniPoly, poly_from_str, poly_to_str

F5 = ExtensionField.prime(5)
ONE = UniPoly([F5.one()])
T = UniPoly([F5.zero(), F5.one()])


def legendre_model():
    # y^2 = x(x-1)(x-t) = x^3 - (1+t)x^2 + tx
    return ls.WeierstrassModel(F5, -(ONE + T), T, UniPoly.zero())


def e6_model():
    t6 = UniPoly([0] * 6 + [1]).map_coeffs(F5.element)
    return ls.quartic_to_weierstrass(F5, [t6, UniPoly.zero(), UniPoly.zero(), ONE, ONE])


def test_c_identity_holds():
    for model in (legendre_model(), e6_model()):
        model.check_c_identity()


def test_local_data_split_node_at_t():
    model = legendre_model()
    pi = poly_from_str("0,1", F5)
    lf = ls.local_data(model, ls.finite_place(F5, pi))
    assert lf.reduction == "multiplicative-split"
    assert lf.a_v == 1
    assert poly_to_str(lf.poly) == "1,-1"
    assert lf.cond_exponent == 1


def test_local_data_good_place():
    model = legendre_model()
    pi = poly_from_str("-3,1", F5)  # t - 3
    lf = ls.local_data(model, ls.finite_place(F5, pi))
    assert lf.reduction == "good"
    assert lf.a_v == 2  # count of y^2 = x(x-1)(x-3) over F_5 is 4
    assert poly_to_str(lf.poly) == "1,-2,5"


def test_local_data_additive_cusp():
    model = ls.WeierstrassModel(F5, UniPoly.zero(), UniPoly.zero(), T)  # y^2 = x^3 + t
    lf = ls.local_data(model, ls.finite_place(F5, poly_from_str("0,1", F5)))
    assert lf.reduction == "additive"
    assert lf.a_v == 0 and poly_to_str(lf.poly) == "1" and lf.cond_exponent == 2


def test_conductor_null_case():
    divisor, degree = ls.conductor(legendre_model())
    assert degree == 4
    labels = {p.label(): e for p, e in divisor}
    assert labels == {"0,1": 1, "4,1": 1, "inf": 2}


def test_l_function_null_case():
    L = ls.l_function(legendre_model())
    assert L.poly == UniPoly([1]) and L.D == 0 and L.conductor_degree == 4
    assert ls.analytic_rank(L) == 0


def test_l_function_e6():
    L = ls.l_function(e6_model())
    assert poly_to_str(L.poly) == "1,-10,0,250,-625"
    assert L.D == 4 and L.conductor_degree == 8 and L.sign == -1
    assert ls.analytic_rank(L) == 3
    # expanding the Euler product: the T^1 coefficient is the sum of the
    # degree-one a_v (each inverse factor contributes 1 + a_v T + ...)
    total = 0
    for c0 in range(5):
        lf = ls.local_data(e6_model(), ls.finite_place(F5, poly_from_str(f"{c0},1", F5)))
        total += lf.a_v
    lf_inf = ls.local_data(e6_model(), ls.infinite_place(F5))
    total += lf_inf.a_v
    assert L.poly[1] == total


def test_functional_equation_signs():
    assert ls.functional_equation_sign(UniPoly([1, 5]), 5, 1, 1) == 1
    assert ls.functional_equation_sign(UniPoly([1, -5]), 5, 1, 1) == -1
    with pytest.raises(InvariantError):
        ls.functional_equation_sign(UniPoly([1, 3]), 5, 1, 1)


def test_analytic_rank_constructed():
    L = ls.LSeries(UniPoly([1, -5]) * UniPoly([1, -5]) * UniPoly([1, 5]), 5, 1, 3, 7, -1)
    assert ls.analytic_rank(L) == 2


def test_base_change_examples():
    L = ls.LSeries(UniPoly([1, 0, 3]), 3, 1, 2, 6, 1)
    assert poly_to_str(ls.base_change(L, 2).poly) == "1,6,9"
    L1 = ls.LSeries(UniPoly([1, -5]), 5, 1, 1, 5, -1)
    assert poly_to_str(ls.base_change(L1, 3).poly) == "1,-125"
    assert ls.base_change(L1, 1) is L1


def test_divisibility_check():
    L = ls.l_function(e6_model())
    ok, quotient = ls.divisibility_check(L, UniPoly([1, 0, -25]))
    assert ok and poly_to_str(quotient) == "1,-10,25"
    ok2, _ = ls.divisibility_check(L, UniPoly([1, 0, -25]) ** 2)
    assert not ok2
    ok3, q3 = ls.divisibility_check(ls.l_function(legendre_model()), UniPoly([1]))
    assert ok3 and q3 == UniPoly([1])


def test_quartic_preconditions():
    with pytest.raises(PreconditionError):
        # leading coefficient 2 is not a square mod 5
        ls.quartic_to_weierstrass(F5, [ONE, UniPoly.zero(), UniPoly.zero(), ONE, UniPoly([F5.element(2)])])
    with pytest.raises(PreconditionError):
        # constant quartic gives an isotrivial model
        model = ls.quartic_to_weierstrass(F5, [UniPoly([F5.element(-1)]), UniPoly.zero(), UniPoly.zero(), UniPoly.zero(), ONE])
        ls.l_function(model)


def test_small_characteristic_rejected():
    F3 = ExtensionField.prime(3)
    with pytest.raises(PreconditionError):
        ls.WeierstrassModel(F3, UniPoly.zero(), UniPoly([F3.one()]), UniPoly([F3.zero(), F3.one()]))


def test_shioda_checker():
    datum = ls.shioda_check(5, [(0, 0, 2), (0, 4, 0), (0, 3, 0), (1, 0, 0)])
    assert abs(datum.detA) == 2 and datum.delta == 2 and datum.passes
    degenerate = ls.shioda_check(5, [(0, 0, 2), (0, 0, 2), (0, 3, 0), (1, 0, 0)])
    assert degenerate.detA == 0 and not degenerate.passes
    with pytest.raises(PreconditionError):
        ls.shioda_check(5, [(0, 0, 2), (1, 0, 0)])


def test_family_model_cases():
    fam = ls.family_model(1, 1, 5, 6)
    assert fam.x_coeffs[0] == UniPoly([0] * 6 + [1])
    assert fam.x_coeffs[3] == UniPoly([1]) and fam.x_coeffs[4] == UniPoly([1])
    fam4 = ls.family_model(4, 2, 2, 5)
    assert fam4.uses_xy_term and fam4.swan_infinity == 3
    with pytest.raises(PreconditionError):
        ls.family_model(1, 1, 3, 2)  # 3 divides (2g+2)(2g+1) = 12
    with pytest.raises(PreconditionError):
        ls.family_model(2, 1, 5, 2)  # 5 does not divide 2g+2 = 4
    with pytest.raises(PreconditionError):
        ls.family_model(1, 1, 5, 10)  # gcd(d, p) != 1


def test_rank_bounds():
    geom, main = ls.rank_bounds(6, 5)
    assert geom == 6 and main == 2.6947
    geom, main = ls.rank_bounds(1, 2)
    assert geom == 1 and main is None
    assert ls.rank_bounds(0, 7) == (0, None)
