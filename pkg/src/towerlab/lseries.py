"""L-functions of elliptic curves over F_q(t) for residue characteristic
at least 5, computed as exact integer polynomials from a truncated Euler
product over the places of the projective line.

Also here: the functional-equation gate, analytic rank at the central
point, constant-field base change, divisibility tests against predicted
factors, the four-monomial surface checker, and the degree-based rank
bounds.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field
from fractions import Fraction

from . import ratmat
from .errors import BudgetError, InvariantError, PreconditionError
from .factor import distinct_irreducible_factors
from .fields import (
    ExtensionField,
    FieldElement,
    UniPoly,
    enumerate_monic_irreducibles,
    enumeration_budget,
    poly_to_str,
)


# ---------------------------------------------------------------------------
# Models and places
# ---------------------------------------------------------------------------

@dataclass
class WeierstrassModel:
    """y^2 = x^3 + a2 x^2 + a4 x + a6 over F_q(t), with q a prime >= 5
    (a1 = a3 = 0 is harmless away from characteristic 2 and 3)."""

    field: ExtensionField
    a2: UniPoly
    a4: UniPoly
    a6: UniPoly

    def __post_init__(self):
        if self.field.p < 5:
            raise PreconditionError("residue characteristic must be >= 5")
        if self.field.k != 1:
            raise PreconditionError(
                "constant field must be a prime field here (residue fields "
                "are represented as F_q[t]/pi)"
            )
        self.a2 = _over(self.field, self.a2)
        self.a4 = _over(self.field, self.a4)
        self.a6 = _over(self.field, self.a6)
        if self.discriminant().is_zero():
            raise PreconditionError("discriminant vanishes identically")

    def c4(self) -> UniPoly:
        b2 = 4 * self.a2
        b4 = 2 * self.a4
        return b2 * b2 - 24 * b4

    def c6(self) -> UniPoly:
        b2 = 4 * self.a2
        b4 = 2 * self.a4
        b6 = 4 * self.a6
        return -(b2 * b2 * b2) + 36 * b2 * b4 - 216 * b6

    def discriminant(self) -> UniPoly:
        b2 = 4 * self.a2
        b4 = 2 * self.a4
        b6 = 4 * self.a6
        b8 = 4 * self.a2 * self.a6 - self.a4 * self.a4
        return -(b2 * b2) * b8 - 8 * (b4 ** 3) - 27 * (b6 * b6) + 9 * b2 * b4 * b6

    def check_c_identity(self):
        c4, c6, disc = self.c4(), self.c6(), self.discriminant()
        if c4 ** 3 - c6 * c6 != 1728 * disc:
            raise InvariantError("c4^3 - c6^2 != 1728*Delta")

    def is_isotrivial(self) -> bool:
        """j = c4^3/Delta lies in F_q iff c4^3 and Delta are proportional
        by a constant."""
        c43 = self.c4() ** 3
        disc = self.discriminant()
        if c43.is_zero():
            return True  # j identically 0
        if c43.degree != disc.degree:
            return False
        return c43 * disc.leading() == disc * c43.leading()


def _over(field: ExtensionField, poly: UniPoly) -> UniPoly:
    out = []
    for c in poly.coeffs:
        if isinstance(c, FieldElement):
            out.append(field.element(list(c.rep)))
        else:
            out.append(field.element(int(c)))
    return UniPoly(out)


@dataclass(frozen=True)
class Place:
    kind: str           # "finite" | "infinite"
    pi: UniPoly | None  # monic irreducible for finite places
    deg: int
    q_v: int

    def label(self) -> str:
        if self.kind == "infinite":
            return "inf"
        return poly_to_str(self.pi)


def finite_place(field: ExtensionField, pi: UniPoly) -> Place:
    return Place("finite", pi, pi.degree, field.q ** pi.degree)


def infinite_place(field: ExtensionField) -> Place:
    return Place("infinite", None, 1, field.q)


@dataclass
class LocalFactor:
    place: Place
    reduction: str  # good | multiplicative-split | multiplicative-nonsplit | additive
    a_v: int
    poly: UniPoly   # integer polynomial in T
    cond_exponent: int


# ---------------------------------------------------------------------------
# Local analysis
# ---------------------------------------------------------------------------

def _valuation(poly: UniPoly, pi: UniPoly) -> int:
    if poly.is_zero():
        return 10 ** 9  # effectively infinite
    v = 0
    while True:
        q = poly.exact_div(pi)
        if q is None:
            return v
        poly = q
        v += 1


def _residue_field(field: ExtensionField, pi: UniPoly) -> ExtensionField:
    coeffs = [c.rep[0] if isinstance(c, FieldElement) else int(c) for c in pi.coeffs]
    return ExtensionField(field.p, coeffs)


def _reduce_mod(poly: UniPoly, pi: UniPoly, R: ExtensionField) -> FieldElement:
    rem = poly.divmod(pi)[1]
    rep = [c.rep[0] if isinstance(c, FieldElement) else int(c) for c in rem.coeffs]
    return R.element(rep + [0] * (R.k - len(rep)))


def _cubic_affine_count(R: ExtensionField, A: FieldElement, B: FieldElement) -> int:
    """#{(x, y) in R^2 : y^2 = x^3 + A x + B}."""
    total = 0
    e = (R.q - 1) // 2
    one = R.one()
    minus_one = -one
    for x in R.elements():
        v = (x * x + A) * x + B
        if v.is_zero():
            total += 1
            continue
        s = v ** e
        total += 2 if s == one else 0
        if s != one and s != minus_one:
            raise InvariantError("character computation failed")
    return total


def local_data(model: WeierstrassModel, place: Place) -> LocalFactor:
    if place.kind == "infinite":
        lf = local_data(_infinity_chart(model), _s_place(model.field))
        return LocalFactor(place, lf.reduction, lf.a_v, lf.poly, lf.cond_exponent)
    pi = place.pi
    field = model.field
    c4, c6, disc = model.c4(), model.c6(), model.discriminant()
    v4, v6, vd = _valuation(c4, pi), _valuation(c6, pi), _valuation(disc, pi)
    e = min(v4 // 4, v6 // 6, vd // 12)
    if e:
        scale = pi ** (4 * e)
        c4 = c4.exact_div(scale)
        c6 = c6.exact_div(pi ** (6 * e))
        disc = disc.exact_div(pi ** (12 * e))
        v4, vd = v4 - 4 * e, vd - 12 * e
    R = _residue_field(field, pi)
    if place.q_v > enumeration_budget():
        raise BudgetError(f"residue field size {place.q_v} exceeds budget")
    m = place.deg
    if vd == 0:
        # good reduction: count the smooth fiber y^2 = x^3 + Ax + B with
        # A = -c4/48, B = -c6/864
        A = -_reduce_mod(c4, pi, R) / R.element(48)
        B = -_reduce_mod(c6, pi, R) / R.element(864)
        count = _cubic_affine_count(R, A, B) + 1
        a_v = place.q_v + 1 - count
        if a_v * a_v > 4 * place.q_v:
            raise InvariantError("Hasse bound violated at a good place")
        poly = UniPoly([1] + [0] * (m - 1) + [-a_v] + [0] * (m - 1) + [place.q_v])
        return LocalFactor(place, "good", a_v, poly, 0)
    if v4 == 0:
        # multiplicative: the singular fiber is a nodal cubic; its point
        # count separates split (q_v) from nonsplit (q_v + 2)
        A = -_reduce_mod(c4, pi, R) / R.element(48)
        B = -_reduce_mod(c6, pi, R) / R.element(864)
        count = _cubic_affine_count(R, A, B) + 1
        a_v = place.q_v + 1 - count
        if a_v == 1:
            poly = UniPoly([1] + [0] * (m - 1) + [-1])
            return LocalFactor(place, "multiplicative-split", 1, poly, 1)
        if a_v == -1:
            poly = UniPoly([1] + [0] * (m - 1) + [1])
            return LocalFactor(place, "multiplicative-nonsplit", -1, poly, 1)
        raise InvariantError(f"nodal count {count} is neither q_v nor q_v + 2")
    return LocalFactor(place, "additive", 0, UniPoly([1]), 2)


def _s_place(field: ExtensionField) -> Place:
    return finite_place(field, UniPoly([field.zero(), field.one()]))


def _infinity_chart(model: WeierstrassModel) -> WeierstrassModel:
    """The model in the s = 1/t coordinate, scaled by u = s^w so the
    coefficients stay polynomial; t = infinity becomes s = 0."""
    def degd(p: UniPoly) -> int:
        return max(p.degree, 0)

    w = max(
        -(-degd(model.a2) // 2),
        -(-degd(model.a4) // 4),
        -(-degd(model.a6) // 6),
    )

    def transform(p: UniPoly, weight: int) -> UniPoly:
        if p.is_zero():
            return p
        rev = UniPoly(list(reversed(p.coeffs)))  # s^deg * p(1/s)
        pad = weight * w - p.degree
        if pad < 0:
            raise InvariantError("infinity chart weight too small")
        return UniPoly([model.field.zero()] * pad + list(rev.coeffs))

    return WeierstrassModel(
        model.field,
        transform(model.a2, 2),
        transform(model.a4, 4),
        transform(model.a6, 6),
    )


def conductor(model: WeierstrassModel):
    """(divisor, degree): the list of (place, exponent) with positive
    exponent, over all finite bad places and infinity."""
    field = model.field
    divisor = []
    for pi in distinct_irreducible_factors(model.discriminant(), field):
        place = finite_place(field, pi)
        lf = local_data(model, place)
        if lf.cond_exponent:
            divisor.append((place, lf.cond_exponent))
    lf_inf = local_data(model, infinite_place(field))
    if lf_inf.cond_exponent:
        divisor.append((infinite_place(field), lf_inf.cond_exponent))
    degree = sum(exp * place.deg for place, exp in divisor)
    return divisor, degree


# ---------------------------------------------------------------------------
# The global L-function
# ---------------------------------------------------------------------------

@dataclass
class LSeries:
    poly: UniPoly
    q: int
    w: int
    D: int
    conductor_degree: int
    sign: int
    conductor_divisor: list = dc_field(default_factory=list)
    provenance: dict = dc_field(default_factory=dict)


def l_function(model: WeierstrassModel) -> LSeries:
    """Exact integer polynomial L(T) of degree D = deg(conductor) - 4.

    The Euler product is truncated at T^D using every place of degree at
    most D; places of larger degree have local factor 1 + O(T^{D+1}) and
    cannot touch the coefficients kept.
    """
    model.check_c_identity()
    if model.is_isotrivial():
        raise PreconditionError("isotrivial model: L is not a polynomial of degree deg(n) - 4")
    field = model.field
    divisor, cond_deg = conductor(model)
    D = cond_deg - 4
    if D < 0:
        raise InvariantError("conductor degree below 4 for a non-isotrivial model")
    if D == 0:
        L = UniPoly([1])
        sign = functional_equation_sign(L, field.q, 1, 0)
        return LSeries(L, field.q, 1, 0, cond_deg, sign, divisor)
    # product of all local factors of places of degree <= D, truncated
    prod = [Fraction(1)] + [Fraction(0)] * D
    def mul_in(poly: UniPoly):
        nonlocal prod
        out = [Fraction(0)] * (D + 1)
        for i in range(D + 1):
            if prod[i] == 0:
                continue
            for j, c in enumerate(poly.coeffs):
                if i + j > D:
                    break
                out[i + j] += prod[i] * c
        prod = out

    for pi in enumerate_monic_irreducibles(field, D):
        mul_in(local_data(model, finite_place(field, pi)).poly)
    mul_in(local_data(model, infinite_place(field)).poly)
    # L = 1/prod as a power series, exact to order D
    coeffs = [Fraction(1)]
    for k in range(1, D + 1):
        coeffs.append(-sum(prod[j] * coeffs[k - j] for j in range(1, k + 1)))
    out = []
    for c in coeffs:
        if c.denominator != 1:
            raise InvariantError("L-series coefficient is not an integer")
        out.append(int(c))
    L = UniPoly(out)
    if L.degree != D:
        raise InvariantError(f"deg L = {L.degree} but conductor predicts {D}")
    sign = functional_equation_sign(L, field.q, 1, D)
    return LSeries(L, field.q, 1, D, cond_deg, sign, divisor)


def functional_equation_sign(L: UniPoly, q: int, w: int, D: int) -> int:
    """The sign s with L(T) = s (q^{(w+1)/2} T)^D L(1/(q^{w+1} T)); raises
    if neither sign satisfies the identity exactly."""
    if (w + 1) % 2 != 0:
        raise PreconditionError("weight must be odd")
    half = (w + 1) // 2
    # coefficient of T^i on the right is s * c_{D-i} * q^{half*(2i - D)}
    for s in (1, -1):
        ok = True
        for i in range(D + 1):
            rhs = s * Fraction(L[D - i]) * Fraction(q) ** (half * (2 * i - D))
            if Fraction(L[i]) != rhs:
                ok = False
                break
        if ok:
            return s
    raise InvariantError("functional equation violated for both signs")


def functional_equation_check(L: LSeries) -> int:
    return functional_equation_sign(L.poly, L.q, L.w, L.D)


def analytic_rank(L: LSeries) -> int:
    """Order of vanishing at the central point T = q^{-(w+1)/2}, by exact
    repeated division by 1 - q^{(w+1)/2} T."""
    if (L.w + 1) % 2 != 0:
        raise PreconditionError("analytic rank needs odd weight")
    center = UniPoly([1, -(L.q ** ((L.w + 1) // 2))])
    rank = 0
    cur = L.poly
    while True:
        nxt = cur.exact_div(center)
        if nxt is None:
            return rank
        cur = nxt
        rank += 1


def base_change(L: LSeries, k: int) -> LSeries:
    """Constant-field extension of degree k: each inverse root alpha
    becomes alpha^k.  Computed through power sums (no root extraction)."""
    if k < 1:
        raise PreconditionError("k must be >= 1")
    if k == 1:
        return L
    D = L.D
    b = [Fraction(L.poly[i]) for i in range(D + 1)]
    s = []
    for m in range(1, k * D + 1):
        bm = b[m] if m < len(b) else Fraction(0)
        s.append(-m * bm - sum(b[j] * s[m - j - 1] for j in range(1, min(m, D + 1))))
    newb = [Fraction(1)]
    for m in range(1, D + 1):
        acc = sum(s[k * j - 1] * newb[m - j] for j in range(1, m + 1))
        newb.append(-acc / m)
    out = []
    for c in newb:
        if c.denominator != 1:
            raise InvariantError("base change produced a non-integer")
        out.append(int(c))
    poly = UniPoly(out)
    try:
        # inputs normalized to weight w keep an exact functional equation;
        # other inverse-root polynomials are still valid inputs, so a
        # missing sign is recorded as 0 rather than rejected
        sign = functional_equation_sign(poly, L.q ** k, L.w, D)
    except InvariantError:
        sign = 0
    return LSeries(
        poly,
        L.q ** k,
        L.w,
        D,
        L.conductor_degree,
        sign,
        provenance={"base_change_of": L.provenance, "k": k},
    )


def divisibility_check(L: LSeries, predicted: UniPoly):
    """(divides, quotient) for exact division of L by the predicted factor."""
    q = L.poly.exact_div(predicted)
    return (q is not None), q


# ---------------------------------------------------------------------------
# Quartic models
# ---------------------------------------------------------------------------

def quartic_to_weierstrass(field: ExtensionField, coeffs) -> WeierstrassModel:
    """Weierstrass model of the Jacobian of y^2 = quartic(x) over F_q(t).

    coeffs lists the quartic's x-coefficients from constant to leading,
    each a polynomial in t (or a constant).  The leading coefficient must
    be a nonzero square constant, so the curve has a rational point at
    infinity and the Jacobian model has the same fiber counts.
    """
    cs = [_over(field, c if isinstance(c, UniPoly) else UniPoly([c])) for c in coeffs]
    if len(cs) != 5 or cs[4].is_zero():
        raise PreconditionError("need a genuine quartic (five x-coefficients)")
    e, d, c, b, a = cs
    if a.degree != 0:
        raise PreconditionError("leading coefficient must be constant")
    lead = a.leading()
    if lead ** ((field.q - 1) // 2) != field.one():
        raise PreconditionError("leading coefficient must be a nonzero square")
    # classical invariants of the binary quartic
    I = 12 * a * e - 3 * b * d + c * c
    J = 72 * a * c * e + 9 * b * c * d - 27 * a * d * d - 27 * b * b * e - 2 * c ** 3
    model = WeierstrassModel(field, UniPoly.zero(), -27 * I, -27 * J)
    model.check_c_identity()
    return model


def quartic_fiber_count(field_v: ExtensionField, coeffs_at_v) -> int:
    """Proper-model point count of y^2 = quartic(x) over a finite field,
    for cross-checking the Jacobian model's counts."""
    e, d, c, b, a = [field_v.element(x) for x in coeffs_at_v]
    total = 0
    exp = (field_v.q - 1) // 2
    one = field_v.one()
    for x in field_v.elements():
        v = (((a * x + b) * x + c) * x + d) * x + e
        if v.is_zero():
            total += 1
        elif v ** exp == one:
            total += 2
    # two points at infinity iff the leading coefficient is a square
    total += 2 if a ** exp == one else 0
    return total


# ---------------------------------------------------------------------------
# Four-monomial checker
# ---------------------------------------------------------------------------

@dataclass
class ShiodaDatum:
    exponents: list  # four (a_u, a_x, a_y) triples
    A: list          # 4x4 integer matrix with a_{i0} = 1 - sum of the rest
    detA: int
    delta: int | None
    passes: bool


def shioda_check(p: int, exponents) -> ShiodaDatum:
    """Build the 4x4 exponent matrix of a four-monomial surface equation
    and evaluate the two lattice conditions: det A != 0 and p not dividing
    delta (the least positive integer with delta*A^{-1} integral)."""
    rows = [list(map(int, triple)) for triple in exponents]
    if len(rows) != 4 or any(len(r) != 3 for r in rows):
        raise PreconditionError("need exactly four monomials in (u, x, y)")
    A = [[1 - sum(r)] + r for r in rows]
    detA = int(ratmat.det(A))
    if detA == 0:
        return ShiodaDatum(rows, A, 0, None, False)
    adj = _adjugate4(A)
    g = abs(detA)
    for row in adj:
        for x in row:
            g = math.gcd(g, abs(x))
    delta = abs(detA) // g
    return ShiodaDatum(rows, A, detA, delta, delta % p != 0)


def _adjugate4(A):
    n = 4
    out = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            minor = [
                [A[r][c] for c in range(n) if c != j] for r in range(n) if r != i
            ]
            out[j][i] = (-1) ** (i + j) * int(ratmat.det(minor))
    return out


# ---------------------------------------------------------------------------
# Families and bounds
# ---------------------------------------------------------------------------

@dataclass
class FamilyModel:
    case: int
    g: int
    p: int
    d: int
    weight: int
    sign_rho: int
    swan_zero: int
    swan_infinity: int
    x_coeffs: list    # quartic/hyperelliptic x-coefficients, constant first,
                      # as integer UniPoly in t
    uses_xy_term: bool


def family_model(case: int, g: int, p: int, d: int) -> FamilyModel:
    """The four standard families with u specialized to t^d.

    case 1 (p odd, p coprime to (2g+2)(2g+1)):  y^2 = x^{2g+2} + x^{2g+1} + u
    case 2 (p odd, p | 2g+2):                   y^2 = x^{2g+2} + x^{2g+1} + ux
    case 3 (p odd, p | 2g+1):                   y^2 = x^{2g+1} + x^{2g}  + ux
    case 4 (p = 2):                             y^2 + xy = x^{2g+1} + ux
    """
    if g < 1 or d < 1:
        raise PreconditionError("need g >= 1 and d >= 1")
    if math.gcd(d, p) != 1:
        raise PreconditionError("need gcd(d, p) = 1")
    td = UniPoly([0] * d + [1])
    one = UniPoly([1])
    if case == 1:
        if p == 2 or (2 * g + 2) * (2 * g + 1) % p == 0:
            raise PreconditionError("case 1 needs odd p coprime to (2g+2)(2g+1)")
        coeffs = [UniPoly.zero()] * (2 * g + 3)
        coeffs[0] = td
        coeffs[2 * g + 1] = one
        coeffs[2 * g + 2] = one
        return FamilyModel(1, g, p, d, 1, -1, 0, 0, coeffs, False)
    if case == 2:
        if p == 2 or (2 * g + 2) % p != 0:
            raise PreconditionError("case 2 needs odd p dividing 2g+2")
        coeffs = [UniPoly.zero()] * (2 * g + 3)
        coeffs[1] = td
        coeffs[2 * g + 1] = one
        coeffs[2 * g + 2] = one
        return FamilyModel(2, g, p, d, 1, -1, 0, 0, coeffs, False)
    if case == 3:
        if p == 2 or (2 * g + 1) % p != 0:
            raise PreconditionError("case 3 needs odd p dividing 2g+1")
        coeffs = [UniPoly.zero()] * (2 * g + 2)
        coeffs[1] = td
        coeffs[2 * g] = one
        coeffs[2 * g + 1] = one
        return FamilyModel(3, g, p, d, 1, -1, 0, 0, coeffs, False)
    if case == 4:
        if p != 2:
            raise PreconditionError("case 4 is the p = 2 family")
        coeffs = [UniPoly.zero()] * (2 * g + 2)
        coeffs[1] = td
        coeffs[2 * g + 1] = one
        return FamilyModel(4, g, p, d, 1, -1, 0, 2 * g - 1, coeffs, True)
    raise PreconditionError("case must be 1, 2, 3, or 4")


def rank_bounds(D: int, q: int):
    """(geometric, brumer_main_term): the degree bound D and the main term
    D/(2 log_q D) rounded to 4 decimal places (None when log_q D = 0)."""
    if D < 0 or q < 2:
        raise PreconditionError("need D >= 0 and q >= 2")
    if D == 0:
        return 0, None
    if D == 1:
        return 1, None  # log_q 1 = 0: main term undefined
    main = D * math.log(q) / (2 * math.log(D))
    return D, round(main, 4)
