"""Hyperelliptic models over finite fields: proper-model point counts in
odd and even characteristic, zeta numerators via Newton's identities and
the Weil functional equation, the u -> t^d pullback, Weil-polynomial
multiplicities, and the quadratic-twist rank pipeline built on them.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from fractions import Fraction

from .batch import BatchField
from .errors import BudgetError, InvariantError, PreconditionError
from .fields import (
    ExtensionField,
    FieldElement,
    UniPoly,
    enumeration_budget,
    quadratic_character,
    absolute_trace,
)


@dataclass
class HyperellipticModel:
    """y^2 = f(x) for odd characteristic; y^2 + h(x)y = f(x) for p = 2."""

    field: ExtensionField
    f: UniPoly
    h: UniPoly = dc_field(default_factory=UniPoly.zero)
    genus: int = -1

    def __post_init__(self):
        p = self.field.p
        if self.f.degree < 1:
            raise PreconditionError("f must be nonconstant")
        if p != 2:
            if not self.h.is_zero():
                raise PreconditionError("h is only meaningful for p = 2")
            if not self.f.is_squarefree():
                raise PreconditionError("f must be squarefree for odd p")
        else:
            if self.h.is_zero():
                raise PreconditionError("p = 2 needs h != 0 (y^2 = f is singular)")
            self._check_smooth_p2()
        if self.genus < 0:
            self.genus = (self.f.degree - 1) // 2
        if self.genus < 0:
            raise PreconditionError("genus must be >= 0")

    def _check_smooth_p2(self):
        """Affine smoothness: no point with y^2 + h y = f, h(x) = 0, and
        y*h'(x) = f'(x) simultaneously (the partials in char 2)."""
        F = self.field
        if F.q > 4096:
            raise BudgetError("p=2 smoothness check limited to small base fields")
        fd = self.f.derivative()
        hd = self.h.derivative()
        for x in F.elements():
            if self.h(x) != 0:
                continue
            fx, fdx, hdx = self.f(x), fd(x), hd(x)
            for y in F.elements():
                if y * y == fx and y * hdx == fdx:
                    raise PreconditionError("affine model is singular in char 2")

    def points_at_infinity(self, ext_q: int) -> int:
        """Points of the smooth proper model above x = infinity over the
        extension of cardinality ext_q."""
        deg = self.f.degree
        if self.field.p == 2:
            if deg % 2 == 1:
                return 1
            raise PreconditionError("even-degree p=2 models not supported")
        if deg % 2 == 1:
            return 1
        lc = self.f.leading()
        # two points iff the leading coefficient is a square in the
        # counting field
        e = (ext_q - 1) // 2
        return 2 if lc ** e == self.field.one() else 0


def count_points(model: HyperellipticModel, m: int = 1) -> int:
    """Points of the smooth proper model over the degree-m extension of the
    base field."""
    if m < 1:
        raise PreconditionError("m must be >= 1")
    F = model.field
    qm = F.q ** m
    if qm > enumeration_budget():
        raise BudgetError(f"q^m = {qm} exceeds enumeration budget")
    if F.k == 1:
        return _count_batch(model, m)
    if m != 1:
        raise PreconditionError(
            "extension counts are supported over prime base fields only"
        )
    return _count_scalar(model)


def _count_batch(model: HyperellipticModel, m: int) -> int:
    p = model.field.p
    bf = BatchField(p, m)
    X = bf.all_elements()
    fcoeffs = [_as_int(c) for c in model.f.coeffs]
    fx = bf.eval_poly(fcoeffs, X)
    if p != 2:
        chi = bf.legendre(fx)
        affine = int(chi.sum()) + bf.q
        return affine + model.points_at_infinity(bf.q)
    hcoeffs = [_as_int(c) for c in model.h.coeffs]
    hx = bf.eval_poly(hcoeffs, X)
    hzero = bf.is_zero(hx)
    hinv = bf.invert_nonzero(hx)
    # y = h*z turns the equation into z^2 + z = f/h^2: two solutions when
    # the trace vanishes
    ratio = bf.mul(fx, bf.square(hinv))
    tr = bf.trace(ratio)
    two_pt = int(((~hzero) & (tr == 0)).sum())
    one_pt = int(hzero.sum())
    return 2 * two_pt + one_pt + model.points_at_infinity(bf.q)


def _count_scalar(model: HyperellipticModel) -> int:
    F = model.field
    total = 0
    if F.p != 2:
        for x in F.elements():
            total += 1 + quadratic_character(F, model.f(x))
        return total + model.points_at_infinity(F.q)
    for x in F.elements():
        hx = model.h(x)
        if hx.is_zero() if isinstance(hx, FieldElement) else hx == 0:
            total += 1
        else:
            ratio = model.f(x) * (F.element(hx) ** -2)
            total += 2 if absolute_trace(F, ratio) == 0 else 0
    return total + model.points_at_infinity(F.q)


def _as_int(c) -> int:
    if isinstance(c, FieldElement):
        if any(d for d in c.rep[1:]):
            raise PreconditionError("coefficient not in the prime field")
        return c.rep[0]
    return int(c)


@dataclass
class ZetaNumerator:
    poly: UniPoly  # integer P(T), degree 2*genus
    q: int
    genus: int
    counts: list

    def check(self):
        P = self.poly
        g = self.genus
        if P[0] != 1:
            raise InvariantError("P(0) != 1")
        if P.degree != 2 * g:
            raise InvariantError("deg P != 2g")
        rev = UniPoly(
            [self.q ** g * c for c in reversed(P.scale_variable(Fraction(1, self.q)).coeffs)]
        )
        # q^g T^{2g} P(1/(qT)) has ascending coefficients q^{g-j'} * b_{2g-j}
        if rev != P:
            raise InvariantError("Weil functional equation violated")
        if P(1) <= 0:
            raise InvariantError("P(1) must be positive")

    def recovered_counts(self, up_to: int) -> list:
        """N_m implied by P for m = 1..up_to, from the power sums of its
        inverse roots via the Newton recurrence."""
        b = [self.poly[i] for i in range(self.poly.degree + 1)]
        s = []
        for m in range(1, up_to + 1):
            bm = b[m] if m < len(b) else 0
            sm = -m * bm - sum(b[j] * s[m - j - 1] for j in range(1, m))
            s.append(sm)
        return [self.q ** m + 1 - s[m - 1] for m in range(1, up_to + 1)]


def zeta_numerator(model: HyperellipticModel) -> ZetaNumerator:
    """P(T) of degree 2g from the counts N_1..N_g: Newton's identities give
    the bottom half, the functional equation fills the top half."""
    g = model.genus
    q = model.field.q
    counts = [count_points(model, m) for m in range(1, g + 1)]
    s = [q ** m + 1 - counts[m - 1] for m in range(1, g + 1)]
    b = [1]
    for m in range(1, g + 1):
        acc = sum(s[j - 1] * b[m - j] for j in range(1, m + 1))
        if acc % m != 0:
            raise InvariantError("Newton recurrence gave a non-integer")
        b.append(-acc // m)
    full = b + [q ** (g - i) * b[i] for i in range(g - 1, -1, -1)]
    zeta = ZetaNumerator(UniPoly(full), q, g, counts)
    if g >= 1 and b[1] ** 2 > 4 * g * g * q:
        raise InvariantError("b_1 violates the Weil bound")
    zeta.check()
    if zeta.recovered_counts(g) != counts:
        raise InvariantError("zeta numerator does not reproduce its counts")
    return zeta


def kummer_pullback(base_f: UniPoly, d: int, field: ExtensionField) -> HyperellipticModel:
    """Model y^2 = base_f(t^d), the degree-d cyclic pullback of
    y^2 = base_f(u).

    The genus comes out of the branch count of the hyperelliptic double
    cover (roots of the substituted polynomial, plus one above infinity at
    odd degree) and is cross-checked against floor((deg - 1)/2).
    """
    p = field.p
    if d < 1 or d % p == 0:
        raise PreconditionError("need d >= 1 and gcd(d, p) = 1")
    f0 = UniPoly([field.element(_as_int(c)) for c in base_f.coeffs])
    if f0(field.zero()) == 0:
        raise PreconditionError("base polynomial must not vanish at 0")
    if not f0.is_squarefree():
        raise PreconditionError("base polynomial must be squarefree")
    sub = f0.substitute_power(d)
    deg = sub.degree
    branch = deg + (deg % 2)  # geometric branch points of the double cover
    genus_rh = branch // 2 - 1
    genus_floor = (deg - 1) // 2
    if genus_rh != genus_floor:
        raise InvariantError("genus cross-check failed")
    return HyperellipticModel(field, sub, genus=genus_floor)


@dataclass
class WeilPolynomial:
    poly: UniPoly
    p: int
    label: str

    def check(self):
        # inverse roots of absolute value sqrt(p): P(T) = p T^2 P(1/(pT))
        c0, c1, c2 = self.poly[0], self.poly[1], self.poly[2]
        if c0 != 1 or c2 != self.p:
            raise InvariantError("quadratic Weil polynomial must be 1 + aT + pT^2")
        if c1 * c1 >= 4 * self.p:
            raise InvariantError("roots are not complex of absolute value sqrt(p)")


def weil_polynomial(p: int, a_p: int) -> WeilPolynomial:
    """1 - a_p T + p T^2 for the supersingular traces in scope."""
    if a_p == 0 and p > 2:
        label = "zeta4"
    elif p == 3 and a_p in (3, -3):
        label = "zeta12"
    elif p == 2 and a_p in (2, -2):
        label = "zeta8"
    else:
        raise PreconditionError(f"(p, a_p) = ({p}, {a_p}) is not in scope")
    w = WeilPolynomial(UniPoly([1, -a_p, p]), p, label)
    w.check()
    return w


def weil_multiplicity(zeta: ZetaNumerator, w: WeilPolynomial) -> int:
    """Largest m with w.poly^m dividing the zeta numerator."""
    if w.p != _char(zeta):
        raise PreconditionError("characteristic mismatch")
    mult = 0
    cur = zeta.poly
    while True:
        nxt = cur.exact_div(w.poly)
        if nxt is None or any(not _is_integer(c) for c in nxt.coeffs):
            return mult
        cur = nxt.map_coeffs(lambda c: int(c))
        mult += 1


def _is_integer(c) -> bool:
    return isinstance(c, int) or (isinstance(c, Fraction) and c.denominator == 1)


def _char(zeta: ZetaNumerator) -> int:
    q = zeta.q
    p = 2
    while q % p:
        p += 1
    return p


def twist_rank(a_p: int, p: int, base_f: UniPoly, n: int) -> int:
    """Rank contributed by the supersingular curve with trace a_p in the
    Jacobian of the d = p^n + 1 pullback: twice the multiplicity of its
    Weil polynomial in the zeta numerator.

    Selection rules: (odd p, a_p = 0, n odd), (p = 3, a_p = +-3,
    n = 3 mod 6), (p = 2, a_p = +-2, n = 2 mod 4).
    """
    w = weil_polynomial(p, a_p)
    if a_p == 0:
        if n % 2 != 1:
            raise PreconditionError("a_p = 0 requires n odd")
    elif p == 3:
        if n % 6 != 3:
            raise PreconditionError("p = 3, a_p = +-3 requires n = 3 mod 6")
    elif p == 2:
        if n % 4 != 2:
            raise PreconditionError("p = 2, a_p = +-2 requires n = 2 mod 4")
    d = p ** n + 1
    F = ExtensionField.prime(p)
    if p == 2:
        sub = UniPoly([F.element(_as_int(c)) for c in base_f.coeffs]).substitute_power(d)
        if sub.degree % 2 == 0:
            raise PreconditionError("p = 2 base polynomial must have odd degree")
        model = HyperellipticModel(F, sub, h=UniPoly([F.one()]))
    else:
        model = kummer_pullback(base_f, d, F)
    zeta = zeta_numerator(model)
    return 2 * weil_multiplicity(zeta, w)


def count_bivariate_zeros(field: ExtensionField, g) -> int:
    """#{(x, x') in F_q^2 : g(x, x') = 0} by direct enumeration; g is a
    two-argument callable on field elements."""
    q2 = field.q ** 2
    if q2 > enumeration_budget():
        raise BudgetError(f"q^2 = {q2} exceeds enumeration budget")
    elements = list(field.elements())
    total = 0
    for x in elements:
        for xp in elements:
            v = g(x, xp)
            if (v.is_zero() if isinstance(v, FieldElement) else v == 0):
                total += 1
    return total


def pair_difference_count(field: ExtensionField, f: UniPoly) -> int:
    """#{(x, x'): f(x) = f(x')}, the zero count of f(x) - f(x')."""
    f0 = UniPoly([field.element(_as_int(c)) for c in f.coeffs])
    return count_bivariate_zeros(field, lambda x, xp: f0(x) - f0(xp))
