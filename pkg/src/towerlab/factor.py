"""Factorization of univariate polynomials over finite fields of odd
characteristic into distinct monic irreducible factors.

Distinct-degree splitting is deterministic (gcd with x^{q^i} - x); the
equal-degree stage is Cantor-Zassenhaus with a seeded generator, so runs
are reproducible, and the result is verified by multiplying back.
"""

from __future__ import annotations

import random

from .errors import InvariantError, PreconditionError
from .fields import ExtensionField, FieldElement, UniPoly


def _monic(f: UniPoly) -> UniPoly:
    lead = f.leading()
    if lead == 1:
        return f
    inv = lead.inverse() if isinstance(lead, FieldElement) else 1 / lead
    return UniPoly([c * inv for c in f.coeffs])


def poly_powmod(base: UniPoly, e: int, mod: UniPoly) -> UniPoly:
    result = UniPoly([_one_like(mod)])
    base = base.divmod(mod)[1]
    while e:
        if e & 1:
            result = (result * base).divmod(mod)[1]
        base = (base * base).divmod(mod)[1]
        e >>= 1
    return result


def _one_like(f: UniPoly):
    c = f.leading()
    if isinstance(c, FieldElement):
        return c.field.one()
    return 1


def squarefree_distinct_part(f: UniPoly, field: ExtensionField) -> UniPoly:
    """Monic product of the distinct irreducible factors of f (the radical)."""
    f = _monic(f)
    if f.degree == 0:
        return f
    d = f.derivative()
    if d.is_zero():
        # f is a p-th power: take the p-th root coefficientwise
        p = field.p
        root = []
        for i in range(0, f.degree + 1, p):
            c = f[i]
            if not isinstance(c, FieldElement):
                c = field.element(c)
            root.append(c ** (field.q // p))
        return squarefree_distinct_part(UniPoly(root), field)
    g = f.gcd(d)
    part = f.exact_div(g)
    if part is None:
        raise InvariantError("gcd division failed")
    part = _monic(part)
    if g.degree == 0:
        return part
    # factors with multiplicity divisible by p live entirely inside g;
    # strip what we have found and recurse on the rest
    rest = g
    for _ in range(f.degree):
        nxt = rest.gcd(part)
        if nxt.degree == 0:
            break
        quotient = rest.exact_div(nxt)
        if quotient is None:
            raise InvariantError("radical stripping failed")
        rest = quotient
    if rest.degree == 0:
        return part
    return _monic(part * squarefree_distinct_part(rest, field))


def distinct_irreducible_factors(f: UniPoly, field: ExtensionField, seed: int = 0):
    """Sorted list of the distinct monic irreducible factors of f."""
    if field.p == 2:
        raise PreconditionError("factorization implemented for odd q only")
    if f.is_zero():
        raise PreconditionError("cannot factor the zero polynomial")
    rad = squarefree_distinct_part(f, field)
    factors = []
    x = UniPoly([field.zero(), field.one()])
    remaining = rad
    q = field.q
    i = 0
    while remaining.degree > 0:
        i += 1
        if 2 * i > remaining.degree:
            factors.append(remaining)  # what is left is irreducible
            break
        h = poly_powmod(x, q ** i, remaining)
        g = (h - x).gcd(remaining)
        if g.degree > 0:
            factors.extend(_equal_degree_split(g, i, field, seed))
            quotient = remaining.exact_div(g)
            if quotient is None:
                raise InvariantError("distinct-degree division failed")
            remaining = _monic(quotient)
    product = UniPoly([field.one()])
    for fac in factors:
        product = product * fac
    if product != rad:
        raise InvariantError("factorization does not multiply back")
    factors.sort(key=_factor_sort_key)
    return factors


def _factor_sort_key(g: UniPoly):
    codes = [
        c.code() if isinstance(c, FieldElement) else int(c)
        for c in reversed(g.coeffs)
    ]
    return (g.degree, codes)


def _equal_degree_split(g: UniPoly, i: int, field: ExtensionField, seed: int):
    """Split a squarefree product of degree-i irreducibles."""
    if g.degree == i:
        return [g]
    rng = random.Random(f"edf:{field.p}:{field.modulus}:{g.degree}:{i}:{seed}")
    q = field.q
    exponent = (q ** i - 1) // 2
    stack = [g]
    out = []
    while stack:
        cur = stack.pop()
        if cur.degree == i:
            out.append(cur)
            continue
        while True:
            r = UniPoly(
                [field.element(rng.randrange(q)) for _ in range(cur.degree)]
            )
            if r.degree < 1:
                continue
            u = poly_powmod(r, exponent, cur)
            w = (u - UniPoly([field.one()])).gcd(cur)
            if 0 < w.degree < cur.degree:
                quotient = cur.exact_div(w)
                if quotient is None:
                    raise InvariantError("equal-degree division failed")
                stack.append(w)
                stack.append(_monic(quotient))
                break
    return out
