"""Exact arithmetic in finite fields F_{p^k} presented as polynomial quotient
rings F_p[x]/(m(x)), univariate polynomial utilities, and enumeration of the
finite places of the projective line over F_q.

Conventions used throughout the package:

  * polynomial coefficient vectors are little-endian (constant term first);
  * the degree of the zero polynomial is reported as -1;
  * field elements are immutable and fields are safe to share across workers.
"""

from __future__ import annotations

import os
import random
from fractions import Fraction
from typing import Iterator, Sequence

from .errors import BudgetError, PreconditionError

DEFAULT_ENUM_BUDGET = 20_000_000

# Multiplication via discrete-log tables is worthwhile only for small fields;
# above this size the table build cost dominates.
DLOG_TABLE_LIMIT = 1 << 16


def enumeration_budget() -> int:
    """Current enumeration cap (overridable via TOWERLAB_BUDGET)."""
    raw = os.environ.get("TOWERLAB_BUDGET")
    if raw:
        return int(raw)
    return DEFAULT_ENUM_BUDGET


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


# ---------------------------------------------------------------------------
# Dense polynomials over the prime field, coefficients as ints mod p.
# Internal helpers; the public polynomial type is UniPoly below.
# ---------------------------------------------------------------------------

def _pp_trim(c: list) -> list:
    while c and c[-1] == 0:
        c.pop()
    return c


def _pp_add(a, b, p):
    n = max(len(a), len(b))
    out = [0] * n
    for i, x in enumerate(a):
        out[i] = x
    for i, x in enumerate(b):
        out[i] = (out[i] + x) % p
    return _pp_trim(out)


def _pp_sub(a, b, p):
    n = max(len(a), len(b))
    out = [0] * n
    for i, x in enumerate(a):
        out[i] = x
    for i, x in enumerate(b):
        out[i] = (out[i] - x) % p
    return _pp_trim(out)


def _pp_mul(a, b, p):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return _pp_trim([c % p for c in out])


def _pp_divmod(a, b, p):
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    a = list(a)
    q = [0] * max(len(a) - len(b) + 1, 0)
    inv_lead = pow(b[-1], -1, p)
    while len(a) >= len(b) and a:
        coef = (a[-1] * inv_lead) % p
        deg = len(a) - len(b)
        q[deg] = coef
        if coef:
            for i, x in enumerate(b):
                a[deg + i] = (a[deg + i] - coef * x) % p
        a.pop()
        _pp_trim(a)
    return _pp_trim(q), a


def _pp_gcd(a, b, p):
    a, b = list(a), list(b)
    while b:
        a, b = b, _pp_divmod(a, b, p)[1]
    if a:
        inv = pow(a[-1], -1, p)
        a = [(c * inv) % p for c in a]
    return a


def _pp_powmod(base, e, mod, p):
    result = [1]
    base = _pp_divmod(base, mod, p)[1]
    while e:
        if e & 1:
            result = _pp_divmod(_pp_mul(result, base, p), mod, p)[1]
        base = _pp_divmod(_pp_mul(base, base, p), mod, p)[1]
        e >>= 1
    return result


def _pp_inverse(a, mod, p):
    """Inverse of a modulo mod over F_p by the extended Euclidean algorithm."""
    r0, r1 = list(mod), list(a)
    s0, s1 = [], [1]
    while r1:
        q, r = _pp_divmod(r0, r1, p)
        r0, r1 = r1, r
        s0, s1 = s1, _pp_sub(s0, _pp_mul(q, s1, p), p)
    if len(r0) != 1:
        raise ZeroDivisionError("element not invertible")
    inv = pow(r0[0], -1, p)
    return _pp_trim([(c * inv) % p for c in s0])


def _prime_factors(n: int) -> list:
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def _pp_is_irreducible(m, p):
    """Deterministic irreducibility test: x^{p^k} == x mod m together with
    gcd(x^{p^{k/r}} - x, m) = 1 for every prime r dividing k."""
    k = len(m) - 1
    if k < 1:
        return False
    if k == 1:
        return True
    x = [0, 1]
    xq = _pp_powmod(x, p ** k, m, p)
    if _pp_sub(xq, x, p):
        return False
    for r in _prime_factors(k):
        xe = _pp_powmod(x, p ** (k // r), m, p)
        if len(_pp_gcd(_pp_sub(xe, x, p), m, p)) != 1:
            return False
    return True


# ---------------------------------------------------------------------------
# Finite fields
# ---------------------------------------------------------------------------

class ExtensionField:
    """F_{p^k} = F_p[x]/(m(x)) with m monic irreducible of degree k.

    Immutable after construction; multiplication uses discrete-log tables
    (built lazily) when q fits, otherwise polynomial reduction.
    """

    def __init__(self, p: int, modulus: Sequence[int]):
        if not is_prime(p):
            raise PreconditionError(f"p = {p} is not prime")
        mod = [c % p for c in modulus]
        _pp_trim(mod)
        if len(mod) < 2:
            raise PreconditionError("modulus must have degree >= 1")
        if mod[-1] != 1:
            raise PreconditionError("modulus must be monic")
        if not _pp_is_irreducible(mod, p):
            raise PreconditionError(f"modulus {mod} is reducible over F_{p}")
        self.p = p
        self.modulus = tuple(mod)
        self.k = len(mod) - 1
        self.q = p ** self.k
        self._exp = None   # dlog tables, built lazily
        self._log = None

    @classmethod
    def prime(cls, p: int) -> "ExtensionField":
        return cls(p, (0, 1))

    @classmethod
    def of_degree(cls, p: int, k: int, seed: int = 0) -> "ExtensionField":
        return cls(p, find_irreducible_modulus(p, k, seed=seed))

    # -- construction of elements ------------------------------------------

    def element(self, value) -> "FieldElement":
        if isinstance(value, FieldElement):
            if value.field is not self:
                raise PreconditionError("element belongs to a different field")
            return value
        if isinstance(value, int):
            rep = [value % self.p] + [0] * (self.k - 1)
            return FieldElement(self, tuple(rep))
        rep = [int(c) % self.p for c in value]
        if len(rep) > self.k:
            rep = _pp_divmod(rep, list(self.modulus), self.p)[1]
        rep = rep + [0] * (self.k - len(rep))
        return FieldElement(self, tuple(rep[: self.k]))

    def zero(self) -> "FieldElement":
        return self.element(0)

    def one(self) -> "FieldElement":
        return self.element(1)

    def gen(self) -> "FieldElement":
        """The class of x; a generator of the ring (not always of F_q^x)."""
        if self.k == 1:
            return self.element(1)
        return self.element([0, 1])

    def elements(self) -> Iterator["FieldElement"]:
        """All q elements, ordered by coefficient vector (constant term fastest)."""
        for code in range(self.q):
            yield self.element_from_code(code)

    def element_from_code(self, code: int) -> "FieldElement":
        rep = []
        for _ in range(self.k):
            rep.append(code % self.p)
            code //= self.p
        return FieldElement(self, tuple(rep))

    # -- discrete-log tables -----------------------------------------------

    def _ensure_dlog(self):
        if self._exp is not None or self.q > DLOG_TABLE_LIMIT:
            return
        g = self._find_generator()
        exp = [0] * (self.q - 1)
        log = {}
        cur = [1] + [0] * (self.k - 1)
        grep = list(g.rep)
        mod = list(self.modulus)
        for i in range(self.q - 1):
            code = 0
            for c in reversed(cur):
                code = code * self.p + c
            exp[i] = code
            log[code] = i
            cur = _pp_divmod(_pp_mul(cur, grep, self.p), mod, self.p)[1]
            cur = cur + [0] * (self.k - len(cur))
        self._exp = exp
        self._log = log

    def _find_generator(self) -> "FieldElement":
        n = self.q - 1
        primes = _prime_factors(n)
        mod = list(self.modulus)
        for code in range(1, self.q):
            cand = self.element_from_code(code)
            if cand.is_zero():
                continue
            rep = _pp_trim(list(cand.rep))
            if all(
                _pp_powmod(rep, n // r, mod, self.p) != [1] for r in primes
            ):
                return cand
        raise AssertionError("no generator found")  # pragma: no cover

    # -- misc --------------------------------------------------------------

    def __eq__(self, other):
        return (
            isinstance(other, ExtensionField)
            and self.p == other.p
            and self.modulus == other.modulus
        )

    def __hash__(self):
        return hash((self.p, self.modulus))

    def __repr__(self):
        return f"ExtensionField(p={self.p}, k={self.k})"


class FieldElement:
    """An element of an ExtensionField, stored as its little-endian
    coefficient vector over F_p."""

    __slots__ = ("field", "rep")

    def __init__(self, field: ExtensionField, rep: tuple):
        self.field = field
        self.rep = rep

    # spec name for the owning field
    @property
    def owner(self) -> ExtensionField:
        return self.field

    def code(self) -> int:
        c = 0
        for d in reversed(self.rep):
            c = c * self.field.p + d
        return c

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.rep)

    def _coerce(self, other):
        if isinstance(other, FieldElement):
            if other.field != self.field:
                raise PreconditionError("mixed-field arithmetic")
            return other
        if isinstance(other, int):
            return self.field.element(other)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        p = self.field.p
        return FieldElement(
            self.field, tuple((a + b) % p for a, b in zip(self.rep, o.rep))
        )

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        p = self.field.p
        return FieldElement(
            self.field, tuple((a - b) % p for a, b in zip(self.rep, o.rep))
        )

    def __rsub__(self, other):
        return (-self) + other

    def __neg__(self):
        p = self.field.p
        return FieldElement(self.field, tuple((-a) % p for a in self.rep))

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        f = self.field
        f._ensure_dlog()
        if f._exp is not None:
            if self.is_zero() or o.is_zero():
                return f.zero()
            i = (f._log[self.code()] + f._log[o.code()]) % (f.q - 1)
            return f.element_from_code(f._exp[i])
        prod = _pp_mul(list(self.rep), list(o.rep), f.p)
        rem = _pp_divmod(prod, list(f.modulus), f.p)[1]
        return FieldElement(f, tuple(rem + [0] * (f.k - len(rem))))

    __rmul__ = __mul__

    def inverse(self) -> "FieldElement":
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero field element")
        f = self.field
        f._ensure_dlog()
        if f._exp is not None:
            i = (-f._log[self.code()]) % (f.q - 1)
            return f.element_from_code(f._exp[i])
        inv = _pp_inverse(list(self.rep), list(f.modulus), f.p)
        return FieldElement(f, tuple(inv + [0] * (f.k - len(inv))))

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self * o.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        f = self.field
        f._ensure_dlog()
        if f._exp is not None and not self.is_zero():
            i = (f._log[self.code()] * e) % (f.q - 1)
            return f.element_from_code(f._exp[i])
        result = f.one()
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, int):
            other = self.field.element(other)
        if not isinstance(other, FieldElement):
            return NotImplemented
        return self.field == other.field and self.rep == other.rep

    def __hash__(self):
        return hash((self.field.p, self.field.modulus, self.rep))

    def __repr__(self):
        return f"FieldElement({list(self.rep)} over F_{self.field.p}^{self.field.k})"


# ---------------------------------------------------------------------------
# Character and trace
# ---------------------------------------------------------------------------

def quadratic_character(field: ExtensionField, x: FieldElement) -> int:
    """x^((q-1)/2) mapped to {-1, 0, 1}; rejects characteristic 2."""
    if field.p == 2:
        raise PreconditionError("quadratic character undefined in characteristic 2")
    x = field.element(x)
    if x.is_zero():
        return 0
    v = x ** ((field.q - 1) // 2)
    if v == field.one():
        return 1
    if v == -field.one():
        return -1
    raise AssertionError("square-root-of-unity check failed")  # pragma: no cover


def absolute_trace(field: ExtensionField, x: FieldElement) -> int:
    """x + x^p + ... + x^{p^{k-1}}, returned as an integer in [0, p)."""
    x = field.element(x)
    acc = x
    term = x
    for _ in range(field.k - 1):
        term = term ** field.p
        acc = acc + term
    if any(c != 0 for c in acc.rep[1:]):
        raise AssertionError("trace left the prime field")  # pragma: no cover
    return acc.rep[0]


# ---------------------------------------------------------------------------
# Generic univariate polynomials
# ---------------------------------------------------------------------------

def _is_zero_coeff(c) -> bool:
    if isinstance(c, FieldElement):
        return c.is_zero()
    return c == 0


class UniPoly:
    """Dense univariate polynomial over ints, Fractions, or a finite field.

    Coefficients are little-endian; trailing zeros are stripped so the
    leading coefficient is nonzero unless the polynomial is zero.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs):
        cs = list(coeffs)
        while cs and _is_zero_coeff(cs[-1]):
            cs.pop()
        self.coeffs = tuple(cs)

    # -- basic structure ---------------------------------------------------

    @property
    def degree(self) -> int:
        """Degree; -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def __bool__(self):
        return bool(self.coeffs)

    def __getitem__(self, i: int):
        if 0 <= i < len(self.coeffs):
            return self.coeffs[i]
        return 0

    def leading(self):
        if not self.coeffs:
            raise ValueError("zero polynomial has no leading coefficient")
        return self.coeffs[-1]

    @staticmethod
    def zero() -> "UniPoly":
        return UniPoly(())

    @staticmethod
    def constant(c) -> "UniPoly":
        return UniPoly((c,))

    @staticmethod
    def monomial(deg: int, c=1) -> "UniPoly":
        return UniPoly([0] * deg + [c])

    # -- ring operations ---------------------------------------------------

    def __add__(self, other):
        other = self._lift(other)
        n = max(len(self.coeffs), len(other.coeffs))
        out = []
        for i in range(n):
            a = self[i] if i < len(self.coeffs) else None
            b = other[i] if i < len(other.coeffs) else None
            if a is None:
                out.append(b)
            elif b is None:
                out.append(a)
            else:
                out.append(a + b)
        return UniPoly(out)

    __radd__ = __add__

    def __neg__(self):
        return UniPoly([-c for c in self.coeffs])

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._lift(other)
        if self.is_zero() or other.is_zero():
            return UniPoly.zero()
        out = [None] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            for j, b in enumerate(other.coeffs):
                t = a * b
                out[i + j] = t if out[i + j] is None else out[i + j] + t
        return UniPoly(out)

    __rmul__ = __mul__

    def __pow__(self, e: int):
        result = UniPoly.constant(1)
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def _lift(self, other) -> "UniPoly":
        if isinstance(other, UniPoly):
            return other
        return UniPoly.constant(other)

    def __eq__(self, other):
        if not isinstance(other, UniPoly):
            other = UniPoly.constant(other)
        if len(self.coeffs) != len(other.coeffs):
            return False
        return all(a == b for a, b in zip(self.coeffs, other.coeffs))

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        return f"UniPoly({list(self.coeffs)})"

    # -- evaluation and calculus -------------------------------------------

    def __call__(self, x):
        acc = None
        for c in reversed(self.coeffs):
            acc = c if acc is None else acc * x + c
        if acc is None:
            return 0 * x if not isinstance(x, int) else 0
        return acc

    def derivative(self) -> "UniPoly":
        return UniPoly([i * c for i, c in enumerate(self.coeffs)][1:])

    def substitute_power(self, d: int) -> "UniPoly":
        """T -> T^d."""
        if self.is_zero():
            return self
        out = [0] * (self.degree * d + 1)
        for i, c in enumerate(self.coeffs):
            out[i * d] = c
        return UniPoly(out)

    def scale_variable(self, s) -> "UniPoly":
        """T -> s*T."""
        out = []
        power = 1
        for c in self.coeffs:
            out.append(c * power)
            power = power * s
        return UniPoly(out)

    def reversed_coeffs(self, length: int | None = None) -> "UniPoly":
        """Coefficient reversal T^n * p(1/T), padded to the given length."""
        n = length if length is not None else len(self.coeffs)
        cs = list(self.coeffs) + [0] * (n - len(self.coeffs))
        return UniPoly(list(reversed(cs)))

    # -- division ----------------------------------------------------------

    def divmod(self, other: "UniPoly"):
        """Quotient and remainder; coefficients must support exact division
        by other's leading coefficient (field or Fraction)."""
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        lead = other.leading()
        if isinstance(lead, FieldElement):
            inv = lead.inverse()
        else:
            inv = Fraction(1, 1) / Fraction(lead)
        rem = list(self.coeffs)
        qdeg = len(rem) - len(other.coeffs)
        q = [0] * (qdeg + 1 if qdeg >= 0 else 0)
        while len(rem) >= len(other.coeffs) and rem:
            coef = rem[-1] * inv
            deg = len(rem) - len(other.coeffs)
            q[deg] = coef
            for i, c in enumerate(other.coeffs):
                rem[deg + i] = rem[deg + i] - coef * c
            rem.pop()
            while rem and _is_zero_coeff(rem[-1]):
                rem.pop()
        return UniPoly(q), UniPoly(rem)

    def exact_div(self, other: "UniPoly"):
        """Exact quotient, or None when other does not divide self.

        Integer polynomials are lifted through Fractions and the quotient is
        returned with integer coefficients when the division is exact.
        """
        if self.is_zero():
            return UniPoly.zero()
        q, r = self.divmod(other)
        if not r.is_zero():
            return None
        out = []
        for c in q.coeffs:
            if isinstance(c, Fraction) and c.denominator == 1:
                out.append(int(c))
            else:
                out.append(c)
        return UniPoly(out)

    def gcd(self, other: "UniPoly") -> "UniPoly":
        """Monic gcd; coefficients must form a field (or Fractions)."""
        a, b = self, other
        while not b.is_zero():
            a, b = b, a.divmod(b)[1]
        if a.is_zero():
            return a
        lead = a.leading()
        if isinstance(lead, FieldElement):
            inv = lead.inverse()
        else:
            inv = Fraction(1) / Fraction(lead)
        return UniPoly([c * inv for c in a.coeffs])

    def is_squarefree(self) -> bool:
        return self.gcd(self.derivative()).degree == 0

    def map_coeffs(self, fn) -> "UniPoly":
        return UniPoly([fn(c) for c in self.coeffs])


# ---------------------------------------------------------------------------
# Irreducible polynomial enumeration (finite places of P^1 over F_q)
# ---------------------------------------------------------------------------

def mobius(n: int) -> int:
    result = 1
    d = 2
    while d * d <= n:
        if n % d == 0:
            n //= d
            if n % d == 0:
                return 0
            result = -result
        d += 1
    if n > 1:
        result = -result
    return result


def count_monic_irreducibles(q: int, m: int) -> int:
    """Necklace count (1/m) * sum_{e|m} mu(e) q^{m/e}."""
    total = 0
    for e in range(1, m + 1):
        if m % e == 0:
            total += mobius(e) * q ** (m // e)
    assert total % m == 0
    return total // m


def enumerate_monic_irreducibles(
    field: ExtensionField, max_deg: int, budget: int | None = None
):
    """Yield every monic irreducible over F_q of degree <= max_deg exactly
    once, in (degree, coefficient-lexicographic) order.

    Irreducibility by trial division against the already-produced
    irreducibles of at most half the degree (exact and deterministic).
    """
    if max_deg < 1:
        raise PreconditionError("max_deg must be >= 1")
    cap = budget if budget is not None else enumeration_budget()
    if field.q ** max_deg > cap:
        raise BudgetError(
            f"q^max_deg = {field.q}^{max_deg} exceeds enumeration budget {cap}"
        )
    by_degree: dict[int, list[UniPoly]] = {}
    for m in range(1, max_deg + 1):
        found = []
        divisors = [
            g for d in range(1, m // 2 + 1) for g in by_degree.get(d, ())
        ]
        for poly in _monic_polys_lex(field, m):
            if all(poly.divmod(g)[1].degree >= 0 for g in divisors):
                found.append(poly)
                yield poly
        by_degree[m] = found


def _monic_polys_lex(field: ExtensionField, m: int):
    """Monic degree-m polynomials, lexicographic in (c_{m-1}, ..., c_0)."""
    one = field.one()
    q = field.q
    for code in range(q ** m):
        coeffs = []
        c = code
        for _ in range(m):
            coeffs.append(field.element_from_code(c % q))
            c //= q
        # code's least-significant digit is c_0, so increasing code is
        # lexicographic in (c_{m-1}, ..., c_0)
        yield UniPoly(coeffs + [one])


def find_irreducible_modulus(p: int, k: int, seed: int = 0) -> tuple:
    """A deterministic monic irreducible of degree k over F_p (little-endian).

    Tries sparse candidates first, then seeded pseudo-random ones; the choice
    depends only on (p, k, seed).
    """
    if k == 1:
        return (0, 1)
    # sparse candidates x^k + c*x^j + c0
    for c0 in range(1, p):
        for j in range(0, k):
            for c in range(0 if j else 1, p):
                cand = [0] * (k + 1)
                cand[0] = c0
                cand[k] = 1
                if j:
                    cand[j] = c
                if _pp_is_irreducible(_pp_trim(list(cand)) , p):
                    return tuple(cand)
    rng = random.Random(f"modulus:{p}:{k}:{seed}")
    while True:
        cand = [rng.randrange(p) for _ in range(k)] + [1]
        if _pp_is_irreducible(cand, p):
            return tuple(cand)


# ---------------------------------------------------------------------------
# Text serialization
# ---------------------------------------------------------------------------

def poly_to_str(poly: UniPoly) -> str:
    """Comma-separated little-endian coefficients, e.g. "1,0,3" = 1 + 3T^2."""
    out = []
    for c in poly.coeffs:
        if isinstance(c, FieldElement):
            if c.field.k != 1:
                raise PreconditionError(
                    "text serialization supports prime-field coefficients only"
                )
            out.append(str(c.rep[0]))
        else:
            out.append(str(int(c)))
    return ",".join(out) if out else "0"


def poly_from_str(text: str, field: ExtensionField | None = None) -> UniPoly:
    parts = [t.strip() for t in text.split(",") if t.strip() != ""]
    ints = [int(t) for t in parts]
    if field is None:
        return UniPoly(ints)
    return UniPoly([field.element(c) for c in ints])


def field_to_str(field: ExtensionField) -> str:
    return f"p={field.p};m=" + ",".join(str(c) for c in field.modulus)


def field_from_str(text: str) -> ExtensionField:
    parts = dict(kv.split("=") for kv in text.split(";"))
    p = int(parts["p"])
    modulus = [int(c) for c in parts["m"].split(",")]
    return ExtensionField(p, modulus)
