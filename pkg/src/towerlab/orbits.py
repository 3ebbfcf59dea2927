"""Orbits of multiplication by q on Z/dZ, with the self-duality and
character-order classification they carry; the rank predictor for the
Kummer-tower families; the product of predicted central-point factors; and
the binomial-parity calculations for the conductor-exponent search.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .errors import InvariantError, PreconditionError
from .fields import UniPoly


@dataclass
class Orbit:
    elements: tuple  # sorted residues mod d
    d: int

    @property
    def size(self) -> int:
        return len(self.elements)

    @property
    def self_dual(self) -> bool:
        neg = {(-x) % self.d for x in self.elements}
        return neg == set(self.elements)

    @property
    def order_class(self) -> str:
        """Multiplicative order of the residues as characters of mu_d:
        'trivial' for {0}, 'order-two' for {d/2}, 'higher' otherwise."""
        x = self.elements[0]
        if x == 0:
            return "trivial"
        if (2 * x) % self.d == 0:
            return "order-two"
        return "higher"


@dataclass
class OrbitDecomposition:
    d: int
    q: int
    b: int  # multiplicative order of q mod d
    orbits: list = field(default_factory=list)

    def higher_selfdual(self) -> list:
        return [o for o in self.orbits if o.self_dual and o.order_class == "higher"]


def orbit_decomposition(d: int, q: int) -> OrbitDecomposition:
    """Partition of Z/dZ into orbits of x -> q*x, sorted by minimal element."""
    if d < 1:
        raise PreconditionError("d must be >= 1")
    if math.gcd(q, d) != 1:
        raise PreconditionError(f"gcd(q, d) = {math.gcd(q, d)} != 1")
    b = 1
    acc = q % d
    while acc != 1 % d:
        acc = acc * q % d
        b += 1
    seen = [False] * d
    orbits = []
    for start in range(d):
        if seen[start]:
            continue
        cur = start
        elems = []
        while not seen[cur]:
            seen[cur] = True
            elems.append(cur)
            cur = cur * q % d
        orbits.append(Orbit(tuple(sorted(elems)), d))
    return OrbitDecomposition(d, q, b, orbits)


def selfdual_higher_count(q: int, n: int) -> tuple:
    """(actual, stated lower bound) for the count of higher-order self-dual
    orbits at d = q^n + 1.

    Since q^n = -1 mod d every orbit is self-dual; the bound (q^n - 1)/2n is
    reported rounded up, and the actual count is asserted to meet its floor.
    """
    if q < 2 or n < 1:
        raise PreconditionError("need q >= 2 and n >= 1")
    d = q ** n + 1
    dec = orbit_decomposition(d, q)
    for o in dec.orbits:
        assert o.self_dual, "all orbits must be self-dual when d = q^n + 1"
    actual = len(dec.higher_selfdual())
    bound = -((q ** n - 1) // -(2 * n))  # ceil
    assert actual >= (q ** n - 1) // (2 * n)
    return actual, bound


def predicted_divisor(
    dec: OrbitDecomposition, w: int, sign_rho: int, excluded=()
) -> UniPoly:
    """Product over included higher-order self-dual orbits o of
    1 - epsilon * q^((w+1)|o|/2) * T^|o|, with epsilon = -sign_rho."""
    if sign_rho not in (1, -1):
        raise PreconditionError("sign_rho must be +1 or -1")
    epsilon = -sign_rho
    excluded_sets = {frozenset(o.elements if isinstance(o, Orbit) else o) for o in excluded}
    result = UniPoly([1])
    for o in dec.orbits:
        if frozenset(o.elements) in excluded_sets:
            continue
        if o.order_class != "higher":
            continue
        if not o.self_dual:
            raise PreconditionError(
                f"orbit {o.elements} is not self-dual; exclude it explicitly"
            )
        e = (w + 1) * o.size
        if e % 2 != 0:
            raise PreconditionError(
                f"(w+1)*|o| = {e} is odd: factor exponent not integral"
            )
        scale = dec.q ** (e // 2)
        result = result * UniPoly([1] + [0] * (o.size - 1) + [-epsilon * scale])
    return result


@dataclass
class TowersPrediction:
    q: int
    n: int
    d: int
    w: int
    sign_rho: int
    epsilon: int
    good_orbits: list
    excluded_count: int
    lower_bound_center: int
    lower_bound_extended: int
    asymptotic_form: float  # d/(2n) - excluded_count


def towers_rank_bound(
    q: int, n: int, w: int, sign_rho: int, excluded_count: int = 0
) -> TowersPrediction:
    """Central-point and extended-field vanishing lower bounds at d = q^n+1,
    counting one order of vanishing per included higher-order self-dual
    orbit (|o| orders after extending constants by F_{q^{2n}})."""
    if sign_rho != -1:
        raise PreconditionError(
            "the center-point bound needs sign -1; use predicted_divisor "
            "directly for the orthogonal case"
        )
    if excluded_count < 0:
        raise PreconditionError("excluded_count must be >= 0")
    d = q ** n + 1
    dec = orbit_decomposition(d, q)
    good = dec.higher_selfdual()
    center = max(len(good) - excluded_count, 0)
    # drop the largest orbits first: an adversarial exclusion still leaves
    # at least this much
    sizes = sorted((o.size for o in good), reverse=True)
    extended = max(sum(sizes[excluded_count:]), 0)
    return TowersPrediction(
        q=q,
        n=n,
        d=d,
        w=w,
        sign_rho=sign_rho,
        epsilon=-sign_rho,
        good_orbits=good,
        excluded_count=excluded_count,
        lower_bound_center=center,
        lower_bound_extended=extended,
        asymptotic_form=d / (2 * n) - excluded_count,
    )


def av2_conductor_exponent(g: int, k: int) -> int:
    """C(2g-2, k-1) - C(2g-2, k-3) for odd k with 3 <= k <= g."""
    if k % 2 == 0:
        raise PreconditionError("k must be odd")
    if not 3 <= k <= g:
        raise PreconditionError("need 3 <= k <= g")
    return math.comb(2 * g - 2, k - 1) - math.comb(2 * g - 2, k - 3)


def _carries_base2(a: int, b: int) -> int:
    carries = 0
    carry = 0
    while a or b or carry:
        s = (a & 1) + (b & 1) + carry
        carry = s >> 1
        carries += carry
        a >>= 1
        b >>= 1
    return carries


def binomial_parity_by_carries(n: int, m: int) -> int:
    """Parity of C(n, m) from the carry count when adding m and n-m in base
    2: the binomial is odd exactly when there are no carries."""
    if not 0 <= m <= n:
        return 0
    return 1 if _carries_base2(m, n - m) == 0 else 0


def av2_find_g(k: int, search_limit: int = 10_000) -> int:
    """Smallest g in [k, search_limit] making the conductor-exponent
    difference odd; the parity is computed both by direct subtraction and by
    carry counting and the two must agree."""
    if k < 3 or k % 2 == 0:
        raise PreconditionError("k must be odd and >= 3")
    for g in range(k, search_limit + 1):
        direct = av2_conductor_exponent(g, k) % 2
        by_carries = (
            binomial_parity_by_carries(2 * g - 2, k - 1)
            ^ binomial_parity_by_carries(2 * g - 2, k - 3)
        )
        if direct != by_carries:
            raise InvariantError(f"parity cross-check failed at g={g}, k={k}")
        if direct == 1:
            return g
    raise PreconditionError(f"no qualifying g <= {search_limit} for k={k}")
