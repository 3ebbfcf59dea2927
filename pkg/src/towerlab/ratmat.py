"""Exact linear algebra over the rationals for small dense matrices.

Matrices are lists of lists of ints or Fractions.  Characteristic
polynomials of larger matrices go through a multi-modular Faddeev-LeVerrier
pass (numpy int64 arithmetic per prime, CRT reconstruction against an exact
Hadamard-type bound), which keeps the 30x30 instances fast while staying
exact.
"""

from __future__ import annotations

import math
from fractions import Fraction

import numpy as np

from .errors import InvariantError

# primes just below 2^25: products of two residues fit comfortably in int64
# even after summing a few hundred of them.
_CRT_PRIME_CEILING = 1 << 25


def identity(n: int):
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def zeros(n: int, m: int | None = None):
    m = n if m is None else m
    return [[0] * m for _ in range(n)]


def transpose(A):
    return [list(col) for col in zip(*A)]


def mat_mul(A, B):
    n, k, m = len(A), len(B), len(B[0])
    Bt = transpose(B)
    return [[sum(A[i][t] * Bt[j][t] for t in range(k)) for j in range(m)] for i in range(n)]


def mat_sub(A, B):
    return [[a - b for a, b in zip(ra, rb)] for ra, rb in zip(A, B)]


def mat_scale(A, c):
    return [[c * a for a in row] for row in A]


def mat_eq(A, B) -> bool:
    return all(a == b for ra, rb in zip(A, B) for a, b in zip(ra, rb))


def is_zero_matrix(A) -> bool:
    return all(a == 0 for row in A for a in row)


def mat_inverse(A):
    """Inverse by Gauss-Jordan over Fractions; raises on singular input."""
    n = len(A)
    M = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)]
         for i, row in enumerate(A)]
    for col in range(n):
        pivot = next((r for r in range(col, n) if M[r][col] != 0), None)
        if pivot is None:
            raise ZeroDivisionError("singular matrix")
        M[col], M[pivot] = M[pivot], M[col]
        inv = 1 / M[col][col]
        M[col] = [x * inv for x in M[col]]
        for r in range(n):
            if r != col and M[r][col] != 0:
                f = M[r][col]
                M[r] = [x - f * y for x, y in zip(M[r], M[col])]
    return [row[n:] for row in M]


def det(A) -> Fraction:
    """Determinant by fraction-free style Gaussian elimination."""
    n = len(A)
    M = [[Fraction(x) for x in row] for row in A]
    sign = 1
    result = Fraction(1)
    for col in range(n):
        pivot = next((r for r in range(col, n) if M[r][col] != 0), None)
        if pivot is None:
            return Fraction(0)
        if pivot != col:
            M[col], M[pivot] = M[pivot], M[col]
            sign = -sign
        result *= M[col][col]
        inv = 1 / M[col][col]
        for r in range(col + 1, n):
            if M[r][col] != 0:
                f = M[r][col] * inv
                M[r] = [x - f * y for x, y in zip(M[r], M[col])]
    return sign * result


_PRIME_CACHE: list = []


def _crt_primes():
    yield from _PRIME_CACHE
    candidate = (_PRIME_CACHE[-1] if _PRIME_CACHE else _CRT_PRIME_CEILING) - 1
    while candidate > 1:
        if all(candidate % d for d in range(2, math.isqrt(candidate) + 1)):
            _PRIME_CACHE.append(candidate)
            yield candidate
        candidate -= 1


def _charpoly_mod(M_mod: np.ndarray, p: int) -> list:
    """Coefficients (monic, descending order c_0=1 .. c_n) of det(uI - M)
    over F_p by Faddeev-LeVerrier; needs p > n."""
    n = M_mod.shape[0]
    coeffs = [1]
    Nk = M_mod.copy()
    for k in range(1, n + 1):
        ck = (-int(np.trace(Nk)) * pow(k, -1, p)) % p
        coeffs.append(ck)
        if k < n:
            Nk = (Nk + ck * np.eye(n, dtype=np.int64)) % p
            Nk = _matmul_mod(M_mod, Nk, p)
    return coeffs


def _matmul_mod(A: np.ndarray, B: np.ndarray, p: int) -> np.ndarray:
    # entries < 2^25, inner dimension <= ~64: products sum below 2^56
    return (A @ B) % p


def _minor_sum_bound(row_norms: list, n: int, extra_factor_per_entry: int = 1):
    """Bound on |c_k| for each k: the u^{n-k} coefficient of det(uI - M) is
    a sum of C(n,k) principal k x k minors, each bounded (Hadamard) by the
    product of its row norms.  Returns the per-k bounds."""
    norms = sorted(row_norms, reverse=True)
    bounds = [1]
    top = 1
    for k in range(1, n + 1):
        top *= norms[k - 1] * extra_factor_per_entry
        bounds.append(math.comb(n, k) * top)
    return bounds


def charpoly_int(M) -> list:
    """Exact characteristic polynomial det(uI - M) of an integer matrix,
    returned as descending-order integer coefficients [1, c1, ..., cn].

    Multi-modular: per-prime Faddeev-LeVerrier with numpy int64, CRT
    reconstruction, number of primes chosen from an exact Hadamard bound.
    """
    n = len(M)
    if n == 0:
        return [1]
    rows = [[int(x) for x in row] for row in M]
    if all(x == 0 for row in rows for x in row):
        return [1] + [0] * n
    row_norms = [math.isqrt(sum(x * x for x in row)) + 1 for row in rows]
    bound = 2 * max(_minor_sum_bound(row_norms, n)) + 1
    residues = []
    primes = []
    prod = 1
    gen = _crt_primes()
    while prod < bound:
        p = next(gen)
        primes.append(p)
        prod *= p
        M_mod = np.array([[x % p for x in row] for row in rows], dtype=np.int64)
        residues.append(_charpoly_mod(M_mod, p))
    coeffs = []
    for k in range(n + 1):
        x = _crt_combine([r[k] for r in residues], primes, prod)
        coeffs.append(x)
    if coeffs[0] != 1:
        raise InvariantError("characteristic polynomial is not monic")
    return coeffs


def _crt_combine(residues, primes, prod) -> int:
    x = 0
    for r, p in zip(residues, primes):
        q = prod // p
        x += r * pow(q % p, -1, p) * q
    x %= prod
    if x > prod // 2:
        x -= prod
    return x


def charpoly_fraction(M) -> list:
    """det(uI - M) for a rational matrix, as descending Fractions.

    Reduces the rational entries modulo each CRT prime directly and
    reconstructs the scaled integer coefficients c_k * D^k (D = lcm of the
    entry denominators); the bound uses the row norms of M itself, so a few
    large-denominator rows do not inflate the modulus count for the whole
    matrix.
    """
    n = len(M)
    if n == 0:
        return [Fraction(1)]
    num = [[Fraction(x).numerator for x in row] for row in M]
    den = [[Fraction(x).denominator for x in row] for row in M]
    D = 1
    for row in den:
        for d in row:
            D = D * d // math.gcd(D, d)
    if D == 1:
        return [Fraction(c) for c in charpoly_int(num)]
    # integer row-norm bounds for the unscaled rational rows
    row_norms = []
    for rn, rd in zip(num, den):
        s = sum(Fraction(a, b) ** 2 for a, b in zip(rn, rd))
        row_norms.append(math.isqrt(int(s)) + 1)
    per_k = _minor_sum_bound(row_norms, n)
    bound = 2 * max(b * D ** k for k, b in enumerate(per_k)) + 1
    residues = []
    primes = []
    prod = 1
    gen = _crt_primes()
    while prod < bound:
        p = next(gen)
        if D % p == 0:
            continue
        primes.append(p)
        prod *= p
        inv_cache = {1: 1}
        rows_mod = []
        for rn, rd in zip(num, den):
            row = []
            for a, b in zip(rn, rd):
                ib = inv_cache.get(b)
                if ib is None:
                    ib = pow(b % p, -1, p)
                    inv_cache[b] = ib
                row.append((a % p) * ib % p)
            rows_mod.append(row)
        M_mod = np.array(rows_mod, dtype=np.int64)
        residues.append(_charpoly_mod(M_mod, p))
    out = [Fraction(1)]
    Dk = 1
    for k in range(1, n + 1):
        Dk *= D
        scaled = _crt_combine(
            [(r[k] * pow(Dk, 1, p)) % p for r, p in zip(residues, primes)],
            primes,
            prod,
        )
        out.append(Fraction(scaled, Dk))
    return out


def det_one_minus_t_phi(M) -> list:
    """Coefficients (ascending in T) of det(I - T*M) for a rational matrix.

    If charpoly(M) = sum_j b_j u^j (descending c-list reindexed), then
    det(I - T*M) = sum_m b_{n-m} T^m with b the ascending-order coefficients.
    """
    n = len(M)
    desc = charpoly_fraction(M)  # c_0=1 (u^n) ... c_n (constant)
    # coefficient of T^m is the u^{n-m} coefficient, i.e. desc[m]
    return [desc[m] for m in range(n + 1)]
