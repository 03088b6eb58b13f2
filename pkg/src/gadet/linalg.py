"""Exact determinants.

* ``bareiss_det``: fraction-free elimination over Z.
* ``det_mod``: Gaussian elimination over a prime field.
* ``berkowitz_det``: division-free, works over any commutative ring.
* ``cyc_det``: determinant over Z[zeta_p] by residues.  Each prime l = 1 mod p
  has p-1 roots of Phi_p; the determinant is taken mod l under every embedding,
  the power-basis coefficients are recovered from the traces, and the residues
  are combined by CRT against a Hadamard-type coefficient bound.  One extra
  prime is held out to re-check the reconstruction.
"""

from __future__ import annotations

from functools import lru_cache
from math import isqrt
from typing import Callable, Iterable, Sequence, TypeVar

import gmpy2

from .errors import VerificationFailed
from .rings import CycInt

T = TypeVar("T")

RESIDUE_PRIME_BITS = 124


def bareiss_det(matrix: Sequence[Sequence[int]]) -> int:
    n = len(matrix)
    if n == 0:
        return 1
    a = [list(map(int, row)) for row in matrix]
    sign = 1
    prev = 1
    for c in range(n - 1):
        if a[c][c] == 0:
            piv = next((r for r in range(c + 1, n) if a[r][c] != 0), None)
            if piv is None:
                return 0
            a[c], a[piv] = a[piv], a[c]
            sign = -sign
        pivot = a[c][c]
        prow = a[c]
        for r in range(c + 1, n):
            row = a[r]
            f = row[c]
            if f == 0:
                # row[j] * pivot / prev stays exact
                a[r] = row[: c + 1] + [x * pivot // prev for x in row[c + 1 :]]
            else:
                a[r] = row[: c + 1] + [
                    (x * pivot - f * y) // prev for x, y in zip(row[c + 1 :], prow[c + 1 :])
                ]
        prev = pivot
    return sign * a[n - 1][n - 1]


def det_mod(matrix: Sequence[Sequence[int]], mod: int) -> int:
    """Determinant modulo a prime."""
    a = [[x % mod for x in row] for row in matrix]
    n = len(a)
    det = 1
    for c in range(n):
        piv = next((r for r in range(c, n) if a[r][c]), None)
        if piv is None:
            return 0
        if piv != c:
            a[c], a[piv] = a[piv], a[c]
            det = -det
        prow = a[c]
        pv = prow[c]
        det = det * pv % mod
        inv = pow(pv, -1, mod)
        tail = prow[c + 1 :]
        for r in range(c + 1, n):
            row = a[r]
            f = row[c]
            if f:
                f = f * inv % mod
                a[r] = row[: c + 1] + [(x - f * y) % mod for x, y in zip(row[c + 1 :], tail)]
    return det % mod


def berkowitz_det(matrix: Sequence[Sequence[T]], zero: T, one: T) -> T:
    """Division-free determinant (Berkowitz), O(n^4) ring operations."""
    n = len(matrix)
    if n == 0:
        return one
    # coefficients of det(xI - A_r), leading coefficient first
    poly = [one, zero - matrix[0][0]]
    for r in range(1, n):
        a_rr = matrix[r][r]
        row = [matrix[r][j] for j in range(r)]  # R
        col = [matrix[i][r] for i in range(r)]  # S
        sub = [[matrix[i][j] for j in range(r)] for i in range(r)]
        # first column of the Toeplitz matrix: 1, -a, -R S, -R A S, ..., -R A^{r-1} S
        toe = [one, zero - a_rr]
        vec = col
        for _ in range(r):
            dot = zero
            for x, y in zip(row, vec):
                dot = dot + x * y
            toe.append(zero - dot)
            nxt = []
            for i in range(r):
                acc = zero
                for j in range(r):
                    acc = acc + sub[i][j] * vec[j]
                nxt.append(acc)
            vec = nxt
        # new poly = T * poly where T is (r+2) x (r+1) lower Toeplitz
        new = []
        for i in range(r + 2):
            acc = zero
            for j in range(min(i, r) + 1):
                acc = acc + toe[i - j] * poly[j]
            new.append(acc)
        poly = new
    last = poly[n]
    return last if n % 2 == 0 else zero - last


# ---------------------------------------------------------------------------
# residue machinery


@lru_cache(maxsize=None)
def _prime_list(p: int, count: int) -> tuple[tuple[int, int], ...]:
    """First ``count`` primes l = 1 (mod p) above 2**RESIDUE_PRIME_BITS with a primitive p-th root."""
    out = []
    cand = 1 << RESIDUE_PRIME_BITS
    while len(out) < count:
        cand = int(gmpy2.next_prime(cand))
        if (cand - 1) % p:
            continue
        h = 2
        while True:
            r = pow(h, (cand - 1) // p, cand)
            if r != 1:
                break
            h += 1
        out.append((cand, r))
    return tuple(out)


def residue_primes(p: int, count: int) -> list[tuple[int, int]]:
    """(l, r) pairs with l prime, l = 1 mod p and r of multiplicative order p mod l."""
    # grow in chunks so the cache is reused across calls
    chunk = 8
    need = -(-count // chunk) * chunk
    return list(_prime_list(p, need)[:count])


def primes_for_bound(p: int, bound: int) -> tuple[list[tuple[int, int]], tuple[int, int]]:
    """Primes whose product exceeds 2*bound+1, plus one held-out prime."""
    target = 2 * bound + 1
    count = 1
    while True:
        prs = residue_primes(p, count + 1)
        prod = 1
        for l, _ in prs[:count]:
            prod *= l
        if prod > target:
            return prs[:count], prs[count]
        count += 1


def coeffs_from_embeddings(values: Sequence[int], root: int, mod: int, p: int) -> list[int]:
    """Power-basis coefficients mod ``mod`` from the images under zeta -> root^e, e=1..p-1.

    Uses p*c_i = Tr(x zeta^-i) - Tr(x zeta).
    """
    inv_root = pow(root, -1, mod)
    tr_shift = sum(v * pow(root, e, mod) for e, v in zip(range(1, p), values)) % mod
    inv_p = pow(p, -1, mod)
    out = []
    for i in range(p - 1):
        tr = sum(v * pow(inv_root, e * i, mod) for e, v in zip(range(1, p), values)) % mod
        out.append((tr - tr_shift) * inv_p % mod)
    return out


def crt_signed(residues: Sequence[int], moduli: Sequence[int]) -> int:
    """Unique x with |x| <= prod/2 matching every residue."""
    x, m = 0, 1
    for r, l in zip(residues, moduli):
        t = (r - x) * pow(m, -1, l) % l
        x += m * t
        m *= l
    if x > m // 2:
        x -= m
    return x


def hadamard_bound(norms: Iterable[Iterable[int]]) -> int:
    """Bound on |det| from per-entry magnitude bounds, row by row."""
    prod = 1
    for row in norms:
        prod *= sum(x * x for x in row)
    return isqrt(prod) + 1


def coefficient_bound(p: int, entry_bounds: Iterable[Iterable[int]]) -> int:
    """Bound on every power-basis coefficient of the determinant.

    |c_i| <= 2(p-1)/p * max|sigma(det)| < p * Hadamard, for every p >= 2.
    """
    return p * hadamard_bound(entry_bounds)


def reconstruct(
    p: int,
    bound: int,
    det_under: Callable[[int, int, int], int],
    check: bool = True,
) -> CycInt:
    """Rebuild a CycInt from residues.

    ``det_under(l, r, e)`` must return the determinant mod l under zeta -> r^e.
    """
    primes, held = primes_for_bound(p, bound)
    per_prime = []
    for l, r in primes:
        vals = [det_under(l, r, e) for e in range(1, p)]
        per_prime.append(coeffs_from_embeddings(vals, r, l, p))
    moduli = [l for l, _ in primes]
    coeffs = tuple(crt_signed([pp[i] for pp in per_prime], moduli) for i in range(p - 1))
    result = CycInt(p, coeffs)
    if check:
        l, r = held
        if result.residue(r, l) != det_under(l, r, 1):
            raise VerificationFailed("residue reconstruction disagrees with held-out prime")
    return result


def cyc_det(matrix: Sequence[Sequence[CycInt]], p: int) -> CycInt:
    """Exact determinant of a square matrix over Z[zeta_p] by residues."""
    n = len(matrix)
    if n == 0:
        return CycInt.rational(p, 1)
    bound = coefficient_bound(p, ([x.l1() for x in row] for row in matrix))

    def det_under(l: int, r: int, e: int) -> int:
        root = pow(r, e, l)
        num = [[x.residue(root, l) for x in row] for row in matrix]
        return det_mod(num, l)

    return reconstruct(p, bound, det_under)


def cyc_det_division_free(matrix: Sequence[Sequence[CycInt]], p: int) -> CycInt:
    return berkowitz_det(matrix, CycInt.rational(p, 0), CycInt.rational(p, 1))


def int_det_modular(matrix: Sequence[Sequence[int]]) -> int:
    """Integer determinant by CRT over several primes (cross-check for Bareiss)."""
    n = len(matrix)
    bound = hadamard_bound(([abs(x) for x in row] for row in matrix))
    primes, held = primes_for_bound(2, bound)
    res = [det_mod(matrix, l) for l, _ in primes]
    value = crt_signed(res, [l for l, _ in primes])
    if n and value % held[0] != det_mod(matrix, held[0]):
        raise VerificationFailed("modular determinant disagrees with held-out prime")
    return value
