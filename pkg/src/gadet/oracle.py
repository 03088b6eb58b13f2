"""Ground truth by brute force.

The group is realised as 2x2 affine matrices (a, b) over F_q with a = r^l and b
a vector in the basis 1, r, ..., r^(k-1); field products are plain polynomial
products modulo the minimal polynomial, independent of the companion-matrix
machinery in the determinant engine.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd
from typing import Sequence

from .errors import CapExceeded
from .field import FieldSpec, index_tuple, prime_factors, tuple_index
from .linalg import bareiss_det

ORACLE_CAP = 128
ORACLE_HARD_CAP = 512


def _field_mul(x: Sequence[int], y: Sequence[int], spec: FieldSpec) -> tuple[int, ...]:
    """Product in F_p[r]/f(r), elements as coefficient vectors of length k."""
    p, k = spec.p, spec.k
    prod = [0] * (2 * k - 1)
    for i, a in enumerate(x):
        if a:
            for j, b in enumerate(y):
                prod[i + j] += a * b
    # r^k = a_0 + a_1 r + ... + a_{k-1} r^{k-1}
    for d in range(2 * k - 2, k - 1, -1):
        c = prod[d] % p
        prod[d] = 0
        if c:
            for i, ai in enumerate(spec.a):
                prod[d - k + i] += c * ai
    return tuple(c % p for c in prod[:k])


@dataclass(frozen=True)
class GroupTable:
    spec: FieldSpec
    elements: tuple[tuple[int, tuple[int, ...]], ...]
    mul: tuple[tuple[int, ...], ...]
    inv: tuple[int, ...]

    @property
    def order(self) -> int:
        return len(self.elements)

    def element_order(self, g: int) -> int:
        x, n = g, 1
        while x != 0:
            x = self.mul[x][g]
            n += 1
        return n


def build_group_table(spec: FieldSpec, cap: int = ORACLE_CAP) -> GroupTable:
    """Enumerate GA(1, q): index l * p**k + b, identity first."""
    p, k, q = spec.p, spec.k, spec.q
    order = q * (q - 1)
    if order > min(cap, ORACLE_HARD_CAP):
        raise CapExceeded(f"|GA(1,{q})| = {order} exceeds cap {cap}")
    one = (1,) + (0,) * (k - 1)
    r = (0, 1) + (0,) * (k - 2) if k > 1 else (spec.a[0] % p,)
    powers = [one]
    for _ in range(q - 2):
        powers.append(_field_mul(powers[-1], r, spec))
    log_of = {v: l for l, v in enumerate(powers)}
    if len(log_of) != q - 1:
        raise ValueError("r does not generate F_q^*")
    elems = tuple((l, index_tuple(b, p, k)) for l in range(q - 1) for b in range(q))

    def index(l: int, b: Sequence[int]) -> int:
        return (l % (q - 1)) * q + tuple_index(b, p)

    mul = []
    for l1, b1 in elems:
        a1 = powers[l1]
        row = []
        for l2, b2 in elems:
            # (a1, b1)(a2, b2) = (a1 a2, a1 b2 + b1)
            ab = _field_mul(a1, b2, spec)
            row.append(index(l1 + l2, [(x + y) % p for x, y in zip(ab, b1)]))
        mul.append(tuple(row))
    inv = []
    for l, b in elems:
        # (a, b)^-1 = (a^-1, -a^-1 b)
        li = (-l) % (q - 1)
        nb = _field_mul(powers[li], b, spec)
        inv.append(index(li, [(-x) % p for x in nb]))
    return GroupTable(spec, elems, tuple(mul), tuple(inv))


def brute_force_D(elem, cap: int = ORACLE_CAP) -> int:
    """det(a_{g_i g_j^-1}) over the whole group."""
    table = build_group_table(elem.spec, cap)
    n = table.order
    coeffs = elem.coeffs
    mat = [[coeffs[table.mul[i][table.inv[j]]] for j in range(n)] for i in range(n)]
    return bareiss_det(mat)


def cyclic_det(m: int, g: Sequence[int]) -> int:
    """Z_m group determinant of sum g[j] x^j (terms beyond m wrap around)."""
    if m < 1:
        raise ValueError("m must be positive")
    row = [0] * m
    for j, c in enumerate(g):
        row[j % m] += c
    return bareiss_det([[row[(j - i) % m] for j in range(m)] for i in range(m)])


def cyclic_divisibility_check(m: int, g: Sequence[int]) -> bool:
    """For r^a || m with r | D, require r^(a+1) | D."""
    d = cyclic_det(m, g)
    return divisibility_holds(m, d)


def divisibility_holds(m: int, d: int) -> bool:
    for r in prime_factors(gcd(m, d) if d else m):
        if d % r:
            continue
        a, mm = 0, m
        while mm % r == 0:
            mm //= r
            a += 1
        if d % r ** (a + 1):
            return False
    return True
