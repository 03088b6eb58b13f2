"""Prime fields, primitive minimal polynomials and the companion-matrix orbit.

A field F_q, q = p**k, is fixed by a monic primitive polynomial

    f(x) = x^k - a[k-1] x^(k-1) - ... - a[0]     (a[i] in 0..p-1)

and conjugation by X acts on the exponent vectors of the Y-generators through
the companion matrix M of f.  Every row of the B determinant is driven by the
powers M^0, ..., M^(q-2).
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Iterator, Optional, Sequence

import gmpy2

from .errors import NotIrreducible, NotPrime, NotPrimitive, OrbitDegenerate

Matrix = tuple[tuple[int, ...], ...]

#: fixed choices for the two fields worked out by hand: r = 1+i for q=9 and a
#: root of x^3 - x + 1 for q=27.
BUILTIN_POLYNOMIALS = {(3, 2): (1, 2), (3, 3): (2, 1, 0)}

ORBIT_CAP = 2**14


def is_prime(n: int) -> bool:
    return n >= 2 and bool(gmpy2.is_prime(n))


def prime_factors(n: int) -> list[int]:
    """Distinct prime factors of |n| by trial division (n is small here)."""
    n = abs(n)
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1 if d == 2 else 2
    if n > 1:
        out.append(n)
    return out


def prime_power(q: int) -> Optional[tuple[int, int]]:
    """Return (p, k) with q = p**k, or None."""
    if q < 2:
        return None
    fs = prime_factors(q)
    if len(fs) != 1:
        return None
    p, k = fs[0], 0
    while q % p == 0:
        q //= p
        k += 1
    return p, k


# ---------------------------------------------------------------------------
# polynomial arithmetic over F_p, coefficient lists low -> high


def _trim(f: list[int]) -> list[int]:
    while f and f[-1] == 0:
        f.pop()
    return f


def _polymod(f: list[int], g: list[int], p: int) -> list[int]:
    f = _trim([c % p for c in f])
    inv = pow(g[-1], -1, p)
    dg = len(g) - 1
    while len(f) - 1 >= dg and f:
        c = f[-1] * inv % p
        shift = len(f) - 1 - dg
        for i, gi in enumerate(g):
            f[shift + i] = (f[shift + i] - c * gi) % p
        _trim(f)
    return f


def _polymulmod(f: list[int], g: list[int], m: list[int], p: int) -> list[int]:
    if not f or not g:
        return []
    prod = [0] * (len(f) + len(g) - 1)
    for i, fi in enumerate(f):
        if fi:
            for j, gj in enumerate(g):
                prod[i + j] += fi * gj
    return _polymod(prod, m, p)


def _polypowmod(base: list[int], e: int, m: list[int], p: int) -> list[int]:
    result = [1]
    base = _polymod(base, m, p)
    while e:
        if e & 1:
            result = _polymulmod(result, base, m, p)
        base = _polymulmod(base, base, m, p)
        e >>= 1
    return result


def _polygcd(f: list[int], g: list[int], p: int) -> list[int]:
    f, g = _trim([c % p for c in f]), _trim([c % p for c in g])
    while g:
        f, g = g, _polymod(f, g, p)
    return f


def _polysub(f: list[int], g: list[int], p: int) -> list[int]:
    n = max(len(f), len(g))
    f = f + [0] * (n - len(f))
    g = g + [0] * (n - len(g))
    return _trim([(a - b) % p for a, b in zip(f, g)])


def minimal_poly_coeffs(p: int, a: Sequence[int]) -> list[int]:
    """Coefficients (low -> high) of x^k - a[k-1]x^(k-1) - ... - a[0] mod p."""
    return [(-c) % p for c in a] + [1]


def is_irreducible(p: int, a: Sequence[int]) -> bool:
    """Rabin's test for the monic polynomial determined by ``a``."""
    k = len(a)
    if k == 1:
        return True
    f = minimal_poly_coeffs(p, a)
    x = [0, 1]
    if _polysub(_polypowmod(x, p**k, f, p), x, p):
        return False
    for d in prime_factors(k):
        h = _polysub(_polypowmod(x, p ** (k // d), f, p), x, p)
        if len(_polygcd(h, f, p)) > 1:
            return False
    return True


def root_order_is_full(p: int, a: Sequence[int]) -> bool:
    """True when x generates the unit group of F_p[x]/f, i.e. has order p**k - 1."""
    k = len(a)
    f = minimal_poly_coeffs(p, a)
    n = p**k - 1
    x = [0, 1]
    if _polypowmod(x, n, f, p) != [1]:
        return False
    return all(_polypowmod(x, n // l, f, p) != [1] for l in prime_factors(n))


# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class FieldSpec:
    """F_q with q = p**k, presented by a primitive minimal polynomial."""

    p: int
    k: int
    a: tuple[int, ...]

    @property
    def q(self) -> int:
        return self.p**self.k

    @property
    def n(self) -> int:
        """Order of F_q^*, also the size of the B matrix."""
        return self.p**self.k - 1

    def poly_str(self) -> str:
        terms = [f"x^{self.k}" if self.k > 1 else "x"]
        for i in reversed(range(self.k)):
            c = self.a[i]
            if c:
                mon = "" if i == 0 else ("x" if i == 1 else f"x^{i}")
                coef = "" if (c == 1 and mon) else str(c)
                terms.append(f"- {coef}{mon}")
        return " ".join(terms)

    def to_json(self) -> dict:
        return {"p": self.p, "k": self.k, "a": list(self.a)}

    @classmethod
    def from_json(cls, obj: dict) -> "FieldSpec":
        return find_field_spec(int(obj["p"]), int(obj["k"]), [int(c) for c in obj["a"]])

    def dumps(self) -> str:
        return json.dumps(self.to_json())


def _validate(p: int, a: tuple[int, ...]) -> None:
    if not is_irreducible(p, a):
        raise NotIrreducible(f"x^k - ... with a={a} is reducible over F_{p}")
    if not root_order_is_full(p, a):
        raise NotPrimitive(f"a={a}: root does not generate F_{p ** len(a)}^*")
    if p ** len(a) > 2:
        # f(1) = 1 - sum(a); for q = 2 the field F_2^* is trivial and f = x - 1.
        if (1 - sum(a)) % p == 0:
            raise NotPrimitive(f"a={a}: f(1) = 0 mod {p}")


@lru_cache(maxsize=None)
def _default_coeffs(p: int, k: int) -> tuple[int, ...]:
    if (p, k) in BUILTIN_POLYNOMIALS:
        return BUILTIN_POLYNOMIALS[(p, k)]
    for a in itertools.product(range(p), repeat=k):
        try:
            _validate(p, a)
        except (NotIrreducible, NotPrimitive):
            continue
        return a
    raise NotPrimitive(f"no primitive polynomial of degree {k} over F_{p}")  # unreachable


def find_field_spec(p: int, k: int, override: Optional[Sequence[int]] = None) -> FieldSpec:
    """Return a validated field description for F_{p^k}.

    Without ``override`` the fixed polynomials for q = 9, 27 are used and
    otherwise the lexicographically smallest (a0, ..., a_{k-1}) that is primitive.
    """
    if not is_prime(p):
        raise NotPrime(f"{p} is not prime")
    if k < 1:
        raise ValueError("degree k must be >= 1")
    if override is None:
        return FieldSpec(p, k, _default_coeffs(p, k))
    a = tuple(int(c) for c in override)
    if len(a) != k or any(not 0 <= c < p for c in a):
        raise ValueError(f"override must be {k} residues in [0, {p})")
    _validate(p, a)
    return FieldSpec(p, k, a)


def field_for_q(q: int) -> FieldSpec:
    pk = prime_power(q)
    if pk is None:
        raise NotPrime(f"{q} is not a prime power")
    return find_field_spec(*pk)


# ---------------------------------------------------------------------------
# vectors over F_p and their integer encoding (component 0 least significant)


def tuple_index(v: Sequence[int], p: int) -> int:
    idx = 0
    for c in reversed(v):
        idx = idx * p + c % p
    return idx


def index_tuple(idx: int, p: int, k: int) -> tuple[int, ...]:
    out = []
    for _ in range(k):
        idx, r = divmod(idx, p)
        out.append(r)
    return tuple(out)


def mat_mul(a: Matrix, b: Matrix, p: int) -> Matrix:
    cols = list(zip(*b))
    return tuple(tuple(sum(x * y for x, y in zip(row, col)) % p for col in cols) for row in a)


def mat_vec(a: Matrix, v: Sequence[int], p: int) -> tuple[int, ...]:
    return tuple(sum(x * y for x, y in zip(row, v)) % p for row in a)


def identity(k: int) -> Matrix:
    return tuple(tuple(int(i == j) for j in range(k)) for i in range(k))


def rank_mod_p(a: Matrix, p: int) -> int:
    rows = [list(r) for r in a]
    rank = 0
    ncols = len(rows[0]) if rows else 0
    for c in range(ncols):
        piv = next((r for r in range(rank, len(rows)) if rows[r][c] % p), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        inv = pow(rows[rank][c], -1, p)
        for r in range(len(rows)):
            if r != rank and rows[r][c] % p:
                f = rows[r][c] * inv % p
                rows[r] = [(x - f * y) % p for x, y in zip(rows[r], rows[rank])]
        rank += 1
    return rank


def companion_matrix(spec: FieldSpec) -> Matrix:
    """Ones on the subdiagonal, last column (a0, ..., a_{k-1})."""
    k = spec.k
    return tuple(
        tuple(spec.a[i] if j == k - 1 else int(i == j + 1) for j in range(k)) for i in range(k)
    )


def char_poly(m: Matrix, p: int) -> list[int]:
    """Characteristic polynomial det(xI - m) mod p by Laplace expansion (k is small)."""
    k = len(m)

    def det_expand(rows: list[list[list[int]]]) -> list[int]:
        # entries are polynomials in x
        if len(rows) == 1:
            return rows[0][0]
        total: list[int] = []
        for j, entry in enumerate(rows[0]):
            if not any(entry):
                continue
            minor = [r[:j] + r[j + 1 :] for r in rows[1:]]
            sub = det_expand(minor)
            prod = [0] * (len(entry) + len(sub) - 1)
            for a_i, ea in enumerate(entry):
                for b_i, eb in enumerate(sub):
                    prod[a_i + b_i] += ea * eb
            sign = -1 if j % 2 else 1
            n = max(len(total), len(prod))
            total = [
                (total[i] if i < len(total) else 0) + sign * (prod[i] if i < len(prod) else 0)
                for i in range(n)
            ]
        return total or [0]

    rows = [[[(-m[i][j]) % p, 1 if i == j else 0] for j in range(k)] for i in range(k)]
    return _trim([c % p for c in det_expand(rows)])


@dataclass(frozen=True)
class Orbit:
    """The powers M^0, ..., M^(q-2) of the companion matrix."""

    spec: FieldSpec
    powers: tuple[Matrix, ...]

    def first_columns(self) -> list[tuple[int, ...]]:
        return [tuple(row[0] for row in mat) for mat in self.powers]

    def column(self, row: int, var: int) -> tuple[int, ...]:
        """Exponent vector of the monomial for variable ``var`` in 1-based ``row``."""
        return tuple(r[var] for r in self.powers[row - 1])

    @cached_property
    def row_characters(self) -> tuple[tuple[int, ...], ...]:
        """row_characters[i][s] = index of (M^i)^T s.

        Substituting y_l = zeta^{s_l} in row i+1 evaluates each f_j at the
        character (M^i)^T s.
        """
        p, k = self.spec.p, self.spec.k
        out = []
        for mat in self.powers:
            tr = tuple(zip(*mat))
            out.append(
                tuple(tuple_index(mat_vec(tr, index_tuple(s, p, k), p), p) for s in range(p**k))
            )
        return tuple(out)

    @cached_property
    def conjugation_action(self) -> tuple[tuple[int, ...], ...]:
        """conjugation_action[j][u] = index of M^j u (X^j Y^u X^-j = Y^{M^j u})."""
        p, k = self.spec.p, self.spec.k
        return tuple(
            tuple(tuple_index(mat_vec(mat, index_tuple(u, p, k), p), p) for u in range(p**k))
            for mat in self.powers
        )


@lru_cache(maxsize=64)
def orbit(spec: FieldSpec) -> Orbit:
    """All q-1 powers of M, with both orbit invariants asserted."""
    if spec.q > ORBIT_CAP:
        raise ValueError(f"q = {spec.q} exceeds the orbit cap {ORBIT_CAP}")
    p, k, n = spec.p, spec.k, spec.n
    m = companion_matrix(spec)
    powers = [identity(k)]
    for _ in range(n - 1):
        powers.append(mat_mul(powers[-1], m, p))
    if mat_mul(powers[-1], m, p) != identity(k):
        raise OrbitDegenerate("M^(q-1) != I")
    orb = Orbit(spec, tuple(powers))
    cols = orb.first_columns()
    zero = (0,) * k
    if len(set(cols)) != n or zero in cols:
        raise OrbitDegenerate("first columns of M^j do not cover F_p^k minus 0")
    running = [[0] * k for _ in range(k)]
    for t in range(1, n):
        mat = powers[t - 1]
        running = [[(running[i][j] + mat[i][j]) % p for j in range(k)] for i in range(k)]
        if rank_mod_p(tuple(map(tuple, running)), p) < k:
            raise OrbitDegenerate(f"I + M + ... + M^{t - 1} is singular mod {p}")
    return orb


def row_monomial_exponents(orb: Orbit, row: int, var: int) -> tuple[int, ...]:
    """Column ``var`` of M^(row-1): exponents of the row-th diagonal entry of rho(Y_var)."""
    if not 1 <= row <= orb.spec.n or not 0 <= var < orb.spec.k:
        raise IndexError("row or var out of range")
    return orb.column(row, var)


def first_column_orbit(spec: FieldSpec) -> Iterator[tuple[int, ...]]:
    return iter(orbit(spec).first_columns())
