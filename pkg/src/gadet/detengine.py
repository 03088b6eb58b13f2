"""The A and B factors of the GA(1, q) group determinant.

An element of Z[GA(1,q)] is written sum_j f_j(Y) X^j with f_j in the abelian
ring Z[Y_0..Y_{k-1}]/<Y_i^p - 1>.  The one-dimensional characters contribute
A, the circulant determinant of F(x, 1, ..., 1); the single representation of
degree q-1 contributes B, the determinant of the (q-1)x(q-1) matrix whose row i
is f_{(j-i) mod (q-1)} evaluated at the character (M^i)^T s.  Then
D = A * B^(q-1).
"""

from __future__ import annotations

import json
import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Optional, Sequence, Union

from .errors import NonRationalDeterminant, ShapeMismatch, VerificationFailed
from .field import FieldSpec, index_tuple, orbit, tuple_index
from .linalg import (
    bareiss_det,
    coeffs_from_embeddings,
    coefficient_bound,
    crt_signed,
    cyc_det_division_free,
    det_mod,
    primes_for_bound,
)
from .rings import (
    AbRingElement,
    CycInt,
    _add_table,
    _dot_table,
    ab_evaluate,
    ab_from_character_values,
    parse_poly,
)

log = logging.getLogger(__name__)

SYMBOLIC_CAP = 32


@dataclass(frozen=True)
class GroupRingElement:
    """Coefficient of Y^u X^j stored at index j * p**k + u."""

    spec: FieldSpec
    coeffs: tuple[int, ...]

    def __post_init__(self):
        want = self.spec.n * self.spec.q
        if len(self.coeffs) != want:
            raise ShapeMismatch(f"need {want} coefficients, got {len(self.coeffs)}")

    # -- constructors -------------------------------------------------------

    @classmethod
    def zero(cls, spec: FieldSpec) -> "GroupRingElement":
        return cls(spec, (0,) * (spec.n * spec.q))

    @classmethod
    def from_components(
        cls, spec: FieldSpec, comps: Mapping[int, Union[AbRingElement, str, int]]
    ) -> "GroupRingElement":
        """Build sum_j comps[j] X^j; components may be ring elements, text or integers."""
        pk = spec.q
        v = [0] * (spec.n * pk)
        for j, comp in comps.items():
            if isinstance(comp, str):
                comp = parse_poly(comp, spec.p, spec.k)
            elif isinstance(comp, int):
                comp = AbRingElement.constant(spec.p, spec.k, comp)
            base = (j % spec.n) * pk
            for u, c in enumerate(comp.coeffs):
                v[base + u] += c
        return cls(spec, tuple(v))

    @classmethod
    def identity(cls, spec: FieldSpec) -> "GroupRingElement":
        return cls.from_components(spec, {0: 1})

    @classmethod
    def x_power(cls, spec: FieldSpec, j: int = 1) -> "GroupRingElement":
        return cls.from_components(spec, {j: 1})

    @classmethod
    def x_polynomial(cls, spec: FieldSpec, g: Sequence[int]) -> "GroupRingElement":
        """Lift sum_j g[j] x^j with constant Y-coefficients."""
        comps: dict[int, int] = {}
        for j, c in enumerate(g):
            if c:
                comps[j % spec.n] = comps.get(j % spec.n, 0) + c
        return cls.from_components(spec, comps)

    @classmethod
    def times_all_ones(cls, spec: FieldSpec, h: AbRingElement) -> "GroupRingElement":
        """h(Y) * (1 + X + ... + X^(q-2))."""
        return cls.from_components(spec, {j: h for j in range(spec.n)})

    @classmethod
    def random(cls, spec: FieldSpec, rng, bound: int) -> "GroupRingElement":
        return cls(spec, tuple(rng.randint(-bound, bound) for _ in range(spec.n * spec.q)))

    # -- views --------------------------------------------------------------

    def component(self, j: int) -> AbRingElement:
        pk = self.spec.q
        return AbRingElement(self.spec.p, self.spec.k, self.coeffs[j * pk : (j + 1) * pk])

    def components(self) -> list[AbRingElement]:
        return [self.component(j) for j in range(self.spec.n)]

    def at_ones(self) -> list[int]:
        """Coefficients of F(x, 1, ..., 1)."""
        pk = self.spec.q
        return [sum(self.coeffs[j * pk : (j + 1) * pk]) for j in range(self.spec.n)]

    # -- arithmetic ---------------------------------------------------------

    def _check(self, other: "GroupRingElement") -> None:
        if self.spec != other.spec:
            raise ShapeMismatch("elements over different fields")

    def __add__(self, other: "GroupRingElement") -> "GroupRingElement":
        self._check(other)
        return GroupRingElement(self.spec, tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    def __sub__(self, other: "GroupRingElement") -> "GroupRingElement":
        self._check(other)
        return GroupRingElement(self.spec, tuple(a - b for a, b in zip(self.coeffs, other.coeffs)))

    def __neg__(self) -> "GroupRingElement":
        return GroupRingElement(self.spec, tuple(-a for a in self.coeffs))

    def __mul__(self, other: "GroupRingElement") -> "GroupRingElement":
        """Group ring product: (Y^u X^j)(Y^v X^l) = Y^(u + M^j v) X^(j+l)."""
        self._check(other)
        spec = self.spec
        n, pk = spec.n, spec.q
        act = orbit(spec).conjugation_action
        add = _add_table(spec.p, spec.k)
        out = [0] * (n * pk)
        rhs = [(i // pk, i % pk, c) for i, c in enumerate(other.coeffs) if c]
        for i, a in enumerate(self.coeffs):
            if not a:
                continue
            j, u = divmod(i, pk)
            row, conj = add[u], act[j]
            for l, v, b in rhs:
                out[((j + l) % n) * pk + row[conj[v]]] += a * b
        return GroupRingElement(spec, tuple(out))

    # -- serialization ------------------------------------------------------

    def to_json(self) -> dict:
        return {"spec": self.spec.to_json(), "coeffs": list(self.coeffs)}

    @classmethod
    def from_json(cls, obj: Mapping) -> "GroupRingElement":
        spec = FieldSpec.from_json(obj["spec"])
        return cls(spec, tuple(int(c) for c in obj["coeffs"]))

    def dumps(self) -> str:
        return json.dumps(self.to_json())


@dataclass
class DetReport:
    A: int
    B: int
    D: int
    congruence_ok: bool
    avg_identity_ok: bool
    oracle_D: Optional[int] = None
    start_independent: Optional[bool] = None
    provenance: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "A": str(self.A),
            "B": str(self.B),
            "D": str(self.D),
            "congruence_ok": self.congruence_ok,
            "avg_identity_ok": self.avg_identity_ok,
            "oracle_D": None if self.oracle_D is None else str(self.oracle_D),
        }


# ---------------------------------------------------------------------------
# A


def circulant(g: Sequence[int]) -> list[list[int]]:
    n = len(g)
    return [[g[(j - i) % n] for j in range(n)] for i in range(n)]


def compute_A(elem: GroupRingElement) -> int:
    """The Z_{q-1} circulant determinant of F(x, 1, ..., 1)."""
    return bareiss_det(circulant(elem.at_ones()))


# ---------------------------------------------------------------------------
# B and the character determinants


def _scalar_mul_points(s: int, p: int, k: int) -> list[int]:
    """Indices of e*s for e = 1..p-1."""
    vec = index_tuple(s, p, k)
    return [tuple_index([e * c for c in vec], p) for e in range(1, p)]


def _dets_for_prime(job: tuple) -> dict[int, int]:
    """Determinants mod l at the requested characters (worker entry point)."""
    (p, k, n, comps, row_chars, first_row_ones, l, r, points) = job
    dots = _dot_table(p, k)
    rpow = [pow(r, d, l) for d in range(p)]
    pk = p**k
    # table[m][t] = f_m at character t under zeta -> r
    table: list[Optional[list[int]]] = []
    for comp in comps:
        if comp is None:
            table.append(None)
            continue
        nz = [(u, c) for u, c in enumerate(comp) if c]
        vals = []
        for t in range(pk):
            acc = [0] * p
            dt = dots[t]
            for u, c in nz:
                acc[dt[u]] += c
            vals.append(sum(a * b for a, b in zip(acc, rpow)) % l)
        table.append(vals)
    out = {}
    zero_row = [0] * n
    for t in points:
        mat = []
        for i in range(n):
            if i == 0 and first_row_ones:
                mat.append([1] * n)
                continue
            ch = row_chars[i][t]
            row = list(zero_row)
            for m in range(n):
                tm = table[m]
                if tm is not None:
                    row[(m + i) % n] = tm[ch]
            mat.append(row)
        out[t] = det_mod(mat, l)
    return out


def character_determinants(
    elem: GroupRingElement,
    chars: Iterable[int],
    *,
    first_row_ones: bool = False,
    workers: int = 1,
) -> dict[int, CycInt]:
    """Exact determinant of the B matrix built from each character index in ``chars``.

    With ``first_row_ones`` the first row is replaced by ones (the coefficient of
    any h(Y) added along 1 + X + ... + X^(q-2)).
    """
    spec = elem.spec
    p, k, n = spec.p, spec.k, spec.n
    chars = list(dict.fromkeys(chars))
    comps_ab = elem.components()
    comps = [tuple(c.coeffs) if any(c.coeffs) else None for c in comps_ab]
    l1 = [c.l1() for c in comps_ab]
    row_bounds = [l1[j] for j in range(n)]  # every row is a permutation of these
    entry_bounds = [[1] * n if (i == 0 and first_row_ones) else row_bounds for i in range(n)]
    bound = coefficient_bound(p, entry_bounds)
    primes, held = primes_for_bound(p, bound)

    points: set[int] = set()
    orbit_of: dict[int, list[int]] = {}
    for s in chars:
        orbit_of[s] = [0] * (p - 1) if s == 0 else _scalar_mul_points(s, p, k)
        points.update(orbit_of[s])
    points_sorted = sorted(points)
    row_chars = orbit(spec).row_characters

    jobs = [
        (p, k, n, comps, row_chars, first_row_ones, l, r, points_sorted)
        for l, r in primes + [held]
    ]
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_dets_for_prime, jobs))
    else:
        results = [_dets_for_prime(job) for job in jobs]

    moduli = [l for l, _ in primes]
    out = {}
    hl, hr = held
    for s in chars:
        per_prime = [
            coeffs_from_embeddings([res[t] for t in orbit_of[s]], r, l, p)
            for (l, r), res in zip(primes, results)
        ]
        coeffs = tuple(crt_signed([pp[i] for pp in per_prime], moduli) for i in range(p - 1))
        value = CycInt(p, coeffs)
        if value.residue(hr, hl) != results[-1][orbit_of[s][0]]:
            raise VerificationFailed(f"held-out prime check failed at character {s}")
        out[s] = value
    return out


def _start_index(spec: FieldSpec, start: Optional[Sequence[int]]) -> int:
    if start is None:
        return tuple_index([1] + [0] * (spec.k - 1), spec.p)
    if len(start) != spec.k:
        raise ShapeMismatch(f"start tuple needs {spec.k} entries")
    s = tuple_index(start, spec.p)
    if s == 0:
        raise ValueError("start tuple must be nonzero")
    return s


def b_matrix(elem: GroupRingElement, start: Optional[Sequence[int]] = None) -> list[list[CycInt]]:
    """The B matrix over Z[zeta_p] with entry (i, j) = f_{(j-i) mod n}(y_{i+1})."""
    spec = elem.spec
    p, k, n = spec.p, spec.k, spec.n
    s = _start_index(spec, start)
    rc = orbit(spec).row_characters
    comps = elem.components()
    mat = []
    for i in range(n):
        ch = index_tuple(rc[i][s], p, k)
        vals = [ab_evaluate(c, ch) for c in comps]
        mat.append([vals[(j - i) % n] for j in range(n)])
    return mat


def compute_B(
    elem: GroupRingElement,
    start: Optional[Sequence[int]] = None,
    *,
    method: str = "residue",
    workers: int = 1,
) -> int:
    """The integer B; ``method='division-free'`` uses Berkowitz over Z[zeta_p]."""
    spec = elem.spec
    if method == "residue":
        s = _start_index(spec, start)
        value = character_determinants(elem, [s], workers=workers)[s]
    elif method == "division-free":
        value = cyc_det_division_free(b_matrix(elem, start), spec.p)
    else:
        raise ValueError(f"unknown method {method!r}")
    b = value.rational_value()
    if b is None:
        raise NonRationalDeterminant(f"B determinant is not rational: {value}")
    return b


def symbolic_B_polynomial(
    elem: GroupRingElement, *, workers: int = 1, cap: int = SYMBOLIC_CAP
) -> AbRingElement:
    """The B determinant as an element of Z[y]/<y_i^p - 1>.

    Its value at the trivial character is A and at every other character B.
    """
    spec = elem.spec
    if spec.q > cap:
        raise ValueError(f"q = {spec.q} exceeds the symbolic cap {cap}")
    vals = character_determinants(elem, range(spec.q), workers=workers)
    return ab_from_character_values(spec.p, spec.k, [vals[s] for s in range(spec.q)])


def group_ring_det_with_first_row_ones(
    elem: GroupRingElement, *, workers: int = 1, cap: int = SYMBOLIC_CAP
) -> AbRingElement:
    """The polynomial alpha(y): the B determinant with its first row replaced by ones."""
    spec = elem.spec
    if spec.q > cap:
        raise ValueError(f"q = {spec.q} exceeds the symbolic cap {cap}")
    vals = character_determinants(elem, range(spec.q), first_row_ones=True, workers=workers)
    return ab_from_character_values(spec.p, spec.k, [vals[s] for s in range(spec.q)])


def compute_AB(elem: GroupRingElement) -> tuple[int, int]:
    return compute_A(elem), compute_B(elem)


def compute_report(
    elem: GroupRingElement,
    with_oracle: bool = False,
    *,
    oracle_cap: int = 128,
    symbolic_cap: int = SYMBOLIC_CAP,
    workers: int = 1,
) -> DetReport:
    spec = elem.spec
    q = spec.q
    A = compute_A(elem)
    prov = {"A": "bareiss circulant", "B": "residue CRT over Z[zeta_p]"}
    start_ok = None
    if q <= symbolic_cap:
        vals = character_determinants(elem, range(q), workers=workers)
        rationals = [v.rational_value() for v in vals.values()]
        if any(r is None for r in rationals):
            raise NonRationalDeterminant("a character determinant is not rational")
        B = vals[_start_index(spec, None)].rational_value()
        start_ok = all(vals[s].rational_value() == B for s in range(1, q))
        poly = ab_from_character_values(spec.p, spec.k, [vals[s] for s in range(q)])
        avg_ok = (
            vals[0].rational_value() == A and q * poly.constant_term() == A + (q - 1) * B
        )
        prov["avg_identity"] = "symbolic polynomial via character transform"
    else:
        B = compute_B(elem, workers=workers)
        avg_ok = False
        prov["avg_identity"] = f"skipped (q > symbolic cap {symbolic_cap})"
    D = A * B**spec.n
    oracle_D = None
    if with_oracle:
        from .oracle import brute_force_D

        oracle_D = brute_force_D(elem, cap=oracle_cap)
        prov["oracle_D"] = "bareiss on the regular representation"
    return DetReport(
        A=A,
        B=B,
        D=D,
        congruence_ok=(B - A) % q == 0,
        avg_identity_ok=avg_ok,
        oracle_D=oracle_D,
        start_independent=start_ok,
        provenance=prov,
    )
