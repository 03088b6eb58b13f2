"""Constructive witnesses and membership deciders.

Every witness is checked by the determinant engine when it is built, so a
returned Witness always carries an element whose (A, B) equals the claim.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from math import gcd
from typing import Optional

from gmpy2 import iroot

from .constants import Q27_CASES, q27_case, reference, t_from_entry
from .detengine import GroupRingElement, compute_AB
from .errors import (
    CongruenceViolation,
    MissingMonomialNotUnique,
    NotCoprime,
    UnsupportedQ,
    UnsupportedTarget,
    VerificationFailed,
)
from .field import FieldSpec, find_field_spec, is_prime, orbit, tuple_index
from .oracle import divisibility_holds
from .rings import AbRingElement

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class TargetPair:
    A: int
    B: int
    q: int

    @property
    def valid(self) -> bool:
        return (self.B - self.A) % self.q == 0

    @property
    def D(self) -> int:
        return self.A * self.B ** (self.q - 1)


@dataclass
class Witness:
    elem: GroupRingElement
    claimed: TargetPair
    construction: str
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        A, B = compute_AB(self.elem)
        if (A, B) != (self.claimed.A, self.claimed.B):
            raise VerificationFailed(
                f"{self.construction} {self.params}: claimed (A, B) = "
                f"({self.claimed.A}, {self.claimed.B}), computed ({A}, {B})"
            )

    @property
    def D(self) -> int:
        return self.claimed.D

    def to_json(self) -> dict:
        return {
            "construction": self.construction,
            "params": stringify_ints(self.params),
            "element": self.elem.to_json(),
            "claimed": {"A": str(self.claimed.A), "B": str(self.claimed.B)},
        }


def stringify_ints(obj):
    """Integers become decimal strings, recursively; bools are left alone."""
    if isinstance(obj, bool) or obj is None:
        return obj
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, dict):
        return {k: stringify_ints(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [stringify_ints(v) for v in obj]
    return obj


def _all_ones(spec: FieldSpec, h: AbRingElement) -> GroupRingElement:
    return GroupRingElement.times_all_ones(spec, h)


def _y0(spec: FieldSpec, power: int = 1) -> AbRingElement:
    return AbRingElement.monomial(spec.p, spec.k, [power] + [0] * (spec.k - 1))


# ---------------------------------------------------------------------------
# the two general constructions


def achieve_coprime(spec: FieldSpec, A: int, B: int) -> Witness:
    """Any (A, B) with gcd(A, q-1) = 1 and B = A (mod q)."""
    q, n = spec.q, spec.n
    if gcd(A, n) != 1:
        raise NotCoprime(f"gcd({A}, {n}) != 1")
    if (B - A) % q:
        raise CongruenceViolation(f"B = {B} is not congruent to A = {A} mod {q}")
    lam, ell = divmod(A, n)
    if ell == 0:
        # only possible for n = 1, where every A is coprime
        ell, lam = n, lam - 1
    m = (B - A) // q
    p, k = spec.p, spec.k
    h = AbRingElement.constant(p, k, lam + m) - _y0(spec).scale(m)
    elem = GroupRingElement.x_polynomial(spec, [1] * ell) + _all_ones(spec, h)
    return Witness(elem, TargetPair(A, B, q), "coprime", {"ell": ell, "lambda": lam, "m": m})


def missing_monomial(spec: FieldSpec) -> tuple[int, ...]:
    """The exponent vector absent from 1 + C_{n} + C_{n}C_{n-1} + ... + C_{n}...C_2.

    C_j is the monomial taken by y_0 in row j of the B matrix.
    """
    p, k, n = spec.p, spec.k, spec.n
    orb = orbit(spec)
    seen = [(0,) * k]
    acc = (0,) * k
    for row in range(n, 1, -1):
        col = orb.column(row, 0)
        acc = tuple((a + c) % p for a, c in zip(acc, col))
        seen.append(acc)
    present = {tuple_index(v, p) for v in seen}
    if len(present) != n:
        raise MissingMonomialNotUnique(f"partial products repeat: {len(present)} distinct of {n}")
    missing = [u for u in range(spec.q) if u not in present]
    if len(missing) != 1:
        raise MissingMonomialNotUnique(f"{len(missing)} monomials missing")
    u = missing[0]
    return tuple((u // p**i) % p for i in range(k))


def achieve_square(spec: FieldSpec, c: int, ell: int) -> Witness:
    """(A, B) = (c (q-1)^2, c + ell q)."""
    if spec.q < 3:
        raise UnsupportedQ("the square construction needs q >= 3")
    p, k, q, n = spec.p, spec.k, spec.q, spec.n
    U = missing_monomial(spec)
    inv = AbRingElement.monomial(p, k, [(-u) % p for u in U])
    h = AbRingElement.constant(p, k, c + ell) - inv.scale(ell)
    base = GroupRingElement.identity(spec) - GroupRingElement.from_components(spec, {1: _y0(spec)})
    elem = base + _all_ones(spec, h)
    return Witness(
        elem, TargetPair(c * n * n, c + ell * q, q), "square", {"c": c, "ell": ell, "U": list(U)}
    )


def cyclotomic_witness(spec: FieldSpec) -> Witness:
    """1 + Y_0 + ... + Y_0^(p-1), whose determinant vanishes: (A, B) = (p^(q-1), 0)."""
    p = spec.p
    h = AbRingElement.zero(p, spec.k)
    for e in range(p):
        h = h + _y0(spec, e)
    elem = GroupRingElement.from_components(spec, {0: h})
    return Witness(elem, TargetPair(p**spec.n, 0, spec.q), "cyclotomic", {})


def x_witness(spec: FieldSpec) -> Witness:
    """F = X: the shift circulant and a signed permutation, A = B = (-1)^(q-2)."""
    s = (-1) ** (spec.n - 1)
    return Witness(GroupRingElement.x_power(spec, 1), TargetPair(s, s, spec.q), "monomial-sign", {})


# ---------------------------------------------------------------------------
# the special constructions at q = 9 and q = 27


def q9_special_witness(c: int, b: int) -> Witness:
    """1 + Y X^2 + X^3 + X^4 + (c + b(1 - Y^2 Z^2))(1 + X + ... + X^7)."""
    from .search import base_element_catalog

    spec = find_field_spec(3, 2)
    entry = reference()["q9"]
    G = base_element_catalog(spec, "32")
    t = t_from_entry(entry["t"], 3, 2)
    h = AbRingElement.constant(3, 2, c) + t.scale(b)
    elem = G + _all_ones(spec, h)
    A = entry["A0"] * (1 + 2 * c)
    B = entry["B0"] + entry["B1"] * c + entry["b_step"] * b
    return Witness(elem, TargetPair(A, B, 9), "q9-special", {"c": c, "b": b})


def q27_case_A(case: str, lam: int) -> int:
    entry = q27_case(case)
    if case == "13^2":
        return 169 * (1 + 2 * lam)
    return 4 * (entry["k"] + 13 * lam)


def q27_special_witness(case: str, lam: int, m: int) -> Witness:
    """G + (lambda + m t)(1 + X + ... + X^25) for a tabulated case."""
    from .search import base_element_catalog

    if case not in Q27_CASES:
        raise UnsupportedTarget(f"unknown q=27 case {case!r}")
    spec = find_field_spec(3, 3)
    entry = q27_case(case)
    G = base_element_catalog(spec, case)
    t = t_from_entry(entry["t"], 3, 3)
    h = AbRingElement.constant(3, 3, lam) + t.scale(m)
    elem = G + _all_ones(spec, h)
    A = q27_case_A(case, lam)
    B = entry["B0"] + entry["B1"] * lam + 27 * m
    return Witness(elem, TargetPair(A, B, 27), "q27-special", {"case": case, "lambda": lam, "m": m})


def _negated(w: Witness) -> Witness:
    """Right multiplication by X negates both A and B when q - 1 is even."""
    spec = w.elem.spec
    sign = x_witness(spec).claimed.A
    elem = w.elem * GroupRingElement.x_power(spec, 1)
    params = dict(w.params, inner=w.construction)
    return Witness(
        elem, TargetPair(sign * w.claimed.A, sign * w.claimed.B, spec.q), "monomial-sign", params
    )


# ---------------------------------------------------------------------------
# achievability and decisions


def zq1_achievable(m: int, A: int) -> str:
    """Is A a Z_m integer group determinant?  Returns "yes", "no" or "unknown"."""
    if m < 1:
        raise ValueError("m must be positive")
    if m == 8:
        return "yes" if A % 2 or A % 32 == 0 else "no"
    if m == 4:
        return "yes" if A % 2 or A % 16 == 0 else "no"
    if gcd(A, m) == 1 or A % (m * m) == 0:
        return "yes"
    necessary = divisibility_holds(m, A)
    if not necessary:
        return "no"
    exact = is_prime(m) or (m % 2 == 0 and m > 4 and is_prime(m // 2))
    return "yes" if exact else "unknown"


def mersenne_exponent(q: int) -> Optional[int]:
    k = q.bit_length() - 1
    if q == 1 << k and k >= 2 and is_prime(q - 1):
        return k
    return None


def supported_q(q: int) -> bool:
    return q in (9, 27) or mersenne_exponent(q) is not None


def a_condition(q: int, A: int) -> bool:
    """Which A occur as the circulant factor of a GA(1, q) determinant (classified q only)."""
    if not supported_q(q):
        raise UnsupportedQ(f"q = {q} is not in the classified set")
    if q == 9:
        return A % 2 == 1 or A % 32 == 0
    if q == 27:
        return (A % 2 != 0 or A % 4 == 0) and (A % 13 != 0 or A % 169 == 0)
    r = q - 1
    return A % r != 0 or A % (r * r) == 0


@dataclass
class Decision:
    verdict: bool
    A: Optional[int] = None
    B: Optional[int] = None
    recipe: Optional[dict] = None

    def to_json(self) -> dict:
        return {
            "verdict": "yes" if self.verdict else "no",
            "A": None if self.A is None else str(self.A),
            "B": None if self.B is None else str(self.B),
            "recipe": stringify_ints(self.recipe),
        }


def candidate_pairs(q: int, D: int):
    """(A, b) with D = A b^(q-1), ascending |b|, positive b first."""
    n = q - 1
    root, _ = iroot(abs(D), n)
    for mag in range(1, int(root) + 1):
        power = mag**n
        if D % power:
            continue
        for b in (mag, -mag):
            yield D // (b**n), b


def recipe_for(q: int, A: int, B: int) -> dict:
    """Which construction reaches (A, B); assumes the pair is achievable."""
    n = q - 1
    if gcd(A, n) == 1:
        return {"construction": "coprime", "params": {"A": A, "B": B}}
    if A % (n * n) == 0:
        c = A // (n * n)
        return {"construction": "square", "params": {"c": c, "ell": (B - c) // q}}
    if q == 9:
        c = (A // 32 - 1) // 2
        b, r = divmod(B - 5 - 19 * c, 9)
        assert r == 0
        return {"construction": "q9-special", "params": {"c": c, "b": b}}
    if q == 27:
        return _q27_recipe(A, B)
    raise UnsupportedTarget(f"no construction for A = {A} at q = {q}")


def _q27_recipe(A: int, B: int) -> dict:
    if A % 169 == 0:
        case, lam = "13^2", (A // 169 - 1) // 2
    else:
        k = (A // 4) % 13
        if k > 6:
            inner = _q27_recipe(-A, -B)
            return {"construction": "monomial-sign", "params": {"inner": inner}}
        case = f"4*{k}"
        lam = (A // 4 - k) // 13
    entry = q27_case(case)
    m, r = divmod(B - entry["B0"] - entry["B1"] * lam, 27)
    assert r == 0
    return {"construction": "q27-special", "params": {"case": case, "lambda": lam, "m": m}}


def build_witness(spec: FieldSpec, recipe: dict) -> Witness:
    kind, params = recipe["construction"], recipe["params"]
    if kind == "coprime":
        return achieve_coprime(spec, params["A"], params["B"])
    if kind == "square":
        return achieve_square(spec, params["c"], params["ell"])
    if kind == "q9-special":
        return q9_special_witness(params["c"], params["b"])
    if kind == "q27-special":
        return q27_special_witness(params["case"], params["lambda"], params["m"])
    if kind == "monomial-sign":
        return _negated(build_witness(spec, params["inner"]))
    if kind == "cyclotomic":
        return cyclotomic_witness(spec)
    raise UnsupportedTarget(f"unknown construction {kind!r}")


def achieve(spec: FieldSpec, A: int, B: int) -> Witness:
    """A witness for the target pair, using whichever construction applies."""
    q = spec.q
    if (B - A) % q:
        raise CongruenceViolation(f"B = {B} is not congruent to A = {A} mod {q}")
    n = q - 1
    if gcd(A, n) != 1 and A % (n * n) and not (supported_q(q) and a_condition(q, A)):
        raise UnsupportedTarget(f"no construction reaches A = {A} at q = {q}")
    return build_witness(spec, recipe_for(q, A, B))


def decide_membership(spec: FieldSpec, D: int, *, with_witness: bool = True):
    """Is D an integer group determinant of GA(1, q)?  Returns (Decision, Witness or None)."""
    q = spec.q
    if not supported_q(q):
        raise UnsupportedQ(f"q = {q} is not in the classified set")
    if D == 0:
        recipe = {"construction": "cyclotomic", "params": {}}
        w = cyclotomic_witness(spec) if with_witness else None
        return Decision(True, spec.p ** spec.n, 0, recipe), w
    for A, b in candidate_pairs(q, D):
        if (b - A) % q == 0 and a_condition(q, A):
            recipe = recipe_for(q, A, b)
            w = build_witness(spec, recipe) if with_witness else None
            if w is not None and w.D != D:
                raise VerificationFailed(f"witness gives D = {w.D}, wanted {D}")
            return Decision(True, A, b, recipe), w
    return Decision(False), None
