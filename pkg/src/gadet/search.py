"""Synthesis of t(y) so that every B = A (mod q) becomes reachable.

Given a base element G with the desired A0 = A(G), adding
h(y) * (1 + X + ... + X^(q-2)) changes B linearly:

    B = B0 + sum over nonzero characters s of alpha(s) h(s)

where alpha is the B determinant with its first row replaced by ones.  Taking
h = lambda + m t with t(1,...,1) = 0 and constant term of t*alpha equal to 1
gives B = B0 + lambda * B1 + q * m.
"""

from __future__ import annotations

import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Optional, Sequence, Union

from .constants import Q27_CASES, poly_from_entry, q27_case, reference, t_from_entry
from .detengine import (
    GroupRingElement,
    compute_A,
    compute_B,
    group_ring_det_with_first_row_ones,
)
from .errors import GcdFailure, MismatchAgainstReference, UnsupportedCase, VerificationFailed
from .field import FieldSpec, find_field_spec, orbit
from .rings import AbRingElement, ab_sum_over_nontrivial, format_monomial, variable_names

log = logging.getLogger(__name__)


@dataclass
class ProcedureResult:
    alpha: AbRingElement
    beta: Optional[AbRingElement]
    t: AbRingElement
    B0: int
    B1: int
    method: str
    certificate: dict = field(default_factory=dict)
    A0: Optional[int] = None

    def to_json(self) -> dict:
        return {
            "A0": None if self.A0 is None else str(self.A0),
            "B0": str(self.B0),
            "B1": str(self.B1),
            "method": self.method,
            "certificate": self.certificate,
            "alpha": list(self.alpha.coeffs),
            "beta": None if self.beta is None else list(self.beta.coeffs),
            "t": list(self.t.coeffs),
        }


def _ext_gcd(a: int, b: int) -> tuple[int, int, int]:
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        qt, r = divmod(a, b)
        a, b = b, r
        x0, x1 = x1, x0 - qt * x1
        y0, y1 = y1, y0 - qt * y1
    return a, x0, y0


def bezout_combination(values: Sequence[int]) -> tuple[int, list[int]]:
    """Left fold of the extended gcd: returns (g, xi) with sum xi_i * values_i = g >= 0."""
    g, xi = 0, [0] * len(values)
    for i, v in enumerate(values):
        if v == 0:
            continue
        g_new, a, b = _ext_gcd(g, v)
        xi = [a * x for x in xi]
        xi[i] = b
        g = g_new
    if g < 0:
        g, xi = -g, [-x for x in xi]
    return g, xi


def find_coefficient_pair(alpha: AbRingElement) -> Optional[tuple[int, int]]:
    """First ordered pair (u, u') of present monomials with alpha[u] - alpha[u'] == 1."""
    present = [(u, c) for u, c in enumerate(alpha.coeffs) if c]
    for u, c in present:
        for v, d in present:
            if c - d == 1:
                return u, v
    return None


def _check_t(t: AbRingElement, alpha: AbRingElement) -> None:
    if t.value_at_ones() != 0:
        raise VerificationFailed("t(1, ..., 1) != 0")
    if (t * alpha).constant_term() != 1:
        raise VerificationFailed("constant term of t * alpha is not 1")


def run_procedure(
    spec: FieldSpec,
    G: GroupRingElement,
    *,
    t: Optional[AbRingElement] = None,
    var: int = 0,
    workers: int = 1,
) -> ProcedureResult:
    """Compute alpha, a valid t, B0 and B1 for the base element G.

    Pass ``t`` to use a known certificate instead of searching for one.
    """
    if G.spec != spec:
        raise ValueError("base element belongs to a different field")
    p, k, q = spec.p, spec.k, spec.q
    A0 = compute_A(G)
    alpha = group_ring_det_with_first_row_ones(G, workers=workers)
    beta = None
    names = variable_names(k)
    shift = AbRingElement.monomial(p, k, [int(i == var) for i in range(k)]) - AbRingElement.constant(
        p, k, 1
    )
    if t is not None:
        method, cert = "given", {}
    else:
        pair = find_coefficient_pair(alpha)
        if pair is not None:
            u, v = pair
            t = (
                AbRingElement(p, k, tuple(int(i == u) for i in range(q))).inverse_exponents()
                - AbRingElement(p, k, tuple(int(i == v) for i in range(q))).inverse_exponents()
            )
            method = "coefficient-pair"
            cert = {
                "monomials": [
                    _term_text(alpha.coeffs[u], u, spec),
                    _term_text(alpha.coeffs[v], v, spec),
                ]
            }
        else:
            beta = shift * alpha
            g, xi = bezout_combination(beta.coeffs)
            if g != 1:
                raise GcdFailure(f"coefficients of ({names[var]} - 1) * alpha share the factor {g}")
            t = shift * AbRingElement(p, k, tuple(xi)).inverse_exponents()
            method = "extended-gcd"
            cert = {"xi": {_mono_text(u, spec): x for u, x in enumerate(xi) if x}}
    if beta is None:
        beta = shift * alpha
    _check_t(t, alpha)
    B0 = compute_B(G, workers=workers)
    S, a0 = ab_sum_over_nontrivial(alpha)
    B1 = S
    if B1 != q * a0 - alpha.value_at_ones():
        raise VerificationFailed("B1 disagrees with q * a0 - alpha(1, ..., 1)")
    return ProcedureResult(alpha, beta, t, B0, B1, method, cert, A0)


def _mono_text(u: int, spec: FieldSpec) -> str:
    from .field import index_tuple

    return format_monomial(index_tuple(u, spec.p, spec.k)) or "1"


def _term_text(c: int, u: int, spec: FieldSpec) -> str:
    mono = _mono_text(u, spec)
    return str(c) if mono == "1" else f"{c}{mono}"


def element_for(G: GroupRingElement, h: AbRingElement) -> GroupRingElement:
    """G + h(Y) * (1 + X + ... + X^(q-2))."""
    return G + GroupRingElement.times_all_ones(G.spec, h)


def family_member(G: GroupRingElement, t: AbRingElement, lam: int, m: int) -> GroupRingElement:
    spec = G.spec
    h = AbRingElement.constant(spec.p, spec.k, lam) + t.scale(m)
    return element_for(G, h)


# ---------------------------------------------------------------------------
# catalog of base elements


def q27_lambda_step(case: str) -> int:
    return 52 if case.startswith("4") else 338


def base_element_catalog(spec: FieldSpec, case: Union[str, Sequence[int]]) -> GroupRingElement:
    """Base element G for a target A0.

    q=27 accepts "4*1".."4*6" and "13^2"; q=9 accepts "32".  For any other field
    ``case`` is the coefficient list of f(x) and the x term gets a y0 decoration.
    """
    if spec.q == 27 and isinstance(case, str):
        entry = q27_case(case)
        return GroupRingElement.from_components(spec, {int(j): s for j, s in entry["G"].items()})
    if spec.q == 9 and isinstance(case, str):
        if case != "32":
            raise UnsupportedCase(f"q=9 has only the case '32', got {case!r}")
        entry = reference()["q9"]
        return GroupRingElement.from_components(spec, {int(j): s for j, s in entry["G"].items()})
    if isinstance(case, str):
        raise UnsupportedCase(f"no named case {case!r} for q={spec.q}")
    g = list(case)
    if len(g) < 2:
        g = g + [0] * (2 - len(g))
    base = GroupRingElement.x_polynomial(spec, [c if j != 1 else c - 1 for j, c in enumerate(g)])
    y0 = AbRingElement.monomial(spec.p, spec.k, [1] + [0] * (spec.k - 1))
    return base + GroupRingElement.from_components(spec, {1: y0})


def recorded_t(case: str) -> AbRingElement:
    """Recorded certificate t(y) for a q=27 case."""
    return t_from_entry(q27_case(case)["t"], 3, 3)


# ---------------------------------------------------------------------------
# reproduction of the worked computations


def _q27_row(case: str, use_recorded_t: bool) -> dict:
    spec = find_field_spec(3, 3)
    entry = q27_case(case)
    G = base_element_catalog(spec, case)
    recorded_t = t_from_entry(entry["t"], 3, 3)
    res = run_procedure(spec, G, t=recorded_t if use_recorded_t else None)
    alpha_ok = res.alpha.value_at_ones() == entry["alpha_at_ones"]
    if "alpha" in entry:
        alpha_ok = alpha_ok and res.alpha == poly_from_entry(entry["alpha"], 3, 3)
    beta_ok = True
    if "beta" in entry:
        beta_ok = res.beta == poly_from_entry(entry["beta"], 3, 3)
    # the recorded certificate must satisfy the constant-term contract
    beta_ok = beta_ok and recorded_t.value_at_ones() == 0
    beta_ok = beta_ok and (recorded_t * res.alpha).constant_term() == 1
    a_ok = res.A0 == entry["A0"]
    ok = alpha_ok and beta_ok and a_ok and res.B0 == entry["B0"] and res.B1 == entry["B1"]
    return {
        "case": case,
        "B0": str(res.B0),
        "B1": str(res.B1),
        "expected_B0": str(entry["B0"]),
        "expected_B1": str(entry["B1"]),
        "alpha_match": bool(alpha_ok),
        "beta_match": bool(beta_ok),
        "pass": bool(ok),
        "method": res.method,
    }


def _q9_row(grid: int = 2) -> dict:
    spec = find_field_spec(3, 2)
    entry = reference()["q9"]
    G = base_element_catalog(spec, "32")
    t = t_from_entry(entry["t"], 3, 2)
    res = run_procedure(spec, G, t=t)
    alpha_ok = res.alpha == poly_from_entry(entry["alpha"], 3, 2)
    t_alpha = t * res.alpha
    beta_ok = t_alpha == poly_from_entry(entry["t_alpha"], 3, 2)
    b_step, _ = ab_sum_over_nontrivial(t_alpha)
    grid_ok = True
    for c in range(-grid, grid + 1):
        for b in range(-grid, grid + 1):
            F = family_member(G, t, c, b)
            if compute_B(F) != entry["B0"] + entry["B1"] * c + entry["b_step"] * b:
                grid_ok = False
            if compute_A(F) != entry["A0"] * (1 + 2 * c):
                grid_ok = False
    ok = (
        alpha_ok
        and beta_ok
        and grid_ok
        and res.B0 == entry["B0"]
        and res.B1 == entry["B1"]
        and b_step == entry["b_step"]
        and res.A0 == entry["A0"]
    )
    return {
        "case": "q9",
        "B0": str(res.B0),
        "B1": str(res.B1),
        "expected_B0": str(entry["B0"]),
        "expected_B1": str(entry["B1"]),
        "alpha_match": bool(alpha_ok),
        "beta_match": bool(beta_ok),
        "pass": bool(ok),
        "b_step": str(b_step),
        "grid_ok": grid_ok,
    }


def orbit_monomials(spec: FieldSpec, var: int = 0) -> list[str]:
    orb = orbit(spec)
    return [format_monomial(orb.column(row, var)) for row in range(1, spec.n + 1)]


def _orbit_rows() -> list[dict]:
    rows = []
    for q, (p, k) in (("9", (3, 2)), ("27", (3, 3))):
        spec = find_field_spec(p, k)
        for var_name, expected in reference()["orbits"][q].items():
            got = orbit_monomials(spec, "yzw".index(var_name))
            rows.append(
                {
                    "case": f"q{q}-{var_name}",
                    "sequence": got,
                    "expected": expected,
                    "pass": got == expected,
                }
            )
    return rows


def reproduce(
    section: str, *, workers: int = 1, use_recorded_t: bool = False, strict: bool = False
) -> dict:
    """Recompute a section ("q9", "q27" or "orbits") and compare with the stored values."""
    if section == "q27":
        if workers > 1:
            with ProcessPoolExecutor(max_workers=workers) as pool:
                rows = list(pool.map(_q27_row, Q27_CASES, [use_recorded_t] * len(Q27_CASES)))
        else:
            rows = [_q27_row(c, use_recorded_t) for c in Q27_CASES]
    elif section == "q9":
        rows = [_q9_row()]
    elif section == "orbits":
        rows = _orbit_rows()
    else:
        raise ValueError(f"unknown section {section!r}")
    report = {"section": section, "cases": rows, "pass": all(r["pass"] for r in rows)}
    if strict and not report["pass"]:
        bad = [r["case"] for r in rows if not r["pass"]]
        raise MismatchAgainstReference(f"{section}: mismatch in {bad}")
    return report
