"""Command line interface: compute, verify, achieve, decide, reproduce, classify."""

from __future__ import annotations

import argparse
import itertools
import json
import logging
import os
import random
import sys
from dataclasses import asdict, dataclass
from typing import Optional, Sequence

from .achievers import achieve, decide_membership, supported_q
from .detengine import GroupRingElement, compute_AB, compute_B, compute_report
from .errors import (
    GadetError,
    MismatchAgainstReference,
    UnsupportedQ,
    UnsupportedTarget,
)
from .field import FieldSpec, field_for_q, index_tuple
from .search import reproduce

log = logging.getLogger("gadet")

EXIT_OK, EXIT_CHECK, EXIT_INPUT, EXIT_UNSUPPORTED = 0, 1, 2, 3

ENV_THREADS = "GADET_THREADS"
ENV_CONFIG = "GADET_CONFIG"


@dataclass
class Config:
    threads: int = 1
    oracle_cap: int = 128
    symbolic_cap: int = 32
    seed: int = 0

    def __post_init__(self):
        for name in ("threads", "oracle_cap", "symbolic_cap"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be positive")


def load_config(args: argparse.Namespace) -> Config:
    """Defaults, then the JSON file named by GADET_CONFIG, then env, then flags."""
    values = asdict(Config())
    path = os.environ.get(ENV_CONFIG)
    if path:
        with open(path) as fh:
            values.update({k: int(v) for k, v in json.load(fh).items() if k in values})
    if os.environ.get(ENV_THREADS):
        values["threads"] = int(os.environ[ENV_THREADS])
    for key in values:
        flag = getattr(args, key, None)
        if flag is not None:
            values[key] = flag
    return Config(**values)


def _emit(obj) -> None:
    print(json.dumps(obj, sort_keys=True))


def load_element(path: str) -> GroupRingElement:
    """Read an element file.

    Two layouts are accepted: {"spec": {...}, "coeffs": [...]} as written by
    the package, and {"q": 9, "components": {"0": "1", "2": "y"}} keyed by the
    power of X.
    """
    with open(path) as fh:
        obj = json.load(fh)
    if "coeffs" in obj:
        return GroupRingElement.from_json(obj)
    if "spec" in obj:
        spec = FieldSpec.from_json(obj["spec"])
    else:
        spec = field_for_q(int(obj["q"]))
    comps = {int(j): v for j, v in obj["components"].items()}
    return GroupRingElement.from_components(spec, comps)


def _spec_for(q: int) -> FieldSpec:
    return field_for_q(q)


# ---------------------------------------------------------------------------
# commands


def cmd_compute(args, cfg: Config) -> int:
    try:
        elem = load_element(args.element)
    except (OSError, ValueError, KeyError, GadetError) as exc:
        print(f"error: cannot read element: {exc}", file=sys.stderr)
        return EXIT_INPUT
    report = compute_report(
        elem,
        with_oracle=args.oracle,
        oracle_cap=cfg.oracle_cap,
        symbolic_cap=cfg.symbolic_cap,
        workers=cfg.threads,
    )
    _emit(report.to_json())
    ok = report.congruence_ok and (not args.oracle or report.oracle_D == report.D)
    return EXIT_OK if ok else EXIT_CHECK


def check_element(
    elem: GroupRingElement, rng: random.Random, cfg: Config, oracle: bool, starts: int = 3
) -> dict[str, bool]:
    """Congruence, the averaging identity, start independence and (optionally) the oracle."""
    spec = elem.spec
    report = compute_report(
        elem,
        with_oracle=oracle,
        oracle_cap=cfg.oracle_cap,
        symbolic_cap=cfg.symbolic_cap,
        workers=cfg.threads,
    )
    out = {"congruence": report.congruence_ok}
    if report.start_independent is not None:
        out["avg_identity"] = report.avg_identity_ok
        out["start_independent"] = report.start_independent
    else:
        picks = rng.sample(range(1, spec.q), min(starts, spec.q - 1))
        vals = {compute_B(elem, index_tuple(s, spec.p, spec.k)) for s in picks}
        out["start_independent"] = vals == {report.B}
    if oracle:
        out["oracle"] = report.oracle_D == report.D
    return out


def cmd_verify(args, cfg: Config) -> int:
    try:
        spec = _spec_for(args.q)
    except GadetError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    rng = random.Random(cfg.seed)
    oracle = args.oracle and spec.q * spec.n <= cfg.oracle_cap
    if args.oracle and not oracle:
        log.warning("group order %d exceeds the oracle cap %d", spec.q * spec.n, cfg.oracle_cap)
    elems = []
    if args.pinned:
        from .achievers import cyclotomic_witness

        elems.append(cyclotomic_witness(spec).elem)
    elems += [GroupRingElement.random(spec, rng, args.coeff_bound) for _ in range(args.samples)]
    counts: dict[str, int] = {}
    failure = None
    for elem in elems:
        result = check_element(elem, rng, cfg, oracle)
        for key, ok in result.items():
            counts[key] = counts.get(key, 0) + int(ok)
        if failure is None and not all(result.values()):
            failure = elem
    summary = {"q": spec.q, "samples": len(elems), "passed": counts}
    if failure is not None:
        with open(args.dump, "w") as fh:
            json.dump(failure.to_json(), fh)
        summary["counterexample"] = args.dump
    _emit(summary)
    return EXIT_OK if failure is None else EXIT_CHECK


def cmd_achieve(args, cfg: Config) -> int:
    try:
        spec = _spec_for(args.q)
        witness = achieve(spec, args.A, args.B)
    except (UnsupportedTarget, UnsupportedQ) as exc:
        print(f"unsupported: {exc}", file=sys.stderr)
        return EXIT_UNSUPPORTED
    except GadetError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    data = witness.to_json()
    if args.out:
        with open(args.out, "w") as fh:
            json.dump(data, fh)
    _emit(data)
    return EXIT_OK


def cmd_decide(args, cfg: Config) -> int:
    try:
        spec = _spec_for(args.q)
        decision, witness = decide_membership(spec, args.D)
    except UnsupportedQ as exc:
        print(f"unsupported: {exc}", file=sys.stderr)
        return EXIT_UNSUPPORTED
    out = decision.to_json()
    out["witness"] = None if witness is None else witness.to_json()
    _emit(out)
    return EXIT_OK if decision.verdict else EXIT_CHECK


def cmd_reproduce(args, cfg: Config) -> int:
    try:
        report = reproduce(
            args.section, workers=cfg.threads, use_recorded_t=args.recorded_t, strict=False
        )
    except MismatchAgainstReference as exc:
        print(f"mismatch: {exc}", file=sys.stderr)
        return EXIT_CHECK
    _emit(report)
    return EXIT_OK if report["pass"] else EXIT_CHECK


def enumerate_elements(spec: FieldSpec, bound: int, max_elements: int, rng: random.Random):
    size = spec.q * spec.n
    total = (2 * bound + 1) ** size
    if total <= max_elements:
        for coeffs in itertools.product(range(-bound, bound + 1), repeat=size):
            yield GroupRingElement(spec, coeffs)
    else:
        for _ in range(max_elements):
            yield GroupRingElement.random(spec, rng, bound)


def cmd_classify(args, cfg: Config) -> int:
    try:
        spec = _spec_for(args.q)
    except GadetError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    rng = random.Random(cfg.seed)
    found: dict[int, tuple] = {}
    for elem in enumerate_elements(spec, args.coeff_bound, args.max_elements, rng):
        A, B = compute_AB(elem)
        D = A * B**spec.n
        if abs(D) <= args.max_abs and D not in found:
            found[D] = (elem, A, B)
    can_decide = supported_q(spec.q)
    mismatches = 0
    lines = []
    for D in sorted(found):
        elem, A, B = found[D]
        row = {"D": str(D), "A": str(A), "B": str(B), "congruence_ok": (B - A) % spec.q == 0}
        if can_decide:
            decision, _ = decide_membership(spec, D, with_witness=False)
            row["decider"] = "yes" if decision.verdict else "no"
            mismatches += not decision.verdict
        row["element"] = elem.to_json()
        lines.append(row)
    out = open(args.out, "w") if args.out else sys.stdout
    try:
        for row in lines:
            out.write(json.dumps(row, sort_keys=True) + "\n")
        summary = {"summary": True, "distinct_D": len(lines), "decider_disagreements": mismatches}
        if not can_decide:
            summary["decider"] = "unavailable for this q"
        out.write(json.dumps(summary, sort_keys=True) + "\n")
    finally:
        if args.out:
            out.close()
    ok = mismatches == 0 and all(r["congruence_ok"] for r in lines)
    return EXIT_OK if ok else EXIT_CHECK


# ---------------------------------------------------------------------------
# argument parsing


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="gadet", description=__doc__)
    parser.add_argument("--threads", type=int, default=None, help="worker processes")
    parser.add_argument("--oracle-cap", dest="oracle_cap", type=int, default=None)
    parser.add_argument("--symbolic-cap", dest="symbolic_cap", type=int, default=None)
    parser.add_argument("--seed", type=int, default=None)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("compute", help="A, B and D for an element file")
    p.add_argument("--element", required=True)
    p.add_argument("--oracle", action="store_true", help="also brute force D")
    p.set_defaults(func=cmd_compute)

    p = sub.add_parser("verify", help="check the determinant structure on random elements")
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--samples", type=int, default=100)
    p.add_argument("--coeff-bound", dest="coeff_bound", type=int, default=2)
    p.add_argument("--oracle", action="store_true")
    p.add_argument("--pinned", action="store_true", help="include 1 + Y + ... + Y^(p-1)")
    p.add_argument("--dump", default="counterexample.json")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("achieve", help="construct an element with given A and B")
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--A", dest="A", type=int, required=True)
    p.add_argument("--B", dest="B", type=int, required=True)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_achieve)

    p = sub.add_parser("decide", help="is D a group determinant?")
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--D", dest="D", type=int, required=True)
    p.set_defaults(func=cmd_decide)

    p = sub.add_parser("reproduce", help="recompute the stored worked examples")
    p.add_argument("--section", choices=("q9", "q27", "orbits"), required=True)
    p.add_argument(
        "--recorded-t", dest="recorded_t", action="store_true", help="use the stored t certificates"
    )
    p.set_defaults(func=cmd_reproduce)

    p = sub.add_parser("classify", help="enumerate small elements and collect their determinants")
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--coeff-bound", dest="coeff_bound", type=int, default=1)
    p.add_argument("--max-abs", dest="max_abs", type=int, default=1000)
    p.add_argument("--max-elements", dest="max_elements", type=int, default=20000)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_classify)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING)
    try:
        cfg = load_config(args)
    except (ValueError, OSError) as exc:
        print(f"error: bad configuration: {exc}", file=sys.stderr)
        return EXIT_INPUT
    try:
        return args.func(args, cfg)
    except UnsupportedQ as exc:
        print(f"unsupported: {exc}", file=sys.stderr)
        return EXIT_UNSUPPORTED
    except GadetError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
