"""Command-line front end.

Exit codes: 0 when every must-hold check passed, 1 when one failed,
2 for usage or configuration errors (including an unwritable output path).
"""

from __future__ import annotations

import argparse
import sys
from typing import Optional, Sequence

from .derived import PRESET_KINDS
from .experiments import EXPERIMENTS, ExperimentConfig, run_experiments
from .report import build_report, emit_report, registry_listing
from .runner import Model, UnknownCheckError, axiom_ids, evaluate_many, expand_ids

EXIT_OK, EXIT_GATE, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _positive_int(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError(f"expected an integer >= 1, got {text}")
    return v


def _seed(text: str) -> int:
    v = int(text)
    if not 0 <= v < 2**64:
        raise argparse.ArgumentTypeError("seed must be an unsigned 64-bit integer")
    return v


def _selection(text: str) -> list[str]:
    return [s for s in (part.strip() for part in text.split(",")) if s]


def _run_options(p: argparse.ArgumentParser, ids_default: Optional[str], exps_default: Optional[str]) -> None:
    p.add_argument("--manifold", choices=("darboux", "spaceform"), default="darboux")
    p.add_argument("--m", type=_positive_int, default=2, help="half-dimension; n = 2m + 1")
    p.add_argument("--c", type=float, default=1.0, help="phi-sectional curvature (spaceform only)")
    p.add_argument("--samples", type=_positive_int, default=100)
    p.add_argument("--seed", type=_seed, default=42)
    p.add_argument("--tol-musthold", type=float, default=1e-9)
    p.add_argument("--tol-claim", type=float, default=1e-9)
    if ids_default is not None:
        p.add_argument("--ids", type=_selection, default=_selection(ids_default),
                       help="comma-separated check ids, families (e.g. B-5.21) or 'all'")
    if exps_default is not None:
        p.add_argument("--experiments", type=_selection, default=_selection(exps_default),
                       help="comma-separated experiment ids or 'all'")
    p.add_argument("--b-custom", type=float, nargs=3, metavar=("B0", "B1", "B2"), default=None,
                   help="coefficients of the custom B-tensor preset")
    p.add_argument("--b-quasi", type=float, nargs=2, metavar=("B0", "B1"), default=None,
                   help="b0, b1 of the quasi-conformal preset (b2 follows from trace-freeness)")
    p.add_argument("--nondegenerate-preset", choices=PRESET_KINDS, default="concircular",
                   help="B preset used by experiments that need b0 + (n-2) b1 != 0")
    p.add_argument("--degenerate-preset", choices=PRESET_KINDS, default="conformal",
                   help="B preset used by experiments that need b0 + (n-2) b1 = 0")
    p.add_argument("--out", default=None, help="report path (default: standard output)")
    p.add_argument("--format", choices=("json", "text"), default="json")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="sasakicheck", description="Verify Sasakian curvature identities.")
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("list", help="print the identity registry grouped by equation")
    _run_options(sub.add_parser("verify", help="run identity checks"), "all", "")
    _run_options(sub.add_parser("experiment", help="run theorem experiments"), None, "all")
    _run_options(sub.add_parser("axioms", help="run the structure-equation suite"), None, None)
    return parser


def _b_params(args) -> dict:
    out = {}
    if args.b_custom is not None:
        out["custom"] = dict(zip(("b0", "b1", "b2"), args.b_custom))
    if args.b_quasi is not None:
        out["quasi-conformal"] = dict(zip(("b0", "b1"), args.b_quasi))
    return out


def _config_echo(args, ids, exps) -> dict:
    cfg = {"command": args.command, "manifold": args.manifold, "m": args.m}
    if args.manifold == "spaceform":
        cfg["c"] = args.c
    cfg.update(samples=args.samples, seed=args.seed, tol_musthold=args.tol_musthold, tol_claim=args.tol_claim,
               ids=ids, experiments=exps, b_params=_b_params(args),
               nondegenerate_preset=args.nondegenerate_preset, degenerate_preset=args.degenerate_preset,
               format=args.format)
    return cfg


def _resolve_experiments(selection: list[str]) -> list[str]:
    if "all" in selection:
        return list(EXPERIMENTS)
    unknown = [e for e in selection if e not in EXPERIMENTS]
    if unknown:
        raise UsageError(f"unknown experiment id(s): {', '.join(unknown)}")
    return [e for e in EXPERIMENTS if e in selection]


def run(args) -> tuple[dict, bytes]:
    if args.command == "axioms":
        ids = axiom_ids()
        exps: list[str] = []
    else:
        try:
            ids = expand_ids(args.ids) if getattr(args, "ids", None) else []
        except UnknownCheckError as exc:
            raise UsageError(f"unknown check id: {exc.args[0]}") from None
        exps = _resolve_experiments(args.experiments) if getattr(args, "experiments", None) else []
    model = Model(args.manifold, args.m, args.c, seed=args.seed)
    b_params = _b_params(args)
    try:
        checks = evaluate_many(ids, model, args.samples, tol_musthold=args.tol_musthold,
                               tol_claim=args.tol_claim, b_params=b_params)
    except (TypeError, ValueError) as exc:
        raise UsageError(str(exc)) from None
    cfg = ExperimentConfig(samples=args.samples, tol_claim=args.tol_claim, b_params=b_params,
                           nondegenerate_preset=args.nondegenerate_preset,
                           degenerate_preset=args.degenerate_preset)
    experiments = run_experiments(exps, model, cfg)
    report = build_report(_config_echo(args, ids, exps), checks, experiments)
    return report, emit_report(report, args.format)


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    if args.command == "list":
        sys.stdout.write("\n".join(registry_listing()) + "\n")
        return EXIT_OK
    try:
        report, payload = run(args)
    except UsageError as exc:
        print(f"sasakicheck: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if args.out is None:
        sys.stdout.buffer.write(payload)
        sys.stdout.flush()
    else:
        try:
            with open(args.out, "wb") as fh:
                fh.write(payload)
        except OSError as exc:
            print(f"sasakicheck: error: cannot write {args.out}: {exc}", file=sys.stderr)
            return EXIT_USAGE
    return EXIT_OK if report["gate"] else EXIT_GATE


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
