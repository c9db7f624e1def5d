"""Report assembly and serialization (JSON and fixed-width text)."""

from __future__ import annotations

import json
from collections import Counter
from datetime import datetime, timezone
from typing import Optional

from . import __version__
from .experiments import EXPERIMENTS, ExperimentResult
from .registry import MUST_HOLD, OUT_OF_SCOPE, REGISTRY, equation_labels
from .runner import FAIL, CheckResult

VERDICT_ORDER = ("PASS", "FAIL", "HOLDS", "VIOLATED", "N/A")


def _float(x: Optional[float]):
    return None if x is None else float(x)


def check_row(r: CheckResult) -> dict:
    return {
        "id": r.id,
        "eq": r.eq,
        "class": r.input_class,
        "expectation": r.expectation,
        "samples": r.samples,
        "max_abs": _float(r.max_abs),
        "max_rel": _float(r.max_rel),
        "scale": _float(r.scale),
        "tol": _float(r.tol),
        "verdict": r.verdict,
        "seed": r.seed,
        "note": r.note,
    }


def experiment_row(r: ExperimentResult) -> dict:
    return {
        "id": r.id,
        "statement": r.statement,
        "semantics": r.semantics,
        "hypothesis": r.hypothesis,
        "conclusion": r.conclusion,
        "hypothesis_residual": _float(r.hypothesis_residual),
        "conclusion_residual": _float(r.conclusion_residual),
        "hypothesis_holds": r.hypothesis_holds,
        "conclusion_holds": r.conclusion_holds,
        "consistent": r.consistent,
        "note": r.note,
    }


def gate(checks: list[CheckResult]) -> bool:
    """True unless some must-hold check failed."""
    return not any(r.expectation == MUST_HOLD and r.verdict == FAIL for r in checks)


def build_report(config: dict, checks: list[CheckResult], experiments: list[ExperimentResult],
                 timestamp: Optional[str] = None) -> dict:
    counts = Counter(r.verdict for r in checks)
    summary = {v: counts.get(v, 0) for v in VERDICT_ORDER}
    exp_counts = Counter(
        "n/a" if e.consistent is None else ("consistent" if e.consistent else "inconsistent") for e in experiments
    )
    summary["experiments"] = {k: exp_counts.get(k, 0) for k in ("consistent", "inconsistent", "n/a")}
    if timestamp is None:
        timestamp = datetime.now(timezone.utc).replace(microsecond=0).isoformat()
    return {
        "meta": {"tool": "sasakicheck", "version": __version__, "config": config, "timestamp": timestamp},
        "checks": [check_row(r) for r in checks],
        "experiments": [experiment_row(e) for e in experiments],
        "summary": summary,
        "gate": gate(checks),
    }


def emit_json(report: dict) -> bytes:
    return (json.dumps(report, indent=2, ensure_ascii=False) + "\n").encode("utf-8")


def _num(x) -> str:
    return "-" if x is None else f"{x:.3e}"


def emit_text(report: dict) -> bytes:
    lines = []
    meta = report["meta"]
    cfg = meta["config"]
    lines.append(f"sasakicheck {meta['version']}  {meta['timestamp']}")
    lines.append("config: " + " ".join(f"{k}={cfg[k]}" for k in cfg))
    if report["checks"]:
        lines.append("")
        lines.append(f"{'id':<26} {'eq':<14} {'class':<11} {'samples':>7} {'max_abs':>10} "
                     f"{'max_rel':>10} {'scale':>10}  verdict")
        for r in report["checks"]:
            lines.append(f"{r['id']:<26} {r['eq']:<14} {r['class']:<11} {r['samples']:>7} "
                         f"{_num(r['max_abs']):>10} {_num(r['max_rel']):>10} {_num(r['scale']):>10}  {r['verdict']}")
    if report["experiments"]:
        lines.append("")
        lines.append(f"{'experiment':<11} {'semantics':<12} {'hypothesis':>11} {'conclusion':>11}  consistent")
        for e in report["experiments"]:
            cons = "n/a" if e["consistent"] is None else ("yes" if e["consistent"] else "NO")
            lines.append(f"{e['id']:<11} {e['semantics']:<12} {_num(e['hypothesis_residual']):>11} "
                         f"{_num(e['conclusion_residual']):>11}  {cons}")
    lines.append("")
    s = report["summary"]
    lines.append("summary: " + " ".join(f"{v}={s[v]}" for v in VERDICT_ORDER)
                 + " | experiments: " + " ".join(f"{k}={v}" for k, v in s["experiments"].items()))
    lines.append(f"gate: {'true' if report['gate'] else 'false'}")
    return ("\n".join(lines) + "\n").encode("utf-8")


def emit_report(report: dict, fmt: str = "json") -> bytes:
    if fmt == "json":
        return emit_json(report)
    if fmt == "text":
        return emit_text(report)
    raise ValueError(f"unknown format {fmt!r}")


def _primary_label(eq: str) -> Optional[str]:
    head = eq.replace("->", " ").split()[0]
    return head if head.startswith("(") else None


def registry_listing() -> list[str]:
    """One block per numbered equation, each label printed exactly once."""
    grouped: dict[str, list] = {lab: [] for lab in equation_labels()}
    engine = []
    for chk in REGISTRY.values():
        lab = _primary_label(chk.eq)
        (grouped[lab] if lab in grouped else engine).append(chk)
    lines = []
    for lab, checks in grouped.items():
        if lab in OUT_OF_SCOPE:
            lines.append(f"{lab}  {OUT_OF_SCOPE[lab]}")
            continue
        lines.append(lab)
        for c in checks:
            lines.append(f"    {c.id:<26} {c.input_class:<11} {c.expectation:<12} {c.requires:<7} {c.formula}")
    lines.append("engine self-checks")
    for c in engine:
        lines.append(f"    {c.id:<26} {c.input_class:<11} {c.expectation:<12} {c.requires:<7} {c.formula}")
    lines.append("experiments")
    for e in EXPERIMENTS.values():
        lines.append(f"    {e.id:<11} {e.semantics:<12} {e.hypothesis} => {e.conclusion}: {e.statement}")
    return lines
