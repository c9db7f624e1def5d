"""Theorem experiments: measure a statement's hypothesis and conclusion on a model.

Each condition is the worst relative residual of a registered check (or of a
whole-tensor comparison) over the sampled tuples. A condition *holds* when that
residual is within ``tol_claim``. ``implication`` experiments are consistent
unless the hypothesis holds and the conclusion does not; ``iff`` experiments
are consistent when both sides agree.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass
from typing import Callable, Optional

import numpy as np

from .derived import kulkarni
from .runner import NA, Model, evaluate_identity
from .tensor import max_norm

IMPLICATION = "implication"
IFF = "iff"

DEFAULT_NONDEGENERATE = "concircular"
DEFAULT_DEGENERATE = "conformal"


@dataclass(frozen=True)
class ExperimentResult:
    id: str
    statement: str
    semantics: str
    hypothesis: str
    conclusion: str
    hypothesis_residual: Optional[float]
    conclusion_residual: Optional[float]
    hypothesis_holds: Optional[bool]
    conclusion_holds: Optional[bool]
    consistent: Optional[bool]
    note: str = ""

    def as_dict(self) -> dict:
        return asdict(self)


@dataclass
class ExperimentConfig:
    samples: int = 100
    seed: Optional[int] = None
    tol_claim: float = 1e-9
    b_params: Optional[dict] = None
    nondegenerate_preset: str = DEFAULT_NONDEGENERATE
    degenerate_preset: str = DEFAULT_DEGENERATE


class _Conditions:
    """Named conditions evaluated once per model and memoized."""

    def __init__(self, model: Model, cfg: ExperimentConfig):
        self.model, self.cfg = model, cfg
        self._points: dict = {}
        self._memo: dict[str, Optional[float]] = {}

    def check(self, check_id: str) -> Optional[float]:
        if check_id not in self._memo:
            res = evaluate_identity(
                check_id, self.model, self.cfg.samples, seed=self.cfg.seed,
                tol_claim=self.cfg.tol_claim, b_params=self.cfg.b_params, points=self._points,
            )
            self._memo[check_id] = None if res.verdict == NA else res.max_rel
        return self._memo[check_id]

    def _over_points(self, key: str, fn: Callable) -> float:
        if key not in self._memo:
            count = 1 if self.model.kind == "spaceform" else self.cfg.samples
            self._memo[key] = max(fn(self.model.geometry(i)) for i in range(count))
        return self._memo[key]

    def constant_curvature_one(self) -> float:
        """R(X,Y)Z = g(Y,Z)X - g(X,Z)Y as a whole tensor."""

        def rel(geom):
            target = kulkarni(geom.g.data, np.eye(geom.n))
            return max_norm(geom.R.data - target) / (1.0 + max(max_norm(geom.R.data), max_norm(target)))

        return self._over_points("const1", rel)

    def semisymmetric(self) -> float:
        """R(U,V)·R = 0 for all U, V, checked on coordinate pairs."""

        def rel(geom):
            from .semisym import derive_tensor

            n, worst = geom.n, 0.0
            scale = 1.0 + max_norm(geom.R.data)
            for i in range(n):
                for j in range(i + 1, n):
                    e_i, e_j = np.eye(n)[i], np.eye(n)[j]
                    worst = max(worst, max_norm(derive_tensor(geom, e_i, e_j, geom.R).data))
            return worst / scale

        return self._over_points("semisym", rel)


@dataclass(frozen=True)
class Experiment:
    id: str
    statement: str
    semantics: str
    hypothesis: str
    conclusion: str
    preset: Optional[str] = None  # "nondegenerate" / "degenerate" B-tensor preset slot


EXPERIMENTS: dict[str, Experiment] = {
    e.id: e
    for e in [
        Experiment("EXP-T3.2", "horizontal phi^2[(R·R)(X,Y)xi] = 0 implies constant curvature 1",
                   IMPLICATION, "PRF-3.6", "const-curvature-1"),
        Experiment("EXP-T3.3", "locally phi-semisymmetric iff relation (3.18)", IFF, "DEF-3.5", "CHR-3.18"),
        Experiment("EXP-T4.1", "locally phi-semisymmetric iff relation (4.8)", IFF, "DEF-3.5", "CHR-4.8"),
        Experiment("EXP-T5.1", "locally Ricci phi-semisymmetric iff (R(U,V)·Q)(X) = 0 for horizontal U,V,X",
                   IFF, "DEF-5.1", "RQ-ZERO"),
        Experiment("EXP-T5.2", "locally phi-semisymmetric implies locally Ricci phi-semisymmetric",
                   IMPLICATION, "DEF-3.5", "DEF-5.1"),
        Experiment("EXP-T5.3", "locally Ricci phi-semisymmetric iff relation (5.6)", IFF, "DEF-5.1", "CHR-5.6"),
        Experiment("EXP-T5.4", "locally projectively phi-semisymmetric iff locally phi-semisymmetric",
                   IFF, "DEF-5.7P", "DEF-3.5"),
        Experiment("EXP-T5.5", "locally conformally phi-semisymmetric iff relation (5.16)",
                   IFF, "DEF-5.7C", "CHR-5.16"),
        Experiment("EXP-T5.6", "locally phi-semisymmetric implies locally conformally phi-semisymmetric",
                   IMPLICATION, "DEF-3.5", "DEF-5.7C"),
        Experiment("EXP-T5.7", "locally conformally phi-semisymmetric iff relation (5.18)",
                   IFF, "DEF-5.7C", "CHR-5.18"),
        Experiment("EXP-T5.8", "locally B-phi-semisymmetric iff relation (5.23)  (b0 + (n-2) b1 != 0)",
                   IFF, "DEF-5.20", "CHR-5.23", "nondegenerate"),
        Experiment("EXP-T5.9", "locally B-phi-semisymmetric implies locally Ricci phi-semisymmetric"
                   "  (b0 + (n-2) b1 != 0)", IMPLICATION, "DEF-5.20", "DEF-5.1", "nondegenerate"),
        Experiment("EXP-T5.10", "locally B-phi-semisymmetric iff locally phi-semisymmetric  (b0 + (n-2) b1 != 0)",
                   IFF, "DEF-5.20", "DEF-3.5", "nondegenerate"),
        Experiment("EXP-T5.11", "locally B-phi-semisymmetric iff relation (5.27)  (b0 + (n-2) b1 = 0)",
                   IFF, "DEF-5.20", "CHR-5.27", "degenerate"),
        Experiment("EXP-T5.12", "locally phi-semisymmetric implies locally B-phi-semisymmetric",
                   IMPLICATION, "DEF-3.5", "DEF-5.20", "degenerate"),
        Experiment("EXP-T5.13", "locally B-phi-semisymmetric iff relation (5.18)  (b0 + (n-2) b1 = 0)",
                   IFF, "DEF-5.20", "CHR-5.18", "degenerate"),
        Experiment("EXP-COR", "semisymmetric implies constant curvature 1",
                   IMPLICATION, "semisymmetric", "const-curvature-1"),
    ]
}


class UnknownExperimentError(KeyError):
    pass


def _condition_residual(conds: _Conditions, name: str, exp: Experiment) -> Optional[float]:
    if name == "const-curvature-1":
        return conds.constant_curvature_one()
    if name == "semisymmetric":
        return conds.semisymmetric()
    if exp.preset is not None and name in ("DEF-5.20", "CHR-5.23", "CHR-5.27"):
        preset = conds.cfg.nondegenerate_preset if exp.preset == "nondegenerate" else conds.cfg.degenerate_preset
        name = f"{name}@{preset}"
    return conds.check(name)


def run_experiment(exp_id: str, model: Model, config: ExperimentConfig | None = None,
                   _conditions: _Conditions | None = None) -> ExperimentResult:
    if exp_id not in EXPERIMENTS:
        raise UnknownExperimentError(exp_id)
    cfg = config or ExperimentConfig()
    exp = EXPERIMENTS[exp_id]
    conds = _conditions or _Conditions(model, cfg)
    h = _condition_residual(conds, exp.hypothesis, exp)
    c = _condition_residual(conds, exp.conclusion, exp)
    note = ""
    if exp.preset is not None:
        preset = cfg.nondegenerate_preset if exp.preset == "nondegenerate" else cfg.degenerate_preset
        note = f"B preset: {preset}"
    if h is None or c is None:
        missing = exp.hypothesis if h is None else exp.conclusion
        return ExperimentResult(exp.id, exp.statement, exp.semantics, exp.hypothesis, exp.conclusion,
                                h, c, None, None, None, (note + "; " if note else "") + f"{missing} not applicable")
    hh, ch = h <= cfg.tol_claim, c <= cfg.tol_claim
    consistent = (hh == ch) if exp.semantics == IFF else (not hh or ch)
    return ExperimentResult(exp.id, exp.statement, exp.semantics, exp.hypothesis, exp.conclusion,
                            h, c, hh, ch, consistent, note)


def run_experiments(ids, model: Model, config: ExperimentConfig | None = None) -> list[ExperimentResult]:
    cfg = config or ExperimentConfig()
    conds = _Conditions(model, cfg)
    return [run_experiment(i, model, cfg, _conditions=conds) for i in ids]
