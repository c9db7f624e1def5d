"""Evaluation of registered checks on a model: sampling, aggregation and verdicts."""

from __future__ import annotations

from dataclasses import asdict, dataclass
from typing import Iterable, Optional

import numpy as np

from .derived import BCoefficients, NotApplicableError
from .manifolds import BackendError, GeometryAtPoint, darboux_geometry, sample_vectors, space_form_geometry
from .pointwise import Point
from .registry import (
    ANY, CHART, CHART2, DIAGNOSTIC, HORIZONTAL, MUST_HOLD, NABLA, REGISTRY, TOLERANCE_CLASSES,
    IdentityCheck, residual,
)
from .sampling import sample_point, substream

PASS, FAIL, HOLDS, VIOLATED, NA = "PASS", "FAIL", "HOLDS", "VIOLATED", "N/A"

# alternative spellings accepted wherever a check id is
ALIASES = {
    "CNF-5.9-NA": "CNF-5.9",
    "PRF-3.6→3.10": "PRF-3.6-3.10",
}


class UnknownCheckError(KeyError):
    pass


class Model:
    """A Sasakian model with per-sample geometry caching.

    ``darboux``: the chart backend on R^(2m+1), one random chart point per sample.
    ``spaceform``: the algebraic backend; the geometry is the same at every sample.
    """

    def __init__(self, kind: str, m: int, c: float = 1.0, seed: int = 42, box: float = 1.0):
        if kind not in ("darboux", "spaceform"):
            raise ValueError(f"unknown manifold {kind!r}")
        if int(m) < 1:
            raise ValueError(f"m must be >= 1, got {m}")
        self.kind, self.m, self.c, self.seed, self.box = kind, int(m), float(c), int(seed), float(box)
        self.n = 2 * self.m + 1
        self._geoms: dict[int, GeometryAtPoint] = {}
        self._second: set[int] = set()
        self._shared: Optional[GeometryAtPoint] = None

    @property
    def backend(self) -> str:
        return "chart" if self.kind == "darboux" else "algebraic"

    def supports(self, requirement: str) -> bool:
        if requirement in (ANY, NABLA):
            return True
        return self.kind == "darboux"

    def describe(self) -> dict:
        d = {"manifold": self.kind, "m": self.m, "n": self.n}
        if self.kind == "spaceform":
            d["c"] = self.c
        return d

    def geometry(self, index: int, second_order: bool = False) -> GeometryAtPoint:
        if self.kind == "spaceform":
            if self._shared is None:
                self._shared = space_form_geometry(self.m, self.c)
            return self._shared
        have = self._geoms.get(index)
        if have is None or (second_order and index not in self._second):
            pt = sample_point(self.seed, index, self.n, self.box)
            have = darboux_geometry(self.m, pt, second_order=second_order)
            self._geoms[index] = have
            if second_order:
                self._second.add(index)
        return have


@dataclass(frozen=True)
class CheckResult:
    id: str
    eq: str
    input_class: str
    expectation: str
    samples: int
    max_abs: float
    max_rel: float
    scale: float
    verdict: str
    seed: int
    tol: float
    note: str = ""

    def as_dict(self) -> dict:
        d = asdict(self)
        d["class"] = d.pop("input_class")
        return d


def resolve_check(check_id: str) -> IdentityCheck:
    cid = ALIASES.get(check_id, check_id)
    try:
        return REGISTRY[cid]
    except KeyError:
        raise UnknownCheckError(check_id) from None


def expand_ids(selection: Iterable[str] | str) -> list[str]:
    """Resolve a selection into registered ids, in registry order.

    Accepts ``"all"``, exact ids, aliases, a base id that names a family
    (``B-5.21`` or ``B-5.21@*`` -> every preset, ``PRF-3.16`` -> both readings) and the group
    names ``axioms``, ``plumbing``.
    """
    if isinstance(selection, str):
        selection = [selection]
    wanted: set[str] = set()
    for item in selection:
        if item == "all":
            wanted.update(REGISTRY)
            continue
        if item == "axioms":
            wanted.update(axiom_ids())
            continue
        if item == "plumbing":
            wanted.update(i for i, c in REGISTRY.items() if c.plumbing)
            continue
        cid = ALIASES.get(item, item)
        cid = cid[:-2] if cid.endswith("@*") else cid
        if cid in REGISTRY:
            wanted.add(cid)
            continue
        family = [i for i in REGISTRY if i.startswith(cid + "@") or (i[:-1] == cid and i[-1] in "ab")]
        if not family:
            raise UnknownCheckError(item)
        wanted.update(family)
    return [i for i in REGISTRY if i in wanted]


def axiom_ids() -> list[str]:
    return [i for i in REGISTRY if i.startswith(("AX-", "SAS-"))]


def tolerance_for(check: IdentityCheck, tol_musthold: float = 1e-9, tol_claim: float = 1e-9) -> float:
    base = tol_musthold if check.expectation == MUST_HOLD else tol_claim
    floor = TOLERANCE_CLASSES.get(check.tol_class)
    return base if floor is None else max(base, floor)


def _coefficients(check: IdentityCheck, n: int, b_params: dict | None):
    if check.preset is None:
        return None
    kw = dict((b_params or {}).get(check.preset, {}))
    return BCoefficients.preset(check.preset, n, **kw)


def _verdict(check: IdentityCheck, ok: bool) -> str:
    if check.expectation == MUST_HOLD:
        return PASS if ok else FAIL
    return HOLDS if ok else VIOLATED


def evaluate_identity(
    check_id: str,
    model: Model,
    samples: int = 100,
    seed: Optional[int] = None,
    tol_musthold: float = 1e-9,
    tol_claim: float = 1e-9,
    b_params: dict | None = None,
    points: Optional[dict] = None,
) -> CheckResult:
    """Evaluate one check over ``samples`` sampled tuples.

    ``seed`` defaults to the model's seed; points are keyed by sample index and
    vectors by (check id, sample index), so results do not depend on evaluation
    order. ``points`` optionally shares :class:`Point` caches across checks.
    """
    check = resolve_check(check_id)
    if samples < 1:
        raise ValueError("samples must be >= 1")
    seed = model.seed if seed is None else int(seed)
    tol = tolerance_for(check, tol_musthold, tol_claim)

    def na(note):
        return CheckResult(check.id, check.eq, check.input_class, check.expectation, 0,
                           0.0, 0.0, 0.0, NA, seed, tol, note)

    if not model.supports(check.requires):
        return na(f"needs the {check.requires} backend")
    if model.n < check.min_dim:
        return na(f"needs n >= {check.min_dim}")
    coeffs = _coefficients(check, model.n, b_params)
    second = check.requires == CHART2
    kind = "horizontal" if check.input_class == HORIZONTAL else "arbitrary"
    max_abs = max_rel = max_scale = 0.0
    for i in range(samples):
        if points is not None and (i, second) in points:
            pt = points[(i, second)]
        else:
            pt = Point(model.geometry(i, second_order=second))
            if points is not None:
                points[(i, second)] = pt
        vecs = sample_vectors(pt.geom, kind, substream(seed, check.id, i), len(check.vectors))
        args = list(vecs)
        if coeffs is not None:
            args.append(coeffs)
        try:
            pairs = check.evaluator(pt, *args)
        except NotApplicableError as exc:
            return na(str(exc))
        except BackendError as exc:
            return na(str(exc))
        a, s = residual(pairs)
        max_abs = max(max_abs, a)
        max_rel = max(max_rel, a / s)
        max_scale = max(max_scale, s)
    return CheckResult(check.id, check.eq, check.input_class, check.expectation, samples,
                       max_abs, max_rel, max_scale, _verdict(check, max_rel <= tol), seed, tol)


def evaluate_many(ids: Iterable[str], model: Model, samples: int = 100, **kw) -> list[CheckResult]:
    points: dict = {}
    return [evaluate_identity(i, model, samples, points=points, **kw) for i in ids]
