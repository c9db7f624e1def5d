"""Registry of identity checks, one or more per numbered equation, and their evaluation.

Every evaluator receives a :class:`~sasakicheck.pointwise.Point` plus the
sampled vectors and returns a list of ``(lhs, rhs)`` pairs. Each side is an
array or a list of summand arrays; the residual of a sample is the largest
entry of ``sum(lhs) - sum(rhs)`` over all pairs and its scale is
``1 + max |summand|``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from . import derived
from .derived import BCoefficients, NotApplicableError
from .manifolds import BackendError, structure_h, DarbouxModel
from .pointwise import Point
from .semisym import (
    curvature_endo,
    derive_tensor,
    literal_second_derivative_xi,
    tensorial_second_derivative_xi,
)
from .tensor import Tensor, contract, max_norm

MUST_HOLD = "must-hold"
CLAIM = "paper-claim"
DIAGNOSTIC = "diagnostic"

HORIZONTAL = "horizontal"
ARBITRARY = "arbitrary"
MIXED = "mixed-with-xi"

# backend requirements, in increasing strictness
ANY = "any"
NABLA = "nabla"  # nabla R: chart backend, or the space form's closed form
CHART = "chart"  # coordinate derivatives of the structure (d eta, nabla phi, nabla xi, h)
CHART2 = "chart2"  # second covariant derivative from order-4 jets

TOLERANCE_CLASSES = {"default": None, "jet4": 1e-7}

PRESETS = ("concircular", "conformal", "conharmonic", "quasi-conformal", "custom")


@dataclass(frozen=True)
class IdentityCheck:
    id: str
    eq: str
    formula: str
    input_class: str
    expectation: str
    evaluator: Callable
    vectors: str = ""
    requires: str = ANY
    min_dim: int = 3
    tol_class: str = "default"
    preset: Optional[str] = None
    plumbing: bool = False


REGISTRY: dict[str, IdentityCheck] = {}


def _register(id, eq, formula, cls, expectation, vectors="", requires=ANY, **kw):
    def deco(fn):
        if id in REGISTRY:
            raise ValueError(f"duplicate check id {id}")
        REGISTRY[id] = IdentityCheck(id, eq, formula, cls, expectation, fn, vectors, requires, **kw)
        return fn

    return deco


def _sum(side):
    if isinstance(side, (list, tuple)):
        total = 0.0
        for t in side:
            total = total + np.asarray(t, dtype=float)
        return np.asarray(total, dtype=float), [np.asarray(t, dtype=float) for t in side]
    arr = np.asarray(side, dtype=float)
    return arr, [arr]


def residual(pairs) -> tuple[float, float]:
    """(max abs residual, scale) for a list of (lhs, rhs) pairs."""
    worst, biggest = 0.0, 0.0
    for lhs, rhs in pairs:
        l, lt = _sum(lhs)
        r, rt = _sum(rhs)
        worst = max(worst, max_norm(l - r))
        for t in lt + rt:
            biggest = max(biggest, max_norm(t))
    return worst, 1.0 + biggest


# ---------------------------------------------------------------------------
# Structure equations and Sasakian identities, (2.1)-(2.12)
# ---------------------------------------------------------------------------


@_register("AX-2.1a", "(2.1)", "phi^2 X = -X + eta(X) xi", ARBITRARY, MUST_HOLD, "X")
def _(p: Point, X):
    return [(p.phi2(X), [-X, p.eta(X) * p.xi])]


@_register("AX-2.1b", "(2.1)", "eta(X) = g(X, xi)", ARBITRARY, MUST_HOLD, "X")
def _(p, X):
    return [(p.eta(X), p.g(X, p.xi))]


@_register("AX-2.1c", "(2.1)", "d eta(X, Y) = g(X, phi Y)", ARBITRARY, MUST_HOLD, "XY", requires=CHART)
def _(p, X, Y):
    return [(float(X @ p.geom.d_eta.data @ Y), p.g(X, p.phi(Y)))]


@_register("AX-2.2", "(2.2)", "phi xi = 0, eta(phi X) = 0, g(phi X, Y) = -g(X, phi Y)",
           ARBITRARY, MUST_HOLD, "XY")
def _(p, X, Y):
    return [
        (p.phi(p.xi), 0.0),
        (p.eta(p.phi(X)), 0.0),
        (p.g(p.phi(X), Y), -p.g(X, p.phi(Y))),
    ]


@_register("AX-2.3", "(2.3)", "g(phi X, phi Y) = g(X, Y) - eta(X) eta(Y)", ARBITRARY, MUST_HOLD, "XY")
def _(p, X, Y):
    return [(p.g(p.phi(X), p.phi(Y)), [p.g(X, Y), -p.eta(X) * p.eta(Y)])]


@_register("SAS-2.4", "(2.4)", "R(X,Y) xi = eta(Y) X - eta(X) Y", ARBITRARY, MUST_HOLD, "XY")
def _(p, X, Y):
    return [(p.R(X, Y, p.xi), [p.eta(Y) * X, -p.eta(X) * Y])]


@_register("SAS-2.5", "(2.5)",
           "R(xi,X)Y = (nabla_X phi)Y = g(X,Y) xi - eta(Y) X = -R(X,xi)Y (nabla part on charts)",
           ARBITRARY, MUST_HOLD, "XY")
def _(p, X, Y):
    rhs = [p.g(X, Y) * p.xi, -p.eta(Y) * X]
    pairs = [(p.R(p.xi, X, Y), rhs), (-p.R(X, p.xi, Y), rhs)]
    if p.geom.nabla_phi is not None:
        pairs.append((np.einsum("cwb,w,b->c", p.geom.nabla_phi.data, X, Y), rhs))
    return pairs


@_register("SAS-2.6", "(2.6)", "nabla_X xi = -phi X, (nabla_X eta)(Y) = g(X, phi Y)",
           ARBITRARY, MUST_HOLD, "XY", requires=CHART)
def _(p, X, Y):
    return [
        (p.geom.nabla_xi.data @ X, -p.phi(X)),
        (float(X @ p.geom.nabla_eta.data @ Y), p.g(X, p.phi(Y))),
    ]


@_register("SAS-2.7", "(2.7)", "eta(R(X,Y)Z) = g(Y,Z) eta(X) - g(X,Z) eta(Y)", ARBITRARY, MUST_HOLD, "XYZ")
def _(p, X, Y, Z):
    return [(p.eta(p.R(X, Y, Z)), [p.g(Y, Z) * p.eta(X), -p.g(X, Z) * p.eta(Y)])]


@_register("SAS-2.8", "(2.8)", "(nabla_W R)(X,Y) xi = g(W, phi Y) X - g(W, phi X) Y + R(X,Y) phi W",
           ARBITRARY, MUST_HOLD, "WXY", requires=NABLA)
def _(p, W, X, Y):
    return [(p.dR(W, X, Y, p.xi),
             [p.g(W, p.phi(Y)) * X, -p.g(W, p.phi(X)) * Y, p.R(X, Y, p.phi(W))])]


@_register("SAS-2.9", "(2.9)", "(nabla_W R)(X,xi)Z = g(X,Z) phi W - g(Z, phi W) X + R(X, phi W) Z",
           ARBITRARY, MUST_HOLD, "WXZ", requires=NABLA)
def _(p, W, X, Z):
    return [(p.dR(W, X, p.xi, Z),
             [p.g(X, Z) * p.phi(W), -p.g(Z, p.phi(W)) * X, p.R(X, p.phi(W), Z)])]


@_register("SAS-2.10", "(2.10)", "S(X, xi) = (n-1) eta(X), S(xi, xi) = n-1", ARBITRARY, MUST_HOLD, "X")
def _(p, X):
    n = p.n
    return [(p.S(X, p.xi), (n - 1) * p.eta(X)), (p.S(p.xi, p.xi), float(n - 1))]


@_register("SAS-2.11", "(2.11)",
           "R(X,Y) phi W = g(W,phi X)Y - g(W,Y) phi X - g(W, phi Y) X + g(W,X) phi Y + phi R(X,Y) W",
           ARBITRARY, MUST_HOLD, "XYW")
def _(p, X, Y, W):
    return [(p.R(X, Y, p.phi(W)), [
        p.g(W, p.phi(X)) * Y, -p.g(W, Y) * p.phi(X), -p.g(W, p.phi(Y)) * X,
        p.g(W, X) * p.phi(Y), p.phi(p.R(X, Y, W)),
    ])]


@_register("SAS-2.12", "(2.12)", "(nabla_W R)(X,Y) xi = g(W,X) phi Y - g(W,Y) phi X + phi R(X,Y) W",
           ARBITRARY, MUST_HOLD, "WXY", requires=NABLA)
def _(p, W, X, Y):
    return [(p.dR(W, X, Y, p.xi),
             [p.g(W, X) * p.phi(Y), -p.g(W, Y) * p.phi(X), p.phi(p.R(X, Y, W))])]


# ---------------------------------------------------------------------------
# engine self-checks (plumbing)
# ---------------------------------------------------------------------------


@_register("ENG-BIANCHI1", "-", "R(X,Y)Z + R(Y,Z)X + R(Z,X)Y = 0", ARBITRARY, MUST_HOLD, "XYZ", plumbing=True)
def _(p, X, Y, Z):
    return [([p.R(X, Y, Z), p.R(Y, Z, X), p.R(Z, X, Y)], 0.0)]


@_register("ENG-BIANCHI2", "-", "(nabla_W R)(X,Y)Z + (nabla_X R)(Y,W)Z + (nabla_Y R)(W,X)Z = 0",
           ARBITRARY, MUST_HOLD, "WXYZ", requires=NABLA, plumbing=True)
def _(p, W, X, Y, Z):
    return [([p.dR(W, X, Y, Z), p.dR(X, Y, W, Z), p.dR(Y, W, X, Z)], 0.0)]


@_register("ENG-SYMMETRY", "-", "R(X,Y,Z,W) = -R(Y,X,Z,W) = -R(X,Y,W,Z) = R(Z,W,X,Y); S symmetric",
           ARBITRARY, MUST_HOLD, "XYZW", plumbing=True)
def _(p, X, Y, Z, W):
    r = p.Rs(X, Y, Z, W)
    return [(r, -p.Rs(Y, X, Z, W)), (r, -p.Rs(X, Y, W, Z)), (r, p.Rs(Z, W, X, Y)), (p.S(X, Y), p.S(Y, X))]


@_register("ENG-METRIC", "-", "nabla g = 0", ARBITRARY, MUST_HOLD, "", requires=CHART, plumbing=True)
def _(p):
    return [(p.geom.nabla_g.data, 0.0)]


@_register("ENG-KILLING", "-", "h = (1/2) Lie_xi phi = 0 and h is g-symmetric", ARBITRARY, MUST_HOLD, "",
           requires=CHART, plumbing=True)
def _(p):
    geom = p.geom
    if geom.model != "darboux":
        raise BackendError("h is computed from chart derivatives")
    h = structure_h(DarbouxModel((geom.n - 1) // 2), geom.point).data
    hl = geom.g.data @ h
    return [(hl, hl.T), (h, 0.0)]


@_register("ENG-SKEW", "-", "g(R(U,V)Z, W) = -g(Z, R(U,V)W)", ARBITRARY, MUST_HOLD, "UVZW", plumbing=True)
def _(p, U, V, Z, W):
    A = curvature_endo(p.geom, U, V).data
    return [(p.g(A @ Z, W), -p.g(Z, A @ W))]


@_register("ENG-DERIV-G", "-", "(R(U,V)·g) = 0", ARBITRARY, MUST_HOLD, "UV", plumbing=True)
def _(p, U, V):
    return [(derive_tensor(p.geom, U, V, p.geom.g).data, 0.0)]


@_register("ENG-CONTRACT", "-", "contract(R(U,V)·T) = R(U,V)·contract(T) for T in {R, R_flat, S}",
           ARBITRARY, MUST_HOLD, "UV", plumbing=True)
def _(p, U, V):
    geom = p.geom
    out = []
    for T, slots in ((geom.R, (0, 0)), (geom.R, (0, 1))):
        lhs = contract(derive_tensor(geom, U, V, T), *slots)
        rhs = derive_tensor(geom, U, V, contract(T, *slots))
        out.append((lhs.data, rhs.data))
    # R_flat and S have no upper slot: raise, contract with g^-1 via S = g^{ab} R_{a..b}
    Rf = geom.R_flat
    lhs = np.einsum("ab,ayzb->yz", geom.g_inv.data, derive_tensor(geom, U, V, Rf).data)
    rhs = derive_tensor(geom, U, V, Tensor(np.einsum("ab,ayzb->yz", geom.g_inv.data, Rf.data), 0, 2)).data
    out.append((lhs, rhs))
    trS = float(np.einsum("ab,ab->", geom.g_inv.data, derive_tensor(geom, U, V, geom.S).data))
    out.append((trS, 0.0))
    return out


@_register("ENG-RICCI-ID", "-", "nabla^2_{U,V} R - nabla^2_{V,U} R = R(U,V)·R", ARBITRARY, MUST_HOLD, "UV",
           requires=CHART2, tol_class="jet4", plumbing=True)
def _(p, U, V):
    comm = np.einsum("auvxyz,u,v->axyz", p.geom.commutator.data, U, V)
    return [(comm, derive_tensor(p.geom, U, V, p.geom.R).data)]


# ---------------------------------------------------------------------------
# phi-semisymmetry of R, (3.5)-(3.18)
# ---------------------------------------------------------------------------


@_register("DEF-3.5", "(3.5)", "phi^2[(R(U,V)·R)(X,Y)Z] = 0", HORIZONTAL, CLAIM, "UVXYZ")
def _(p, U, V, X, Y, Z):
    return [(p.phi2(p.RR(U, V, X, Y, Z)), 0.0)]


@_register("PRF-3.6", "(3.6)", "phi^2[(R(U,V)·R)(X,Y) xi] = 0", HORIZONTAL, DIAGNOSTIC, "UVXY")
def _(p, U, V, X, Y):
    return [(p.phi2(p.RR(U, V, X, Y, p.xi)), 0.0)]


@_register("PRF-3.6-3.10", "(3.6)->(3.10)", "eta((R(U,V)·R)(X,Y) xi) = 0", HORIZONTAL, DIAGNOSTIC, "UVXY")
def _(p, U, V, X, Y):
    return [(p.eta(p.RR(U, V, X, Y, p.xi)), 0.0)]


def _literal(p, U, V, X, Y):
    return literal_second_derivative_xi(p.geom, U, V, X, Y)


def _rhs_39(p, U, V, X, Y):
    bracket = p.g(Y, U) * p.g(X, V) - p.g(X, U) * p.g(Y, V) - p.Rs(X, Y, U, V)
    return [2.0 * bracket * p.xi, p.phi(p.dR(U, X, Y, V)), -p.phi(p.dR(V, X, Y, U))]


@_register("PRF-3.7", "(3.7)",
           "(nabla_U nabla_V R)(X,Y) xi = {g(Y,U)g(X,V) - g(X,U)g(Y,V) - R(X,Y,U,V)} xi + phi((nabla_U R)(X,Y)V)",
           HORIZONTAL, DIAGNOSTIC, "UVXY", requires=CHART2, tol_class="jet4")
def _(p, U, V, X, Y):
    return [(tensorial_second_derivative_xi(p.geom, U, V, X, Y), _literal(p, U, V, X, Y))]


@_register("PRF-3.7-TERM", "(3.7)",
           "tensorial - literal (3.7) = (nabla_V R)(X,Y) phi U", HORIZONTAL, MUST_HOLD, "UVXY",
           requires=CHART2, tol_class="jet4")
def _(p, U, V, X, Y):
    tens = tensorial_second_derivative_xi(p.geom, U, V, X, Y)
    lit = _literal(p, U, V, X, Y)
    return [([tens, -lit], p.dR(V, X, Y, p.phi(U)))]


@_register("PRF-3.8", "(3.8)",
           "(nabla_V nabla_U R)(X,Y) xi = {g(Y,V)g(X,U) - g(X,V)g(Y,U) - R(X,Y,V,U)} xi + phi((nabla_V R)(X,Y)U)",
           HORIZONTAL, DIAGNOSTIC, "UVXY", requires=CHART2, tol_class="jet4")
def _(p, U, V, X, Y):
    return [(tensorial_second_derivative_xi(p.geom, V, U, X, Y), _literal(p, V, U, X, Y))]


@_register("PRF-3.9", "(3.9)",
           "(R(U,V)·R)(X,Y) xi = 2{g(Y,U)g(X,V) - g(X,U)g(Y,V) - R(X,Y,U,V)} xi"
           " + phi{(nabla_U R)(X,Y)V - (nabla_V R)(X,Y)U}",
           HORIZONTAL, DIAGNOSTIC, "UVXY", requires=NABLA)
def _(p, U, V, X, Y):
    return [(p.RR(U, V, X, Y, p.xi), _rhs_39(p, U, V, X, Y))]


@_register("PRF-3.9-LIT", "(3.9)", "antisymmetrized (3.7) right side = (3.9) right side",
           HORIZONTAL, DIAGNOSTIC, "UVXY", requires=NABLA)
def _(p, U, V, X, Y):
    return [([_literal(p, U, V, X, Y), -_literal(p, V, U, X, Y)], _rhs_39(p, U, V, X, Y))]


@_register("PRF-3.10", "(3.10)", "(R(U,V)·R)(X,Y) xi = 0", HORIZONTAL, DIAGNOSTIC, "UVXY")
def _(p, U, V, X, Y):
    return [(p.RR(U, V, X, Y, p.xi), 0.0)]


@_register("PRF-3.11", "(3.11)",
           "2{g(Y,U)g(X,V) - g(X,U)g(Y,V) - R(X,Y,U,V)} xi + phi{(nabla_U R)(X,Y)V - (nabla_V R)(X,Y)U} = 0",
           HORIZONTAL, DIAGNOSTIC, "UVXY", requires=NABLA)
def _(p, U, V, X, Y):
    return [(_rhs_39(p, U, V, X, Y), 0.0)]


@_register("PRF-3.12", "(3.12)", "(nabla_U R)(X,Y)V - (nabla_V R)(X,Y)U = 0", HORIZONTAL, DIAGNOSTIC, "UVXY",
           requires=NABLA)
def _(p, U, V, X, Y):
    return [([p.dR(U, X, Y, V), -p.dR(V, X, Y, U)], 0.0)]


@_register("CHL-3.13", "(3.13)", "R(X,Y,U,V) = g(Y,U)g(X,V) - g(X,U)g(Y,V)", HORIZONTAL, DIAGNOSTIC, "XYUV")
def _(p, X, Y, U, V):
    return [(p.Rs(X, Y, U, V), [p.g(Y, U) * p.g(X, V), -p.g(X, U) * p.g(Y, V)])]


@_register("PRF-3.14", "(3.14)", "(R(U,V)·R)(X,Y)Z = -g((R(U,V)·R)(X,Y) xi, Z) xi", HORIZONTAL, CLAIM,
           "UVXYZ")
def _(p, U, V, X, Y, Z):
    return [(p.RR(U, V, X, Y, Z), -p.g(p.RR(U, V, X, Y, p.xi), Z) * p.xi)]


@_register("PRF-3.15", "(3.15)",
           "(R(U,V)·R)(X,Y)Z = [(nabla_U R)(X,Y,V,phi Z) - (nabla_V R)(X,Y,U,phi Z)] xi",
           HORIZONTAL, CLAIM, "UVXYZ", requires=NABLA)
def _(p, U, V, X, Y, Z):
    c = p.dRs(U, X, Y, V, p.phi(Z)) - p.dRs(V, X, Y, U, p.phi(Z))
    return [(p.RR(U, V, X, Y, Z), c * p.xi)]


def _rhs_316(p, V, X, Y, Z, sign):
    bracket = p.Rs(X, Y, Z, V) - (p.g(Y, Z) * p.g(X, V) + sign * p.g(X, Z) * p.g(Y, V))
    return [bracket * p.xi, p.phi(p.dR(V, X, Y, Z))]


@_register("PRF-3.16a", "(3.16)",
           "(nabla_V R)(X,Y) phi Z = [R(X,Y,Z,V) - {g(Y,Z)g(X,V) + g(X,Z)g(Y,V)}] xi + phi((nabla_V R)(X,Y)Z)"
           " (plus-sign reading)",
           HORIZONTAL, CLAIM, "VXYZ", requires=NABLA)
def _(p, V, X, Y, Z):
    return [(p.dR(V, X, Y, p.phi(Z)), _rhs_316(p, V, X, Y, Z, +1.0))]


@_register("PRF-3.16b", "(3.16)",
           "(nabla_V R)(X,Y) phi Z = [R(X,Y,Z,V) - {g(Y,Z)g(X,V) - g(X,Z)g(Y,V)}] xi + phi((nabla_V R)(X,Y)Z)"
           " (sign of last product flipped)",
           HORIZONTAL, CLAIM, "VXYZ", requires=NABLA)
def _(p, V, X, Y, Z):
    return [(p.dR(V, X, Y, p.phi(Z)), _rhs_316(p, V, X, Y, Z, -1.0))]


@_register("PRF-3.17", "(3.17)", "g((nabla_V R)(X,Y) phi Z, U) = -g((nabla_V R)(X,Y)Z, phi U)",
           HORIZONTAL, CLAIM, "VXYZU", requires=NABLA)
def _(p, V, X, Y, Z, U):
    return [(p.g(p.dR(V, X, Y, p.phi(Z)), U), -p.g(p.dR(V, X, Y, Z), p.phi(U)))]


@_register("CHR-3.18", "(3.18)",
           "(R(U,V)·R)(X,Y)Z = [(nabla_U R)(X,Y,Z,phi V) - (nabla_V R)(X,Y,Z,phi U)] xi",
           HORIZONTAL, CLAIM, "UVXYZ", requires=NABLA)
def _(p, U, V, X, Y, Z):
    return [(p.RR(U, V, X, Y, Z), p.nabla_term(U, V, X, Y, Z) * p.xi)]


# ---------------------------------------------------------------------------
# Curvature-derivative relations, (4.1)-(4.8)
# ---------------------------------------------------------------------------


@_register("L-4.1", "(4.1)", "phi^2[(nabla_xi R)(X,Y)Z] = 0", HORIZONTAL, MUST_HOLD, "XYZ", requires=NABLA)
def _(p, X, Y, Z):
    return [(p.phi2(p.dR(p.xi, X, Y, Z)), 0.0)]


@_register("L-4.2", "(4.2)",
           "(nabla_{phi^2 V} R)(phi^2 X, phi^2 Y) phi^2 Z = (nabla_V R)(X,Y)Z"
           " + eta(X){g(Y,Z) phi V - g(phi V,Z) Y + R(Y, phi V)Z}"
           " - eta(Y){g(X,Z) phi V - g(phi V,Z) X + R(X, phi V)Z}"
           " - eta(Z){g(X,V) phi Y - g(Y,V) phi X + phi R(X,Y)V}",
           ARBITRARY, MUST_HOLD, "VXYZ", requires=NABLA)
def _(p, V, X, Y, Z):
    p2, ph, g, e = p.phi2, p.phi, p.g, p.eta
    lhs = p.dR(p2(V), p2(X), p2(Y), p2(Z))
    rhs = [
        p.dR(V, X, Y, Z),
        e(X) * (g(Y, Z) * ph(V) - g(ph(V), Z) * Y + p.R(Y, ph(V), Z)),
        -e(Y) * (g(X, Z) * ph(V) - g(ph(V), Z) * X + p.R(X, ph(V), Z)),
        -e(Z) * (g(X, V) * ph(Y) - g(Y, V) * ph(X) + ph(p.R(X, Y, V))),
    ]
    return [(lhs, rhs)]


def _rhs_43(p, U, V, X, Y, Z):
    g, e, ph = p.g, p.eta, p.phi
    c = (
        -p.nabla_term(U, V, X, Y, Z)
        + e(X) * (g(Y, ph(V)) * g(ph(U), Z) - g(Y, ph(U)) * g(ph(V), Z) - p.Rs(Y, Z, ph(U), ph(V)))
        - e(Y) * (g(X, ph(V)) * g(ph(U), Z) - g(X, ph(U)) * g(ph(V), Z) - p.Rs(X, Z, ph(U), ph(V)))
        - 2 * e(Z) * (g(X, V) * g(U, Y) - g(X, U) * g(V, Y) - p.Rs(X, Y, U, V))
    )
    return c * p.xi


def _rhs_44(p, U, V, X, Y, Z):
    e = p.eta
    c = (
        -p.nabla_term(U, V, X, Y, Z)
        - e(X) * p.Hs(Y, Z, U, V)
        + e(Y) * p.Hs(X, Z, U, V)
        + 2 * e(Z) * p.Hs(X, Y, U, V)
    )
    return c * p.xi


@_register("CHR-4.3", "(4.3)", "(R(phi^2 U, phi^2 V)·R)(phi^2 X, phi^2 Y) phi^2 Z = [ ... ] xi",
           ARBITRARY, CLAIM, "UVXYZ", requires=NABLA)
def _(p, U, V, X, Y, Z):
    return [(p.lhs_phi2_args(U, V, X, Y, Z), _rhs_43(p, U, V, X, Y, Z))]


@_register("CHR-4.4", "(4.4)",
           "(R(phi^2 U, phi^2 V)·R)(phi^2 X, phi^2 Y) phi^2 Z = [(nabla_V R)(X,Y,Z,phi U) - (nabla_U R)(X,Y,Z,phi V)"
           " - eta(X)H(Y,Z,U,V) + eta(Y)H(X,Z,U,V) + 2 eta(Z)H(X,Y,U,V)] xi",
           ARBITRARY, CLAIM, "UVXYZ", requires=NABLA)
def _(p, U, V, X, Y, Z):
    return [(p.lhs_phi2_args(U, V, X, Y, Z), _rhs_44(p, U, V, X, Y, Z))]


@_register("ALG-4.4", "(4.3)->(4.4)", "right side of (4.3) = right side of (4.4)", ARBITRARY, CLAIM,
           "UVXYZ", requires=NABLA)
def _(p, U, V, X, Y, Z):
    return [(_rhs_43(p, U, V, X, Y, Z), _rhs_44(p, U, V, X, Y, Z))]


@_register("TEN-4.5", "(4.5)", "H(X,Y)Z = R(X,Y)Z - g(Y,Z)X + g(X,Z)Y; H(X,Y) xi = 0", ARBITRARY, MUST_HOLD,
           "XYZ")
def _(p, X, Y, Z):
    return [
        (p.H(X, Y, Z), [p.R(X, Y, Z), -p.g(Y, Z) * X, p.g(X, Z) * Y]),
        (p.H(X, Y, p.xi), 0.0),
    ]


@_register("ALG-4.6", "(4.6)",
           "(R(U',V')·R)(X',Y')Z' = R(U',V')R(X',Y')Z' - R(R(U',V')X',Y')Z' - R(X',R(U',V')Y')Z'"
           " - R(X',Y')R(U',V')Z' with primes = phi^2",
           ARBITRARY, MUST_HOLD, "UVXYZ")
def _(p, U, V, X, Y, Z):
    u, v, x, y, z = (p.phi2(a) for a in (U, V, X, Y, Z))
    R = p.R
    return [(p.RR(u, v, x, y, z),
             [R(u, v, R(x, y, z)), -R(R(u, v, x), y, z), -R(x, R(u, v, y), z), -R(x, y, R(u, v, z))])]


def _eta_h_terms(p, a, X, Y, Z):
    e = p.eta
    return [e(X) * p.H(a, Y, Z), e(Y) * p.H(X, a, Z), e(Z) * p.H(X, Y, a)]


@_register("ALG-4.7", "(4.7)",
           "(R(phi^2 U, phi^2 V)·R)(phi^2 X, phi^2 Y) phi^2 Z = -(R(U,V)·R)(X,Y)Z"
           " + eta(U)[H(X,Y,Z,V) xi + eta(X)H(V,Y)Z + eta(Y)H(X,V)Z + eta(Z)H(X,Y)V] - eta(V)[same with U]",
           ARBITRARY, MUST_HOLD, "UVXYZ")
def _(p, U, V, X, Y, Z):
    e = p.eta
    rhs = [-p.RR(U, V, X, Y, Z)]
    rhs.append(e(U) * p.Hs(X, Y, Z, V) * p.xi)
    rhs += [e(U) * t for t in _eta_h_terms(p, V, X, Y, Z)]
    rhs.append(-e(V) * p.Hs(X, Y, Z, U) * p.xi)
    rhs += [-e(V) * t for t in _eta_h_terms(p, U, X, Y, Z)]
    return [(p.lhs_phi2_args(U, V, X, Y, Z), rhs)]


def _rhs_48(p, U, V, X, Y, Z):
    e, Hs = p.eta, p.Hs
    c = (
        p.nabla_term(U, V, X, Y, Z)
        + e(X) * Hs(Y, Z, U, V) - e(Y) * Hs(X, Z, U, V) - 2 * e(Z) * Hs(X, Y, U, V)
        + e(U) * Hs(X, Y, Z, V) - e(V) * Hs(X, Y, Z, U)
    )
    out = [c * p.xi]
    out += [e(U) * t for t in _eta_h_terms(p, V, X, Y, Z)]
    out += [-e(V) * t for t in _eta_h_terms(p, U, X, Y, Z)]
    return out


@_register("CHR-4.8", "(4.8)", "(R(U,V)·R)(X,Y)Z = [nabla-term + eta-H terms] xi + eta(U)[...] - eta(V)[...]",
           ARBITRARY, CLAIM, "UVXYZ", requires=NABLA)
def _(p, U, V, X, Y, Z):
    return [(p.RR(U, V, X, Y, Z), _rhs_48(p, U, V, X, Y, Z))]


# ---------------------------------------------------------------------------
# Ricci, projective and conformal chains, (5.1)-(5.19)
# ---------------------------------------------------------------------------


@_register("DEF-5.1", "(5.1)", "phi^2[(R(U,V)·Q)(X)] = 0", HORIZONTAL, CLAIM, "UVX")
def _(p, U, V, X):
    return [(p.phi2(p.RQ(U, V, X)), 0.0)]


@_register("RQ-ZERO", "(5.1)", "(R(U,V)·Q)(X) = 0", HORIZONTAL, CLAIM, "UVX")
def _(p, U, V, X):
    return [(p.RQ(U, V, X), 0.0)]


@_register("RIC-5.2", "(5.2)", "(R(U,V)·Q)(X) = R(U,V)QX - QR(U,V)X", HORIZONTAL, MUST_HOLD, "UVX")
def _(p, U, V, X):
    return [(p.RQ(U, V, X), [p.R(U, V, p.Q(X)), -p.Q(p.R(U, V, X))])]


@_register("RIC-5.3", "(5.3)", "phi^2[(R(U,V)·Q)(X)] = -(R(U,V)·Q)(X)", HORIZONTAL, MUST_HOLD, "UVX")
def _(p, U, V, X):
    return [(p.phi2(p.RQ(U, V, X)), -p.RQ(U, V, X))]


def _rhs_56(p, U, V, X):
    e, E = p.eta, p.E
    return [
        (E(X, V) * e(U) - E(X, U) * e(V)) * p.xi,
        -e(X) * (e(V) * p.Ecal(U) - e(U) * p.Ecal(V)),
    ]


@_register("ALG-5.4", "(5.4)",
           "(R(phi^2 U, phi^2 V)·Q)(phi^2 X) = -(R(U,V)·Q)(X) + {E(X,V)eta(U) - E(X,U)eta(V)} xi"
           " - eta(X){eta(V) EU - eta(U) EV}",
           ARBITRARY, CLAIM, "UVX")
def _(p, U, V, X):
    p2 = p.phi2
    return [(p.RQ(p2(U), p2(V), p2(X)), [-p.RQ(U, V, X)] + _rhs_56(p, U, V, X))]


@_register("TEN-5.5", "(5.5)", "E(X,Y) = S(X,Y) - (n-1) g(X,Y), g(EX, Y) = E(X,Y), E(X, xi) = 0",
           ARBITRARY, MUST_HOLD, "XY")
def _(p, X, Y):
    return [
        (p.E(X, Y), [p.S(X, Y), -(p.n - 1) * p.g(X, Y)]),
        (p.g(p.Ecal(X), Y), p.E(X, Y)),
        (p.E(X, p.xi), 0.0),
    ]


@_register("CHR-5.6", "(5.6)",
           "(R(U,V)·Q)(X) = {E(X,V)eta(U) - E(X,U)eta(V)} xi - eta(X){eta(V) EU - eta(U) EV}",
           ARBITRARY, CLAIM, "UVX")
def _(p, U, V, X):
    return [(p.RQ(U, V, X), _rhs_56(p, U, V, X))]


@_register("DEF-5.7P", "(5.7)", "phi^2[(R(U,V)·P)(X,Y)Z] = 0", HORIZONTAL, CLAIM, "UVXYZ")
def _(p, U, V, X, Y, Z):
    return [(p.phi2(p.D13(U, V, "P", X, Y, Z)), 0.0)]


@_register("DEF-5.7C", "(5.7)", "phi^2[(R(U,V)·C)(X,Y)Z] = 0", HORIZONTAL, CLAIM, "UVXYZ", min_dim=4)
def _(p, U, V, X, Y, Z):
    return [(p.phi2(p.D13(U, V, "C", X, Y, Z)), 0.0)]


@_register("TEN-5.8", "(5.8)", "P(X,Y)Z = R(X,Y)Z - [S(Y,Z)X - S(X,Z)Y]/(n-1); trace of P over (a, x) = 0",
           ARBITRARY, MUST_HOLD, "XYZ")
def _(p, X, Y, Z):
    P = p.tensor("P")
    direct = [p.R(X, Y, Z), -(p.S(Y, Z) * X - p.S(X, Z) * Y) / (p.n - 1)]
    return [
        (np.einsum("axyz,x,y,z->a", P.data, X, Y, Z), direct),
        (contract(P, 0, 0).data, 0.0),
    ]


@_register("CNF-5.9", "(5.9)", "C is totally trace-free and matches its defining formula", ARBITRARY, MUST_HOLD,
           "XYZ", min_dim=4)
def _(p, X, Y, Z):
    C = p.tensor("C")
    n = p.n
    direct = [
        p.R(X, Y, Z),
        -(p.S(Y, Z) * X - p.S(X, Z) * Y + p.g(Y, Z) * p.Q(X) - p.g(X, Z) * p.Q(Y)) / (n - 2),
        p.geom.r / ((n - 1) * (n - 2)) * (p.g(Y, Z) * X - p.g(X, Z) * Y),
    ]
    out = [(np.einsum("axyz,x,y,z->a", C.data, X, Y, Z), direct)]
    out += [(contract(C, 0, k).data, 0.0) for k in range(3)]
    return out


@_register("DER-5.10", "(5.10)",
           "(R(U,V)·P)(X,Y)Z = (R(U,V)·R)(X,Y)Z - [(R(U,V)·S)(Y,Z)X - (R(U,V)·S)(X,Z)Y]/(n-1)",
           HORIZONTAL, CLAIM, "UVXYZ")
def _(p, U, V, X, Y, Z):
    rhs = [p.RR(U, V, X, Y, Z)] + [-t / (p.n - 1) for t in p.s_bracket(U, V, X, Y, Z)]
    return [(p.D13(U, V, "P", X, Y, Z), rhs)]


def _nabla_xi_term(p, U, V, X, Y, Z):
    return p.nabla_term(U, V, X, Y, Z) * p.xi


@_register("DER-5.11", "(5.11)",
           "phi^2[(R(U,V)·P)(X,Y)Z] = -(R(U,V)·R)(X,Y)Z + [nabla-term] xi + [(R·S)(Y,Z)X - (R·S)(X,Z)Y]/(n-1)",
           HORIZONTAL, CLAIM, "UVXYZ", requires=NABLA)
def _(p, U, V, X, Y, Z):
    rhs = [-p.RR(U, V, X, Y, Z), _nabla_xi_term(p, U, V, X, Y, Z)]
    rhs += [t / (p.n - 1) for t in p.s_bracket(U, V, X, Y, Z)]
    return [(p.phi2(p.D13(U, V, "P", X, Y, Z)), rhs)]


@_register("CHR-5.12", "(5.12)",
           "(R(U,V)·R)(X,Y)Z = [nabla-term] xi + [(R·S)(Y,Z)X - (R·S)(X,Z)Y]/(n-1)",
           HORIZONTAL, CLAIM, "UVXYZ", requires=NABLA)
def _(p, U, V, X, Y, Z):
    rhs = [_nabla_xi_term(p, U, V, X, Y, Z)] + [t / (p.n - 1) for t in p.s_bracket(U, V, X, Y, Z)]
    return [(p.RR(U, V, X, Y, Z), rhs)]


@_register("CHR-5.13", "(5.13)", "(R(U,V)·S)(Y,W) = 0", HORIZONTAL, CLAIM, "UVYW")
def _(p, U, V, Y, W):
    return [(p.RS(U, V, Y, W), 0.0)]


@_register("CNF-5.14", "(5.14)",
           "(R(U,V)·C)(X,Y)Z = (R(U,V)·R)(X,Y)Z - [(R·S)(Y,Z)X - (R·S)(X,Z)Y + g(Y,Z)(R·Q)X - g(X,Z)(R·Q)Y]/(n-2)",
           HORIZONTAL, CLAIM, "UVXYZ", min_dim=4)
def _(p, U, V, X, Y, Z):
    rhs = [p.RR(U, V, X, Y, Z)] + [-t / (p.n - 2) for t in p.sq_bracket(U, V, X, Y, Z)]
    return [(p.D13(U, V, "C", X, Y, Z), rhs)]


@_register("CNF-5.15", "(5.15)",
           "phi^2[(R(U,V)·C)(X,Y)Z] = -(R(U,V)·R)(X,Y)Z + [nabla-term] xi + [S,Q bracket]/(n-2)",
           HORIZONTAL, CLAIM, "UVXYZ", requires=NABLA, min_dim=4)
def _(p, U, V, X, Y, Z):
    rhs = [-p.RR(U, V, X, Y, Z), _nabla_xi_term(p, U, V, X, Y, Z)]
    rhs += [t / (p.n - 2) for t in p.sq_bracket(U, V, X, Y, Z)]
    return [(p.phi2(p.D13(U, V, "C", X, Y, Z)), rhs)]


@_register("CHR-5.16", "(5.16)", "(R(U,V)·R)(X,Y)Z = [nabla-term] xi + [S,Q bracket]/(n-2)",
           HORIZONTAL, CLAIM, "UVXYZ", requires=NABLA, min_dim=4)
def _(p, U, V, X, Y, Z):
    rhs = [_nabla_xi_term(p, U, V, X, Y, Z)] + [t / (p.n - 2) for t in p.sq_bracket(U, V, X, Y, Z)]
    return [(p.RR(U, V, X, Y, Z), rhs)]


def _brackets_517(p, U, V, X, Y, Z):
    """The two 1/(n-2) brackets shared by (5.17) and (5.18)."""
    e, g, E, xi = p.eta, p.g, p.E, p.xi
    RS = lambda a, b: p.RS(U, V, a, b)  # noqa: E731
    RQ = lambda a: p.RQ(U, V, a)  # noqa: E731
    first = [
        RS(Y, Z) * X, -RS(X, Z) * Y,
        -(RS(Y, Z) * e(X) - RS(X, Z) * e(Y)) * xi,
        -(E(V, Z) * e(U) - E(U, Z) * e(V)) * (e(Y) * X - e(X) * Y),
        (E(Y, U) * X - E(X, U) * Y) * e(Z) * e(V),
        -(E(Y, V) * X - E(X, V) * Y) * e(Z) * e(U),
    ]
    second = [
        g(Y, Z) * RQ(X), -g(X, Z) * RQ(Y),
        -(e(Y) * RQ(X) - e(X) * RQ(Y)) * e(Z),
        (g(Y, Z) * e(X) - g(X, Z) * e(Y)) * (e(V) * p.Ecal(U) - e(U) * p.Ecal(V)),
        -(E(X, V) * e(U) - E(X, U) * e(V)) * g(Y, Z) * xi,
        (E(Y, V) * e(U) - E(Y, U) * e(V)) * g(X, Z) * xi,
    ]
    return first, second


@_register("CHR-5.17", "(5.17)",
           "(R(phi^2 U, phi^2 V)·R)(phi^2 X, phi^2 Y) phi^2 Z = (4.4) right side - [first bracket]/(n-2)"
           " - [second bracket]/(n-2)",
           ARBITRARY, CLAIM, "UVXYZ", requires=NABLA, min_dim=4)
def _(p, U, V, X, Y, Z):
    first, second = _brackets_517(p, U, V, X, Y, Z)
    rhs = [_rhs_44(p, U, V, X, Y, Z)] + [-t / (p.n - 2) for t in first + second]
    return [(p.lhs_phi2_args(U, V, X, Y, Z), rhs)]


@_register("CHR-5.18", "(5.18)",
           "(R(U,V)·R)(X,Y)Z = (4.8) right side + [first bracket]/(n-2) + [second bracket]/(n-2)",
           ARBITRARY, CLAIM, "UVXYZ", requires=NABLA, min_dim=4)
def _(p, U, V, X, Y, Z):
    first, second = _brackets_517(p, U, V, X, Y, Z)
    rhs = _rhs_48(p, U, V, X, Y, Z) + [t / (p.n - 2) for t in first + second]
    return [(p.RR(U, V, X, Y, Z), rhs)]


# ---------------------------------------------------------------------------
# B-tensor family, (5.20)-(5.27)
# ---------------------------------------------------------------------------


@_register("TEN-5.19", "(5.19)",
           "B presets: (1,0,0) gives R; concircular gives R - r/(n(n-1)) (g-terms); conformal and"
           " quasi-conformal(1, -1/(n-2)) give C",
           ARBITRARY, MUST_HOLD, "")
def _(p):
    geom, n = p.geom, p.n
    eye = np.eye(n)
    out = [(derived.b_tensor(geom, BCoefficients(1.0, 0.0, 0.0)).data, geom.R.data)]
    conc = geom.R.data - geom.r / (n * (n - 1)) * derived.kulkarni(geom.g.data, eye)
    out.append((derived.b_tensor(geom, BCoefficients.concircular(n)).data, conc))
    if n > 3:
        C = derived.conformal(geom).data
        out.append((derived.b_tensor(geom, BCoefficients.conformal(n)).data, C))
        out.append((derived.b_tensor(geom, BCoefficients.quasi_conformal(n, 1.0, -1.0 / (n - 2))).data, C))
    return out


def _b_checks():
    """Per-preset B-tensor chain; coefficients are resolved at evaluation time."""

    def reg(base, eq, formula, cls, requires=ANY, vectors="UVXYZ"):
        def deco(fn):
            for kind in PRESETS:
                _register(f"{base}@{kind}", eq, formula, cls, CLAIM, vectors, requires, preset=kind)(fn)
            return fn

        return deco

    @reg("DEF-5.20", "(5.20)", "phi^2[(R(U,V)·B)(X,Y)Z] = 0", HORIZONTAL)
    def _(p, U, V, X, Y, Z, b):
        return [(p.phi2(p.D13(U, V, "B", X, Y, Z, coeffs=b)), 0.0)]

    @reg("B-5.21", "(5.21)", "(R(U,V)·B)(X,Y)Z = b0 (R(U,V)·R)(X,Y)Z + b1 [S,Q bracket]", HORIZONTAL)
    def _(p, U, V, X, Y, Z, b):
        rhs = [b.b0 * p.RR(U, V, X, Y, Z)] + [b.b1 * t for t in p.sq_bracket(U, V, X, Y, Z)]
        return [(p.D13(U, V, "B", X, Y, Z, coeffs=b), rhs)]

    @reg("B-5.22", "(5.22)",
         "phi^2[(R(U,V)·B)(X,Y)Z] = -b0[(R(U,V)·R)(X,Y)Z - (nabla-term) xi] - b1 [S,Q bracket]",
         HORIZONTAL, NABLA)
    def _(p, U, V, X, Y, Z, b):
        rhs = [-b.b0 * p.RR(U, V, X, Y, Z), b.b0 * _nabla_xi_term(p, U, V, X, Y, Z)]
        rhs += [-b.b1 * t for t in p.sq_bracket(U, V, X, Y, Z)]
        return [(p.phi2(p.D13(U, V, "B", X, Y, Z, coeffs=b)), rhs)]

    @reg("CHR-5.23", "(5.23)", "(R(U,V)·R)(X,Y)Z = (nabla-term) xi - (b1/b0) [S,Q bracket]  (b0 != 0)",
         HORIZONTAL, NABLA)
    def _(p, U, V, X, Y, Z, b):
        if b.b0 == 0.0:
            raise NotApplicableError("(5.23) needs b0 != 0")
        rhs = [_nabla_xi_term(p, U, V, X, Y, Z)] + [-(b.b1 / b.b0) * t for t in p.sq_bracket(U, V, X, Y, Z)]
        return [(p.RR(U, V, X, Y, Z), rhs)]

    @reg("COND-5.24", "(5.24)", "{b0 + (n-2) b1} (R(U,V)·S)(Y,Z) = 0", HORIZONTAL, vectors="UVYZ")
    def _(p, U, V, Y, Z, b):
        return [((b.b0 + (p.n - 2) * b.b1) * p.RS(U, V, Y, Z), 0.0)]

    @reg("COND-5.25", "(5.25)", "(R(U,V)·S)(Y,Z) = 0  (case b0 + (n-2) b1 != 0)", HORIZONTAL, vectors="UVYZ")
    def _(p, U, V, Y, Z, b):
        if b.degenerate(p.n):
            raise NotApplicableError("(5.25) is the b0 + (n-2) b1 != 0 branch")
        return [(p.RS(U, V, Y, Z), 0.0)]

    @reg("CHR-5.26", "(5.26)",
         "phi^2[(R(U,V)·B)(X,Y)Z] = -b0[(R·R)(X,Y)Z - (nabla-term) xi] + b0/(n-2) [S,Q bracket]"
         "  (case b0 + (n-2) b1 = 0)",
         HORIZONTAL, NABLA)
    def _(p, U, V, X, Y, Z, b):
        if not b.degenerate(p.n):
            raise NotApplicableError("(5.26) is the b0 + (n-2) b1 = 0 branch")
        rhs = [-b.b0 * p.RR(U, V, X, Y, Z), b.b0 * _nabla_xi_term(p, U, V, X, Y, Z)]
        rhs += [b.b0 / (p.n - 2) * t for t in p.sq_bracket(U, V, X, Y, Z)]
        return [(p.phi2(p.D13(U, V, "B", X, Y, Z, coeffs=b)), rhs)]

    @reg("CHR-5.27", "(5.27)",
         "(R(U,V)·R)(X,Y)Z = (nabla-term) xi + [S,Q bracket]/(n-2)  (case b0 + (n-2) b1 = 0)",
         HORIZONTAL, NABLA)
    def _(p, U, V, X, Y, Z, b):
        if not b.degenerate(p.n):
            raise NotApplicableError("(5.27) is the b0 + (n-2) b1 = 0 branch")
        rhs = [_nabla_xi_term(p, U, V, X, Y, Z)] + [t / (p.n - 2) for t in p.sq_bracket(U, V, X, Y, Z)]
        return [(p.RR(U, V, X, Y, Z), rhs)]


_b_checks()


# equations with no computable content here; listed so coverage is explicit
OUT_OF_SCOPE = {
    "(3.1)": "out-of-scope: fibration (Kaehlerian base connection lift)",
    "(3.2)": "out-of-scope: fibration (base curvature lift)",
    "(3.3)": "out-of-scope: fibration (base covariant derivative lift)",
    "(3.4)": "out-of-scope: fibration (base semisymmetry lift)",
}


def equation_labels() -> list[str]:
    """Every numbered equation (2.1)..(5.27)."""
    counts = {2: 12, 3: 18, 4: 8, 5: 27}
    return [f"({s}.{k})" for s, k_max in counts.items() for k in range(1, k_max + 1)]


def coverage() -> dict[str, list[str]]:
    """Map each equation label to the check ids that evaluate it."""
    out: dict[str, list[str]] = {lab: [] for lab in equation_labels()}
    for chk in REGISTRY.values():
        for lab in chk.eq.replace("->", " ").split():
            if lab in out:
                out[lab].append(chk.id)
    return out


def uncovered() -> list[str]:
    return [lab for lab, ids in coverage().items() if not ids and lab not in OUT_OF_SCOPE]
