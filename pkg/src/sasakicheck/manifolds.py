"""Built-in Sasakian models and the pointwise geometric state they produce.

Two backends:

* ``chart``: a metric (and optionally a contact form and Reeb field) given in
  coordinates, differentiated with truncated Taylor jets. The Darboux
  structure on R^(2m+1) is the built-in instance.
* ``algebraic``: the Sasakian space form M(c) in an adapted orthonormal
  frame, with curvature from the closed-form expression and its covariant
  derivative from the Leibniz rule applied to the structure tensors.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import jets
from .derived import ricci_from_curvature
from .jets import Jet
from .tensor import Tensor, inverse_metric, lower_index

# d alpha(X, Y) = FACTOR * {X alpha(Y) - Y alpha(X) - alpha([X, Y])}; pinned by the axiom suite
EXTERIOR_DERIVATIVE_FACTOR = 0.5


class BackendError(TypeError):
    """Operation not supported by the geometry's backend."""


# ---------------------------------------------------------------------------
# charts
# ---------------------------------------------------------------------------


class MetricChart:
    """A Riemannian metric on a coordinate domain.

    Subclasses implement :meth:`metric`, mapping the coordinate jets
    (a jet array of shape ``(n,)``) to the metric jet of shape ``(n, n)``.
    """

    name = "metric"
    n: int

    def metric(self, x: Jet) -> Jet:
        raise NotImplementedError

    @property
    def has_contact_structure(self) -> bool:
        return False


class EuclideanChart(MetricChart):
    name = "euclidean"

    def __init__(self, n: int):
        self.n = n

    def metric(self, x: Jet) -> Jet:
        return x.space.constant(np.eye(self.n))


class PolynomialChart(MetricChart):
    """g = I + eps * (A(x) + A(x)^T) with A quadratic in x; positive-definite near 0.

    Generic (non-symmetric-space) test metric for engine self-checks.
    """

    name = "polynomial"

    def __init__(self, n: int, seed: int = 0, eps: float = 0.1):
        rng = np.random.default_rng(seed)
        self.n = n
        self.eps = eps
        self.lin = rng.uniform(-1, 1, size=(n, n, n))
        self.quad = rng.uniform(-1, 1, size=(n, n, n, n))

    def metric(self, x: Jet) -> Jet:
        n = self.n
        lin = jets.const_einsum("abk,k->ab", self.lin, x)
        xx = jets.einsum("k,l->kl", x, x)
        quad = jets.Jet(np.einsum("abkl,klZ->abZ", self.quad, xx.data), x.space)
        a = lin + quad * 0.5
        return x.space.constant(np.eye(n)) + (a + a.transpose(1, 0)) * self.eps


class ContactMetricChart(MetricChart):
    """Metric chart that also carries a contact form eta and its Reeb field xi."""

    def eta(self, x: Jet) -> Jet:
        raise NotImplementedError

    def xi(self, x: Jet) -> Jet:
        raise NotImplementedError

    @property
    def has_contact_structure(self) -> bool:
        return True


class DarbouxModel(ContactMetricChart):
    """R^(2m+1) with coordinates (x^1..x^m, y^1..y^m, z),
    eta = (dz - sum y^i dx^i)/2, xi = 2 d/dz, g = eta (x) eta + (1/4) sum (dx^i)^2 + (dy^i)^2.

    This is the Sasakian space form of constant phi-sectional curvature -3.
    """

    name = "darboux"

    def __init__(self, m: int):
        if m < 1:
            raise ValueError(f"m must be >= 1, got {m}")
        self.m = m
        self.n = 2 * m + 1

    def eta(self, x: Jet) -> Jet:
        m = self.m
        comps = [x[m + i] * -0.5 for i in range(m)]
        comps += [x.space.constant(0.0) for _ in range(m)]
        comps.append(x.space.constant(0.5))
        return jets.stack(comps)

    def xi(self, x: Jet) -> Jet:
        v = np.zeros(self.n)
        v[-1] = 2.0
        return x.space.constant(v)

    def metric(self, x: Jet) -> Jet:
        eta = self.eta(x)
        flat = np.eye(self.n) * 0.25
        flat[-1, -1] = 0.0
        return jets.einsum("a,b->ab", eta, eta) + x.space.constant(flat)


# ---------------------------------------------------------------------------
# pointwise geometry
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class GeometryAtPoint:
    """Complete pointwise geometric state.

    Array layouts: ``R[a,x,y,z] = (R(e_x,e_y)e_z)^a``;
    ``nabla_R[a,w,x,y,z] = ((nabla_w R)(e_x,e_y)e_z)^a``;
    ``nabla2_R[a,u,v,x,y,z]`` is the second covariant derivative with u taken last;
    ``commutator = nabla2_R - (u <-> v)``;
    ``nabla_phi[c,w,b] = ((nabla_w phi) e_b)^c``, ``nabla_xi[c,w] = (nabla_w xi)^c``,
    ``nabla_eta[w,b] = (nabla_w eta)(e_b)``, ``nabla_g[w,a,b]``.
    """

    n: int
    backend: str
    g: Tensor
    g_inv: Tensor
    R: Tensor
    S: Tensor
    Q: Tensor
    r: float
    R_flat: Tensor
    phi: Optional[Tensor] = None
    xi: Optional[Tensor] = None
    eta: Optional[Tensor] = None
    gamma: Optional[Tensor] = None
    nabla_R: Optional[Tensor] = None
    nabla2_R: Optional[Tensor] = None
    commutator: Optional[Tensor] = None
    nabla_g: Optional[Tensor] = None
    nabla_phi: Optional[Tensor] = None
    nabla_xi: Optional[Tensor] = None
    nabla_eta: Optional[Tensor] = None
    d_eta: Optional[Tensor] = None
    point: Optional[np.ndarray] = None
    model: str = ""
    params: dict = field(default_factory=dict)

    @property
    def is_contact(self) -> bool:
        return self.phi is not None

    def with_curvature(self, R: np.ndarray, nabla_R: Optional[np.ndarray] = None) -> "GeometryAtPoint":
        """Copy with a replaced curvature tensor; Ricci data are recomputed."""
        Rt = Tensor(R, 1, 3)
        S, Q, r = ricci_from_curvature(Rt, self.g_inv)
        kw = dict(self.__dict__)
        kw.update(R=Rt, S=S, Q=Q, r=r, R_flat=lower_index(Rt, 0, self.g))
        if nabla_R is not None:
            kw["nabla_R"] = Tensor(nabla_R, 1, 4)
        kw.update(nabla2_R=None, commutator=None)
        return GeometryAtPoint(**kw)


def _finish(n, backend, g, R, **kw) -> GeometryAtPoint:
    g_t = Tensor(g, 0, 2)
    g_inv = inverse_metric(g_t)
    R_t = Tensor(R, 1, 3)
    S, Q, r = ricci_from_curvature(R_t, g_inv)
    return GeometryAtPoint(
        n=n, backend=backend, g=g_t, g_inv=g_inv, R=R_t, S=S, Q=Q, r=r,
        R_flat=lower_index(R_t, 0, g_t), **kw,
    )


def chart_geometry(chart: MetricChart, point, second_order: bool = True,
                   d_factor: float | None = None) -> GeometryAtPoint:
    """Geometry of a coordinate chart at ``point``.

    With ``second_order`` the metric is expanded to order 4 and the full
    second covariant derivative of R (and its commutator) is included;
    otherwise order 3 suffices for everything up to nabla R.
    """
    n = chart.n
    point = np.asarray(point, dtype=float)
    order = 4 if second_order else 3
    sp = jets.space(n, order)
    x = sp.variables(point)
    g = chart.metric(x)
    ginv = jets.matrix_inverse(g)
    gam = jets.christoffel(g, ginv)
    R = jets.riemann(gam)
    dR = jets.covariant_derivative(R, 1, gam)
    kw = {}
    if second_order:
        ddR = jets.covariant_derivative(dR, 1, gam).value
        kw["nabla2_R"] = Tensor(ddR, 1, 5)
        kw["commutator"] = Tensor(ddR - ddR.transpose(0, 2, 1, 3, 4, 5), 1, 5)
    nabla_g = jets.covariant_derivative(g.truncate(gam.order), 0, gam).value
    kw.update(
        gamma=Tensor(gam.value, 1, 2),
        nabla_R=Tensor(dR.value, 1, 4),
        nabla_g=Tensor(nabla_g, 0, 3),
    )
    if chart.has_contact_structure:
        kw.update(_contact_fields(chart, x, ginv, gam, d_factor))
    params = {"m": chart.m} if hasattr(chart, "m") else {}
    return _finish(n, "chart", g.value, R.value, point=point, model=chart.name, params=params, **kw)


def _contact_fields(chart, x, ginv, gam, d_factor):
    fac = EXTERIOR_DERIVATIVE_FACTOR if d_factor is None else d_factor
    eta = chart.eta(x)
    xi = chart.xi(x)
    de = eta.gradient()  # de[a, b] = d_a eta_b
    d_eta = (de - de.transpose(1, 0)) * fac
    # g(X, phi Y) = d eta(X, Y)  =>  phi^c_b = g^{ca} (d eta)_{ab}
    phi = jets.einsum("ca,ab->cb", ginv.truncate(d_eta.order), d_eta)
    g1 = gam.truncate(phi.order)
    nabla_phi = jets.covariant_derivative(phi, 1, g1).value
    nabla_xi = jets.covariant_derivative(xi.truncate(gam.order), 1, gam).value
    nabla_eta = jets.covariant_derivative(eta.truncate(gam.order), 0, gam).value
    return dict(
        phi=Tensor(phi.value, 1, 1),
        xi=Tensor(xi.value, 1, 0),
        eta=Tensor(eta.value, 0, 1),
        d_eta=Tensor(d_eta.value, 0, 2),
        nabla_phi=Tensor(nabla_phi, 1, 2),
        nabla_xi=Tensor(nabla_xi, 1, 1),
        nabla_eta=Tensor(nabla_eta, 0, 2),
    )


def darboux_geometry(m: int, point, second_order: bool = True) -> GeometryAtPoint:
    return chart_geometry(DarbouxModel(m), point, second_order=second_order)


def structure_h(chart: MetricChart, point, d_factor: float | None = None) -> Tensor:
    """h = (1/2) Lie_xi phi, from coordinate derivatives of phi and xi."""
    if not chart.has_contact_structure:
        raise BackendError(f"chart {chart.name!r} carries no contact structure")
    fac = EXTERIOR_DERIVATIVE_FACTOR if d_factor is None else d_factor
    sp = jets.space(chart.n, 3)
    x = sp.variables(point)
    g = chart.metric(x)
    ginv = jets.matrix_inverse(g)
    de = chart.eta(x).gradient()
    d_eta = (de - de.transpose(1, 0)) * fac
    phi = jets.einsum("ca,ab->cb", ginv.truncate(d_eta.order), d_eta)
    xi = chart.xi(x).truncate(phi.order)
    dphi = phi.gradient().value  # [e, c, b] = d_e phi^c_b
    dxi = xi.gradient().value  # [e, c] = d_e xi^c
    xi0, phi0 = xi.value, phi.value
    lie = (
        np.einsum("e,ecb->cb", xi0, dphi)
        - np.einsum("eb,ec->cb", phi0, dxi)
        + np.einsum("ce,be->cb", phi0, dxi)
    )
    return Tensor(0.5 * lie, 1, 1)


# ---------------------------------------------------------------------------
# Sasakian space form M(c), algebraic backend
# ---------------------------------------------------------------------------

# Each term: (coefficient group, coefficient, factor names, subscripts).
# Output layout is "axyz"; 'A' multiplies (c+3)/4, 'B' multiplies (c-1)/4.
_SPACE_FORM_TERMS = [
    ("A", 1.0, ("g", "id"), ("yz", "ax")),
    ("A", -1.0, ("g", "id"), ("xz", "ay")),
    ("B", 1.0, ("eta", "eta", "id"), ("x", "z", "ay")),
    ("B", -1.0, ("eta", "eta", "id"), ("y", "z", "ax")),
    ("B", 1.0, ("g", "eta", "xi"), ("xz", "y", "a")),
    ("B", -1.0, ("g", "eta", "xi"), ("yz", "x", "a")),
    ("B", 1.0, ("Phi", "phi"), ("yz", "ax")),
    ("B", -1.0, ("Phi", "phi"), ("xz", "ay")),
    ("B", -2.0, ("Phi", "phi"), ("xy", "az")),
]


def _space_form_structure(m: int):
    n = 2 * m + 1
    g = np.eye(n)
    eta = np.zeros(n)
    eta[0] = 1.0
    xi = eta.copy()
    phi = np.zeros((n, n))
    for i in range(1, m + 1):
        phi[m + i, i] = 1.0  # phi f_i = f_{m+i}
        phi[i, m + i] = -1.0  # phi f_{m+i} = -f_i
    Phi = np.einsum("bz,by->yz", g, phi)  # Phi(Y, Z) = g(phi Y, Z)
    base = {"g": g, "id": np.eye(n), "eta": eta, "xi": xi, "phi": phi, "Phi": Phi}
    # covariant derivatives along w of the Sasakian structure tensors
    deriv = {
        "eta": (np.einsum("wb,bx->wx", g, phi), "w{}"),  # (nabla_W eta)X = g(W, phi X)
        "xi": (-phi, "{}w"),  # nabla_W xi = -phi W
        "phi": (np.einsum("wb,a->awb", g, xi) - np.einsum("b,aw->awb", eta, np.eye(n)), "{0}w{1}"),
        "Phi": (np.einsum("wy,z->wyz", g, eta) - np.einsum("y,wz->wyz", eta, g), "w{}"),
    }
    return base, deriv


def _deriv_subscript(pattern: str, sub: str) -> str:
    if pattern == "{0}w{1}":
        return sub[0] + "w" + sub[1]
    return pattern.format(sub)


def space_form_curvature(m: int, c: float) -> tuple[np.ndarray, np.ndarray]:
    """Closed-form R of M(c) and its covariant derivative in the adapted frame."""
    base, deriv = _space_form_structure(m)
    coef = {"A": (c + 3.0) / 4.0, "B": (c - 1.0) / 4.0}
    n = 2 * m + 1
    R = np.zeros((n,) * 4)
    dR = np.zeros((n,) * 5)
    for group, k, names, subs in _SPACE_FORM_TERMS:
        scale = coef[group] * k
        if scale == 0.0:
            continue
        R += scale * np.einsum(",".join(subs) + "->axyz", *[base[nm] for nm in names])
        for i, nm in enumerate(names):
            if nm not in deriv:
                continue
            arr, pattern = deriv[nm]
            ops = [base[x] for x in names]
            ops[i] = arr
            sub = list(subs)
            sub[i] = _deriv_subscript(pattern, subs[i])
            dR += scale * np.einsum(",".join(sub) + "->awxyz", *ops)
    return R, dR


def space_form_geometry(m: int, c: float) -> GeometryAtPoint:
    if m < 1:
        raise ValueError(f"m must be >= 1, got {m}")
    base, deriv = _space_form_structure(m)
    R, dR = space_form_curvature(m, c)
    n = 2 * m + 1
    return _finish(
        n, "algebraic", base["g"], R,
        phi=Tensor(base["phi"], 1, 1),
        xi=Tensor(base["xi"], 1, 0),
        eta=Tensor(base["eta"], 0, 1),
        nabla_R=Tensor(dR, 1, 4),
        model="spaceform",
        params={"m": m, "c": float(c)},
    )


# ---------------------------------------------------------------------------
# frames, projections, sampling
# ---------------------------------------------------------------------------


def adapted_frame(geom: GeometryAtPoint, tol: float = 1e-10) -> np.ndarray:
    """Orthonormal frame (xi, f_1..f_m, phi f_1..phi f_m) as matrix columns.

    f_i is Gram-Schmidt applied to the coordinate basis in order, skipping
    vectors already in the span.
    """
    if not geom.is_contact:
        raise BackendError("adapted frame needs a contact metric structure")
    n = geom.n
    m = (n - 1) // 2
    g = geom.g.data
    phi = geom.phi.data
    frame = [geom.xi.data.copy()]
    firsts = []
    for k in range(n):
        if len(firsts) == m:
            break
        v = np.zeros(n)
        v[k] = 1.0
        for f in frame:
            v = v - (f @ g @ v) * f
        norm = np.sqrt(v @ g @ v)
        if norm <= tol:
            continue
        f = v / norm
        firsts.append(f)
        frame.extend([f, phi @ f])
    F = np.column_stack([frame[0]] + firsts + [phi @ f for f in firsts])
    return F


def frame_components(t: Tensor, F: np.ndarray) -> np.ndarray:
    """Components of ``t`` in the frame whose vectors are the columns of ``F``."""
    Finv = np.linalg.inv(F)
    out = t.data
    for s in range(t.rank):
        mat = Finv if s < t.p else F.T
        out = np.moveaxis(np.tensordot(mat, out, axes=([1], [s])), 0, s)
    return out


def horizontal_project(geom: GeometryAtPoint, v: np.ndarray) -> np.ndarray:
    """v - eta(v) xi."""
    v = np.asarray(v, dtype=float)
    return v - np.tensordot(v, geom.eta.data, axes=([-1], [0]))[..., None] * geom.xi.data


def sample_vectors(geom: GeometryAtPoint, kind: str, rng: np.random.Generator, count: int) -> np.ndarray:
    """``count`` vectors with entries uniform in [-1, 1], projected when ``kind == 'horizontal'``."""
    v = rng.uniform(-1.0, 1.0, size=(count, geom.n))
    if kind == "horizontal":
        v = horizontal_project(geom, v)
        # one more pass removes the rounding left by the first
        v = horizontal_project(geom, v)
    elif kind != "arbitrary":
        raise ValueError(f"unknown vector class {kind!r}")
    return v
