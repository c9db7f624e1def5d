"""The curvature derivation R(U,V)· and phi^2 machinery."""

from __future__ import annotations

import numpy as np

from .manifolds import BackendError, GeometryAtPoint
from .tensor import Tensor, TensorError


def curvature_endo(geom: GeometryAtPoint, U, V) -> Tensor:
    """The endomorphism Z -> R(U,V)Z as a (1,1) tensor."""
    A = np.einsum("axyz,x,y->az", geom.R.data, np.asarray(U, float), np.asarray(V, float))
    return Tensor(A, 1, 1)


def derive_tensor(geom: GeometryAtPoint, U, V, T: Tensor) -> Tensor:
    """(R(U,V)·T): the endomorphism acts on each upper slot and, with a minus sign, on each lower slot."""
    A = curvature_endo(geom, U, V).data
    return Tensor(derive_array(A, T.data, T.p), T.p, T.q)


def derive_array(A: np.ndarray, data: np.ndarray, p: int) -> np.ndarray:
    out = np.zeros_like(data)
    for s in range(data.ndim):
        if s < p:
            term = np.tensordot(A, data, axes=([1], [s]))
        else:
            term = -np.tensordot(A, data, axes=([0], [s]))
        out += np.moveaxis(term, 0, s)
    return out


def phi2_apply(geom: GeometryAtPoint, T: Tensor, slot: int = 0) -> Tensor:
    """Compose phi^2 on contravariant ``slot`` (the output slot by default)."""
    if T.p == 0:
        raise TensorError("phi2_apply needs a tensor with a contravariant slot")
    if not 0 <= slot < T.p:
        raise TensorError(f"contravariant slot {slot} out of range")
    phi = geom.phi.data
    phi2 = phi @ phi
    data = np.moveaxis(np.tensordot(phi2, T.data, axes=([1], [slot])), 0, slot)
    return Tensor(data, T.p, T.q)


def _require_horizontal(geom, *vecs, tol=1e-12):
    eta = geom.eta.data
    for v in vecs:
        if abs(float(eta @ v)) > tol * max(1.0, float(np.max(np.abs(v)))):
            raise TensorError("argument must be horizontal (orthogonal to xi)")


def literal_second_derivative_xi(geom: GeometryAtPoint, U, V, X, Y) -> np.ndarray:
    """Right-hand side obtained by differentiating (nabla_V R)(X,Y)xi along U with
    xi and phi treated as parallel:

        {g(Y,U)g(X,V) - g(X,U)g(Y,V) - R(X,Y,U,V)} xi + phi((nabla_U R)(X,Y)V).
    """
    if geom.nabla_R is None:
        raise BackendError("needs nabla R")
    U, V, X, Y = (np.asarray(a, float) for a in (U, V, X, Y))
    _require_horizontal(geom, U, V, X, Y)
    g = geom.g.data
    bracket = (Y @ g @ U) * (X @ g @ V) - (X @ g @ U) * (Y @ g @ V)
    bracket -= np.einsum("xyzw,x,y,z,w->", geom.R_flat.data, X, Y, U, V)
    dR = np.einsum("awxyz,w,x,y,z->a", geom.nabla_R.data, U, X, Y, V)
    return bracket * geom.xi.data + geom.phi.data @ dR


def tensorial_second_derivative_xi(geom: GeometryAtPoint, U, V, X, Y) -> np.ndarray:
    """(nabla^2_{U,V} R)(X,Y)xi from the jet pipeline."""
    if geom.nabla2_R is None:
        raise BackendError("needs the second covariant derivative (chart backend, order 4)")
    return np.einsum(
        "auvxyz,u,v,x,y,z->a", geom.nabla2_R.data,
        *(np.asarray(a, float) for a in (U, V, X, Y)), geom.xi.data,
    )
