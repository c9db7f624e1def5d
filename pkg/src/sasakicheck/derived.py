"""Ricci data and the curvature tensors derived from (R, S, Q, r, g).

All functions are pointwise algebra on a :class:`~sasakicheck.manifolds.GeometryAtPoint`
(or anything exposing ``n``, ``g``, ``g_inv``, ``R``, ``S``, ``Q``, ``r``).
Arrays follow the curvature layout ``T[a, x, y, z] = (T(e_x, e_y) e_z)^a``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .tensor import Tensor, contract, lower_index, raise_index


class NotApplicableError(ValueError):
    """The requested tensor is undefined in this dimension."""


def ricci_from_curvature(R: Tensor, g_inv: Tensor) -> tuple[Tensor, Tensor, float]:
    """S(Y,Z) = trace(X -> R(X,Y)Z), Q with g(QX,Y) = S(X,Y), r = trace Q."""
    S = contract(R, 0, 0)
    Q = raise_index(S, 0, g_inv, position=0)
    r = float(contract(Q, 0, 0).data)
    return S, Q, r


def ricci_data(geom) -> tuple[Tensor, Tensor, float]:
    return ricci_from_curvature(geom.R, geom.g_inv)


def kulkarni(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """(1,3) array of the map (X,Y,Z) -> a(Y,Z) bX - a(X,Z) bY.

    ``a`` is a (0,2) array, ``b`` a (1,1) array (use the identity for X itself).
    """
    return np.einsum("yz,ax->axyz", a, b) - np.einsum("xz,ay->axyz", a, b)


def _identity(n: int) -> np.ndarray:
    return np.eye(n)


def projective(geom) -> Tensor:
    n = geom.n
    R, S = geom.R.data, geom.S.data
    P = R - kulkarni(S, _identity(n)) / (n - 1)
    return Tensor(P, 1, 3)


def conformal(geom) -> Tensor:
    n = geom.n
    if n <= 3:
        raise NotApplicableError(f"conformal curvature tensor needs n > 3, got n = {n}")
    g, S, Q, r = geom.g.data, geom.S.data, geom.Q.data, geom.r
    eye = _identity(n)
    C = (
        geom.R.data
        - (kulkarni(S, eye) + kulkarni(g, Q)) / (n - 2)
        + r / ((n - 1) * (n - 2)) * kulkarni(g, eye)
    )
    return Tensor(C, 1, 3)


PRESET_KINDS = ("concircular", "conformal", "conharmonic", "quasi-conformal", "custom")


@dataclass(frozen=True)
class BCoefficients:
    """Coefficients of B = b0 R + b1 (S-terms + Q-terms) + b2 r (g-terms)."""

    b0: float
    b1: float
    b2: float
    kind: str = "custom"

    def degenerate(self, n: int, tol: float = 1e-12) -> bool:
        """True when b0 + (n - 2) b1 vanishes."""
        return abs(self.b0 + (n - 2) * self.b1) <= tol * max(1.0, abs(self.b0), abs(self.b1))

    @classmethod
    def concircular(cls, n: int) -> "BCoefficients":
        return cls(1.0, 0.0, -1.0 / (n * (n - 1)), "concircular")

    @classmethod
    def conformal(cls, n: int) -> "BCoefficients":
        return cls(1.0, -1.0 / (n - 2), 1.0 / ((n - 1) * (n - 2)), "conformal")

    @classmethod
    def conharmonic(cls, n: int) -> "BCoefficients":
        return cls(1.0, -1.0 / (n - 2), 0.0, "conharmonic")

    @classmethod
    def quasi_conformal(cls, n: int, b0: float = 1.0, b1: float | None = None) -> "BCoefficients":
        if b1 is None:
            b1 = -1.0 / (n - 2)
        b2 = -(b0 / (n - 1) + 2.0 * b1) / n
        return cls(float(b0), float(b1), b2, "quasi-conformal")

    @classmethod
    def preset(cls, kind: str, n: int, **kw) -> "BCoefficients":
        if kind == "concircular":
            return cls.concircular(n)
        if kind == "conformal":
            return cls.conformal(n)
        if kind == "conharmonic":
            return cls.conharmonic(n)
        if kind == "quasi-conformal":
            return cls.quasi_conformal(n, **kw)
        if kind == "custom":
            return cls(float(kw.get("b0", 1.0)), float(kw.get("b1", 0.5)), float(kw.get("b2", 0.25)), "custom")
        raise ValueError(f"unknown B-tensor preset {kind!r}")


def b_tensor(geom, coeffs: BCoefficients) -> Tensor:
    n = geom.n
    eye = _identity(n)
    g, S, Q, r = geom.g.data, geom.S.data, geom.Q.data, geom.r
    B = (
        coeffs.b0 * geom.R.data
        + coeffs.b1 * (kulkarni(S, eye) + kulkarni(g, Q))
        + coeffs.b2 * r * kulkarni(g, eye)
    )
    return Tensor(B, 1, 3)


def h_tensor(geom) -> tuple[Tensor, Tensor]:
    """H(X,Y)Z = R(X,Y)Z - g(Y,Z)X + g(X,Z)Y and its (0,4) form H(X,Y,Z,W)."""
    H = geom.R.data - kulkarni(geom.g.data, _identity(geom.n))
    Ht = Tensor(H, 1, 3)
    return Ht, lower_index(Ht, 0, geom.g)


def e_tensor(geom) -> tuple[Tensor, Tensor]:
    """E = S - (n-1) g and the endomorphism with g(EX, Y) = E(X, Y)."""
    E = Tensor(geom.S.data - (geom.n - 1) * geom.g.data, 0, 2)
    return E, raise_index(E, 0, geom.g_inv, position=0)
