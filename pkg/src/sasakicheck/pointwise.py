"""Vector-level evaluation helpers shared by the identity registry and experiments.

A :class:`Point` wraps one :class:`GeometryAtPoint` and memoizes the derived
tensors (P, C, B, H, E and the derivations R(U,V)·T) so a single sample can
feed many identities cheaply.
"""

from __future__ import annotations

import numpy as np

from . import derived
from .manifolds import BackendError, GeometryAtPoint
from .semisym import derive_tensor


class Point:
    def __init__(self, geom: GeometryAtPoint):
        self.geom = geom
        self.n = geom.n
        self._cache: dict = {}

    # -- structure --------------------------------------------------------
    @property
    def xi(self) -> np.ndarray:
        return self.geom.xi.data

    def g(self, a, b) -> float:
        return float(a @ self.geom.g.data @ b)

    def eta(self, a) -> float:
        return float(self.geom.eta.data @ a)

    def phi(self, a) -> np.ndarray:
        return self.geom.phi.data @ a

    def phi2(self, a) -> np.ndarray:
        p = self.geom.phi.data
        return p @ (p @ a)

    # -- curvature ----------------------------------------------------------
    def R(self, x, y, z) -> np.ndarray:
        return np.einsum("axyz,x,y,z->a", self.geom.R.data, x, y, z)

    def Rs(self, x, y, z, w) -> float:
        return float(np.einsum("xyzw,x,y,z,w->", self.geom.R_flat.data, x, y, z, w))

    def _nabla_R(self) -> np.ndarray:
        if self.geom.nabla_R is None:
            raise BackendError("nabla R unavailable on this backend")
        return self.geom.nabla_R.data

    def dR(self, w, x, y, z) -> np.ndarray:
        """(nabla_W R)(X,Y)Z."""
        return np.einsum("awxyz,w,x,y,z->a", self._nabla_R(), w, x, y, z)

    def dRs(self, w, x, y, z, v) -> float:
        """(nabla_W R)(X,Y,Z,V) = g((nabla_W R)(X,Y)Z, V)."""
        return self.g(self.dR(w, x, y, z), v)

    def S(self, a, b) -> float:
        return float(a @ self.geom.S.data @ b)

    def Q(self, a) -> np.ndarray:
        return self.geom.Q.data @ a

    # -- derived tensors -------------------------------------------------------
    def _memo(self, key, fn):
        if key not in self._cache:
            self._cache[key] = fn()
        return self._cache[key]

    def tensor(self, name: str, coeffs: derived.BCoefficients | None = None):
        if name == "R":
            return self.geom.R
        if name == "S":
            return self.geom.S
        if name == "Q":
            return self.geom.Q
        if name == "P":
            return self._memo("P", lambda: derived.projective(self.geom))
        if name == "C":
            return self._memo("C", lambda: derived.conformal(self.geom))
        if name == "B":
            return self._memo(("B", coeffs), lambda: derived.b_tensor(self.geom, coeffs))
        raise KeyError(name)

    def H(self, x, y, z) -> np.ndarray:
        Ht = self._memo("H", lambda: derived.h_tensor(self.geom))[0]
        return np.einsum("axyz,x,y,z->a", Ht.data, x, y, z)

    def Hs(self, x, y, z, w) -> float:
        Hf = self._memo("H", lambda: derived.h_tensor(self.geom))[1]
        return float(np.einsum("xyzw,x,y,z,w->", Hf.data, x, y, z, w))

    def E(self, a, b) -> float:
        Et = self._memo("E", lambda: derived.e_tensor(self.geom))[0]
        return float(a @ Et.data @ b)

    def Ecal(self, a) -> np.ndarray:
        Eo = self._memo("E", lambda: derived.e_tensor(self.geom))[1]
        return Eo.data @ a

    # -- derivations R(U,V)· ---------------------------------------------------
    def derived_by(self, u, v, name: str, coeffs=None):
        key = ("D", name, coeffs, u.tobytes(), v.tobytes())
        return self._memo(key, lambda: derive_tensor(self.geom, u, v, self.tensor(name, coeffs)))

    def RR(self, u, v, x, y, z) -> np.ndarray:
        """(R(U,V)·R)(X,Y)Z."""
        return self.D13(u, v, "R", x, y, z)

    def D13(self, u, v, name, x, y, z, coeffs=None) -> np.ndarray:
        """(R(U,V)·T)(X,Y)Z for a (1,3) tensor T."""
        return np.einsum("axyz,x,y,z->a", self.derived_by(u, v, name, coeffs).data, x, y, z)

    def RS(self, u, v, y, z) -> float:
        return float(y @ self.derived_by(u, v, "S").data @ z)

    def RQ(self, u, v, x) -> np.ndarray:
        return self.derived_by(u, v, "Q").data @ x

    # -- recurring combinations ---------------------------------------------------
    def nabla_term(self, u, v, x, y, z) -> float:
        """(nabla_U R)(X,Y,Z,phi V) - (nabla_V R)(X,Y,Z,phi U)."""
        return self.dRs(u, x, y, z, self.phi(v)) - self.dRs(v, x, y, z, self.phi(u))

    def sq_bracket(self, u, v, x, y, z) -> list[np.ndarray]:
        """Summands of (R·S)(Y,Z)X - (R·S)(X,Z)Y + g(Y,Z)(R·Q)(X) - g(X,Z)(R·Q)(Y)."""
        return [
            self.RS(u, v, y, z) * x,
            -self.RS(u, v, x, z) * y,
            self.g(y, z) * self.RQ(u, v, x),
            -self.g(x, z) * self.RQ(u, v, y),
        ]

    def s_bracket(self, u, v, x, y, z) -> list[np.ndarray]:
        """Summands of (R·S)(Y,Z)X - (R·S)(X,Z)Y."""
        return [self.RS(u, v, y, z) * x, -self.RS(u, v, x, z) * y]

    def lhs_phi2_args(self, u, v, x, y, z) -> np.ndarray:
        """(R(phi^2 U, phi^2 V)·R)(phi^2 X, phi^2 Y) phi^2 Z."""
        p2 = self.phi2
        return self.RR(p2(u), p2(v), p2(x), p2(y), p2(z))
