"""Truncated Taylor arithmetic in n variables and the curvature pipeline on top of it.

A :class:`Jet` holds an array of Taylor coefficients ``f_alpha`` (not
derivatives: the derivative along ``alpha`` is ``alpha! * f_alpha``) for all
multi-indices of total degree at most ``order``, with arbitrary leading
tensor axes. Metrics given by polynomial or rational expressions in the
coordinate jets are therefore differentiated exactly up to rounding.

Multi-indices are sorted by degree, then lexicographically (descending), so
truncating to a lower order is a prefix slice of the coefficient axis.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np

from .tensor import SingularMetricError

MAX_ORDER = 4
_SLOT_LETTERS = "abcdfghijklmnopq"


def _multi_indices(n: int, order: int) -> list[tuple[int, ...]]:
    out = []
    for deg in range(order + 1):
        block = [
            tuple(np.bincount(combo, minlength=n)) if combo else (0,) * n
            for combo in itertools.combinations_with_replacement(range(n), deg)
        ]
        out.extend(sorted({tuple(int(c) for c in a) for a in block}, reverse=True))
    return out


class JetSpace:
    """Index tables for jets in ``n`` variables truncated at ``order``."""

    def __init__(self, n: int, order: int):
        if n < 1 or order < 0:
            raise ValueError(f"invalid jet space n={n}, order={order}")
        self.n = n
        self.order = order
        self.alphas = _multi_indices(n, order)
        self.size = len(self.alphas)
        self.index = {a: k for k, a in enumerate(self.alphas)}
        self.degree = np.array([sum(a) for a in self.alphas])

        pairs = []
        for i, a in enumerate(self.alphas):
            for j, b in enumerate(self.alphas):
                if self.degree[i] + self.degree[j] <= order:
                    s = tuple(x + y for x, y in zip(a, b))
                    pairs.append((self.index[s], i, j))
        pairs.sort()
        arr = np.array(pairs, dtype=np.intp)
        self._left = arr[:, 1]
        self._right = arr[:, 2]
        targets = arr[:, 0]
        self._starts = np.flatnonzero(np.r_[True, targets[1:] != targets[:-1]])

        # d/dx_v maps coefficient beta of the order-1 result to alpha = beta + e_v here
        self._deriv = []
        if order > 0:
            lower = space(n, order - 1)
            for v in range(n):
                src = np.empty(lower.size, dtype=np.intp)
                fac = np.empty(lower.size)
                for k, b in enumerate(lower.alphas):
                    a = list(b)
                    a[v] += 1
                    src[k] = self.index[tuple(a)]
                    fac[k] = b[v] + 1
                self._deriv.append((src, fac))

    def __repr__(self) -> str:
        return f"JetSpace(n={self.n}, order={self.order})"

    def variables(self, point: Sequence[float]) -> "Jet":
        """Jets of the coordinate functions expanded at ``point``."""
        point = np.asarray(point, dtype=float)
        if point.shape != (self.n,):
            raise ValueError(f"point must have {self.n} coordinates")
        data = np.zeros((self.n, self.size))
        data[:, 0] = point
        if self.order >= 1:
            for v in range(self.n):
                e = [0] * self.n
                e[v] = 1
                data[v, self.index[tuple(e)]] = 1.0
        return Jet(data, self)

    def constant(self, value) -> "Jet":
        value = np.asarray(value, dtype=float)
        data = np.zeros(value.shape + (self.size,))
        data[..., 0] = value
        return Jet(data, self)

    def zeros(self, shape: tuple[int, ...] = ()) -> "Jet":
        return Jet(np.zeros(tuple(shape) + (self.size,)), self)

    def product(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        prod = a[..., self._left] * b[..., self._right]
        return np.add.reduceat(prod, self._starts, axis=-1)

    def einsum(self, subscripts: str, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        lhs, out = subscripts.replace(" ", "").split("->")
        sa, sb = lhs.split(",")
        subs = f"{sa}Z,{sb}Z->{out}Z"
        pair = np.einsum(subs, a[..., self._left], b[..., self._right], optimize=True)
        return np.add.reduceat(pair, self._starts, axis=-1)


@lru_cache(maxsize=None)
def space(n: int, order: int) -> JetSpace:
    return JetSpace(n, order)


@dataclass(frozen=True, eq=False)
class Jet:
    """Array of truncated Taylor expansions; the last axis holds coefficients."""

    data: np.ndarray
    space: JetSpace

    @property
    def shape(self) -> tuple[int, ...]:
        return self.data.shape[:-1]

    @property
    def order(self) -> int:
        return self.space.order

    @property
    def value(self) -> np.ndarray:
        return self.data[..., 0]

    def coeff(self, alpha: Sequence[int]) -> np.ndarray:
        return self.data[..., self.space.index[tuple(alpha)]]

    def derivative_value(self, alpha: Sequence[int]) -> np.ndarray:
        """The partial derivative along ``alpha`` at the expansion point."""
        return math.prod(math.factorial(k) for k in alpha) * self.coeff(alpha)

    def __getitem__(self, key) -> "Jet":
        key = key if isinstance(key, tuple) else (key,)
        if any(k is Ellipsis for k in key) or len(key) > len(self.shape):
            raise IndexError("jets index their tensor axes only")
        return Jet(self.data[key], self.space)

    def _coerce(self, other) -> np.ndarray:
        if isinstance(other, Jet):
            if other.space is not self.space:
                raise ValueError(f"jets from different spaces: {self.space} vs {other.space}")
            return other.data
        const = np.asarray(other, dtype=float)
        data = np.zeros(const.shape + (self.space.size,))
        data[..., 0] = const
        return data

    def __add__(self, other) -> "Jet":
        return Jet(self.data + self._coerce(other), self.space)

    __radd__ = __add__

    def __sub__(self, other) -> "Jet":
        return Jet(self.data - self._coerce(other), self.space)

    def __rsub__(self, other) -> "Jet":
        return Jet(self._coerce(other) - self.data, self.space)

    def __neg__(self) -> "Jet":
        return Jet(-self.data, self.space)

    def __mul__(self, other) -> "Jet":
        if isinstance(other, Jet):
            a, b = np.broadcast_arrays(self.data, self._coerce(other))
            return Jet(self.space.product(a, b), self.space)
        return Jet(self.data * np.asarray(other, dtype=float)[..., None], self.space)

    __rmul__ = __mul__

    def __truediv__(self, other) -> "Jet":
        if isinstance(other, Jet):
            return self * other.reciprocal()
        return Jet(self.data / np.asarray(other, dtype=float)[..., None], self.space)

    def __rtruediv__(self, other) -> "Jet":
        return self.reciprocal() * other

    def __pow__(self, k: int) -> "Jet":
        if int(k) != k or k < 0:
            raise ValueError("only non-negative integer powers are supported")
        out = self.space.constant(np.ones(self.shape))
        for _ in range(int(k)):
            out = out * self
        return out

    def reciprocal(self) -> "Jet":
        a0 = self.value
        if np.any(a0 == 0):
            raise ZeroDivisionError("reciprocal of a jet with zero value part")
        a0 = np.asarray(a0, dtype=float)
        # 1/(a0 + N) = (1/a0) * sum_k (-N/a0)^k; N is nilpotent of index order+1
        x = Jet(-self.data / a0[..., None], self.space)
        x.data[..., 0] = 0.0
        term = self.space.constant(np.ones(self.shape))
        total = term
        for _ in range(self.order):
            term = term * x
            total = total + term
        return total / a0

    def truncate(self, order: int) -> "Jet":
        if order > self.order:
            raise ValueError(f"cannot raise jet order {self.order} to {order}")
        low = space(self.space.n, order)
        return Jet(self.data[..., : low.size].copy(), low)

    def d(self, v: int) -> "Jet":
        """Partial derivative along coordinate ``v``; the order drops by one."""
        if self.order == 0:
            raise ValueError("cannot differentiate an order-0 jet")
        src, fac = self.space._deriv[v]
        return Jet(self.data[..., src] * fac, space(self.space.n, self.order - 1))

    def gradient(self) -> "Jet":
        """Stack of all partials, with the derivative axis first."""
        parts = [self.d(v).data for v in range(self.space.n)]
        return Jet(np.stack(parts, axis=0), space(self.space.n, self.order - 1))

    def transpose(self, *axes: int) -> "Jet":
        return Jet(np.transpose(self.data, tuple(axes) + (len(axes),)), self.space)


def stack(jets: Iterable[Jet], axis: int = 0) -> Jet:
    jets = list(jets)
    sp = jets[0].space
    if any(j.space is not sp for j in jets):
        raise ValueError("cannot stack jets from different spaces")
    return Jet(np.stack([j.data for j in jets], axis=axis), sp)


def einsum(subscripts: str, a: Jet, b: Jet) -> Jet:
    """Tensor contraction of two jet arrays with truncated-Taylor products."""
    if a.space is not b.space:
        raise ValueError("einsum of jets from different spaces")
    return Jet(a.space.einsum(subscripts, a.data, b.data), a.space)


def const_einsum(subscripts: str, c: np.ndarray, a: Jet) -> Jet:
    """Contract a constant array with a jet array (constant operand first)."""
    lhs, out = subscripts.replace(" ", "").split("->")
    sc, sa = lhs.split(",")
    return Jet(np.einsum(f"{sc},{sa}Z->{out}Z", c, a.data), a.space)


def matrix_inverse(g: Jet) -> Jet:
    """Jet of the inverse of a square matrix-valued jet (Neumann series)."""
    g0 = g.value
    cond = np.linalg.cond(g0)
    if not np.isfinite(cond) or cond > 1e12:
        raise SingularMetricError(f"metric is singular at the point (condition number {cond:.3e})")
    inv0 = np.linalg.inv(g0)
    nil = Jet(g.data.copy(), g.space)
    nil.data[..., 0] = 0.0
    x = const_einsum("ab,bc->ac", -inv0, nil)
    term = g.space.constant(np.eye(g0.shape[0]))
    total = term
    for _ in range(g.order):
        term = einsum("ab,bc->ac", x, term)
        total = total + term
    return einsum("ab,bc->ac", total, g.space.constant(inv0))


# ---------------------------------------------------------------------------
# curvature pipeline
# ---------------------------------------------------------------------------


def christoffel(g: Jet, g_inv: Jet | None = None) -> Jet:
    """Levi-Civita symbols ``G[k, i, j] = Gamma^k_ij`` as a jet one order lower than ``g``."""
    if g_inv is None:
        g_inv = matrix_inverse(g)
    ginv = g_inv.truncate(g.order - 1)
    dg = g.gradient()  # dg[l, i, j] = d_l g_ij
    # d_i g_jl + d_j g_il - d_l g_ij, indexed [i, j, l]
    lowered = dg.transpose(0, 2, 1) + dg.transpose(2, 0, 1) - dg.transpose(1, 2, 0)
    return einsum("kl,ijl->kij", ginv, lowered) * 0.5


def riemann(gamma: Jet) -> Jet:
    """``R[a, x, y, z] = (R(e_x, e_y) e_z)^a`` with R(X,Y) = [nabla_X, nabla_Y] - nabla_[X,Y]."""
    dgam = gamma.gradient()  # dgam[x, a, y, z] = d_x Gamma^a_yz
    gam = gamma.truncate(gamma.order - 1)
    quad = einsum("axe,eyz->axyz", gam, gam)
    first = dgam.transpose(1, 0, 2, 3)
    return first - first.transpose(0, 2, 1, 3) + quad - quad.transpose(0, 2, 1, 3)


def covariant_derivative(t: Jet, p: int, gamma: Jet) -> Jet:
    """Covariant derivative of a (p, q) tensor jet.

    The derivative slot becomes the first covariant slot:
    ``out[a.., w, b..] = (nabla_w T)^{a..}_{b..}``.
    """
    rank = len(t.shape)
    dt = t.gradient()  # [w, slots...]
    order = list(range(1, p + 1)) + [0] + list(range(p + 1, rank + 1))
    out = dt.transpose(*order)
    gam = gamma.truncate(out.order)
    tt = t.truncate(out.order)
    slots = _SLOT_LETTERS[:rank]
    w, e = "w", "e"
    for s in range(rank):
        src = slots[:s] + e + slots[s + 1 :]
        target = slots[:p] + w + slots[p:]
        if s < p:
            term = einsum(f"{slots[s]}{w}{e},{src}->{target}", gam, tt)
            out = out + term
        else:
            term = einsum(f"{e}{w}{slots[s]},{src}->{target}", gam, tt)
            out = out - term
    return out
