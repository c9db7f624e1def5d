"""Dense tensors of valence (p, q) over an n-dimensional vector space.

Slots are stored contravariant first, then covariant, in row-major order.
Slot arguments to :func:`contract`, :func:`raise_index` and
:func:`lower_index` count within their own kind: ``up_slot=0`` is the first
contravariant slot, ``down_slot=0`` the first covariant slot.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np


class TensorError(ValueError):
    """Invalid slot, valence or dimension argument."""


class SingularMetricError(ArithmeticError):
    """Metric cannot be inverted to working precision."""


@dataclass(frozen=True, eq=False)
class Tensor:
    data: np.ndarray
    p: int
    q: int

    def __post_init__(self):
        data = np.array(self.data, dtype=np.float64)
        rank = self.p + self.q
        if self.p < 0 or self.q < 0:
            raise TensorError(f"negative valence ({self.p}, {self.q})")
        if data.ndim != rank:
            raise TensorError(f"data has {data.ndim} axes, valence needs {rank}")
        if rank and len(set(data.shape)) != 1:
            raise TensorError(f"non-square data shape {data.shape}")
        data.setflags(write=False)
        object.__setattr__(self, "data", data)

    @property
    def dim(self) -> int:
        return self.data.shape[0] if self.data.ndim else 0

    @property
    def valence(self) -> tuple[int, int]:
        return (self.p, self.q)

    @property
    def rank(self) -> int:
        return self.p + self.q

    def __add__(self, other: "Tensor") -> "Tensor":
        _check_same_kind(self, other)
        return Tensor(self.data + other.data, self.p, self.q)

    def __sub__(self, other: "Tensor") -> "Tensor":
        _check_same_kind(self, other)
        return Tensor(self.data - other.data, self.p, self.q)

    def __mul__(self, scalar: float) -> "Tensor":
        return Tensor(self.data * float(scalar), self.p, self.q)

    __rmul__ = __mul__

    def __neg__(self) -> "Tensor":
        return Tensor(-self.data, self.p, self.q)

    def __repr__(self) -> str:
        return f"Tensor(dim={self.dim}, valence=({self.p}, {self.q}))"


def _check_same_kind(a: Tensor, b: Tensor) -> None:
    if a.valence != b.valence or a.data.shape != b.data.shape:
        raise TensorError(f"mismatched tensors {a!r} and {b!r}")


def scalar(value: float) -> Tensor:
    return Tensor(np.asarray(float(value)), 0, 0)


def vector(components) -> Tensor:
    return Tensor(np.asarray(components, dtype=float), 1, 0)


def covector(components) -> Tensor:
    return Tensor(np.asarray(components, dtype=float), 0, 1)


def identity(n: int) -> Tensor:
    """The (1,1) identity endomorphism."""
    return Tensor(np.eye(n), 1, 1)


def zeros(n: int, p: int, q: int) -> Tensor:
    return Tensor(np.zeros((n,) * (p + q)), p, q)


def max_norm(t: Tensor | np.ndarray) -> float:
    """Largest absolute entry; the residual metric used everywhere."""
    data = t.data if isinstance(t, Tensor) else np.asarray(t)
    if data.size == 0:
        return 0.0
    return float(np.max(np.abs(data)))


def contract(t: Tensor, up_slot: int, down_slot: int) -> Tensor:
    if not 0 <= up_slot < t.p:
        raise TensorError(f"contravariant slot {up_slot} out of range for {t!r}")
    if not 0 <= down_slot < t.q:
        raise TensorError(f"covariant slot {down_slot} out of range for {t!r}")
    data = np.trace(t.data, axis1=up_slot, axis2=t.p + down_slot)
    return Tensor(data, t.p - 1, t.q - 1)


def tensor_product(a: Tensor, b: Tensor) -> Tensor:
    """Outer product; contravariant slots of ``a`` then ``b``, then covariant ones."""
    if a.rank and b.rank and a.dim != b.dim:
        raise TensorError(f"dimension mismatch {a.dim} != {b.dim}")
    outer = np.multiply.outer(a.data, b.data)
    # outer axes: a_up, a_down, b_up, b_down -> a_up, b_up, a_down, b_down
    ra, rb = a.rank, b.rank
    order = (
        list(range(a.p))
        + list(range(ra, ra + b.p))
        + list(range(a.p, ra))
        + list(range(ra + b.p, ra + rb))
    )
    return Tensor(np.transpose(outer, order), a.p + b.p, a.q + b.q)


def permute(t: Tensor, perm: Sequence[int]) -> Tensor:
    """Reorder slots: slot ``i`` of the result is slot ``perm[i]`` of ``t``.

    Contravariant slots may only be permuted among themselves, likewise
    covariant ones, so the canonical slot order is preserved.
    """
    perm = list(perm)
    if sorted(perm) != list(range(t.rank)):
        raise TensorError(f"{perm} is not a permutation of {t.rank} slots")
    if any(s >= t.p for s in perm[: t.p]):
        raise TensorError("permutation mixes contravariant and covariant slots")
    return Tensor(np.transpose(t.data, perm), t.p, t.q)


def inverse_permutation(perm: Sequence[int]) -> list[int]:
    inv = [0] * len(perm)
    for i, s in enumerate(perm):
        inv[s] = i
    return inv


def antisymmetrize(t: Tensor, i: int, j: int) -> Tensor:
    """Half the difference of ``t`` and ``t`` with absolute slots i, j swapped."""
    perm = list(range(t.rank))
    perm[i], perm[j] = perm[j], perm[i]
    return (t - permute(t, perm)) * 0.5


def _metric_matrix(m: Tensor, valence: tuple[int, int]) -> np.ndarray:
    if m.valence != valence:
        raise TensorError(f"expected metric of valence {valence}, got {m.valence}")
    return m.data


def raise_index(t: Tensor, slot: int, g_inv: Tensor, position: int | None = None) -> Tensor:
    """Raise covariant ``slot`` with the inverse metric.

    The new contravariant slot lands at ``position`` among the contravariant
    slots (default: last).
    """
    if not 0 <= slot < t.q:
        raise TensorError(f"covariant slot {slot} out of range for {t!r}")
    ginv = _metric_matrix(g_inv, (2, 0))
    axis = t.p + slot
    moved = np.tensordot(t.data, ginv, axes=([axis], [0]))  # new axis is last
    pos = t.p if position is None else position
    if not 0 <= pos <= t.p:
        raise TensorError(f"position {pos} out of range")
    moved = np.moveaxis(moved, -1, pos)
    return Tensor(moved, t.p + 1, t.q - 1)


def lower_index(t: Tensor, slot: int, g: Tensor, position: int | None = None) -> Tensor:
    """Lower contravariant ``slot`` with the metric.

    The new covariant slot lands at ``position`` among the covariant slots
    (default: last), so lowering R^a_xyz gives R(X,Y,Z,W) with W last.
    """
    if not 0 <= slot < t.p:
        raise TensorError(f"contravariant slot {slot} out of range for {t!r}")
    gm = _metric_matrix(g, (0, 2))
    moved = np.tensordot(t.data, gm, axes=([slot], [0]))  # new axis is last
    q_new = t.q + 1
    pos = q_new - 1 if position is None else position
    if not 0 <= pos < q_new:
        raise TensorError(f"position {pos} out of range")
    moved = np.moveaxis(moved, -1, (t.p - 1) + pos)
    return Tensor(moved, t.p - 1, q_new)


def inverse_metric(g: Tensor, max_condition: float = 1e12) -> Tensor:
    gm = _metric_matrix(g, (0, 2))
    cond = np.linalg.cond(gm)
    if not np.isfinite(cond) or cond > max_condition:
        raise SingularMetricError(f"metric is singular (condition number {cond:.3e})")
    return Tensor(np.linalg.inv(gm), 2, 0)


def apply(t: Tensor, *args: np.ndarray) -> np.ndarray:
    """Feed vectors into the covariant slots of ``t`` in order.

    The covariant slots that receive no argument, and all contravariant
    slots, remain as array axes.
    """
    out = t.data
    for k, v in enumerate(args):
        out = np.tensordot(out, np.asarray(v, dtype=float), axes=([t.p], [0]))
    return out
