"""Counter-based random substreams.

Every random draw is keyed by ``(seed, *keys)`` so a sample's values do not
depend on which other samples or checks were evaluated, or in which order.
"""

from __future__ import annotations

import zlib

import numpy as np


def _key(k) -> int:
    if isinstance(k, (int, np.integer)):
        return int(k)
    return zlib.crc32(str(k).encode("utf-8"))


def substream(seed: int, *keys) -> np.random.Generator:
    seq = np.random.SeedSequence(int(seed), spawn_key=tuple(_key(k) for k in keys))
    return np.random.default_rng(seq)


def sample_point(seed: int, index: int, n: int, box: float = 1.0) -> np.ndarray:
    """Chart point for sample ``index``; shared by every check in a run."""
    return substream(seed, "point", index).uniform(-box, box, size=n)
