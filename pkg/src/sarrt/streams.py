"""Counter-based random streams.

A uniform is a pure function of ``(key, draw_index)``, where the key is derived
from ``(seed, trial_id)`` (and optionally more integers such as a node count).
Nothing is shared between streams, so trials can run in any order or on any
thread and still reproduce bit-for-bit.
"""

from __future__ import annotations

import numpy as np

from . import _kernels


def derive_key(*parts: int) -> np.uint64:
    """Hash a tuple of nonnegative integers into a 64-bit stream key."""
    arr = np.array([int(p) & 0xFFFFFFFFFFFFFFFF for p in parts], dtype=np.uint64)
    return np.uint64(_kernels.derive_key(arr))


class RandomStream:
    """Single-owner addressable uniform stream keyed by ``(seed, trial_id)``.

    ``uniforms_at`` reads arbitrary addresses and never moves the cursor;
    ``next_uniforms`` reads sequentially from ``position``.
    """

    def __init__(self, seed: int, trial_id: int = 0, *extra: int, key=None):
        self.seed = int(seed)
        self.trial_id = int(trial_id)
        self.key = np.uint64(key) if key is not None else derive_key(seed, trial_id, *extra)
        self.position = 0

    @classmethod
    def from_key(cls, key) -> "RandomStream":
        return cls(0, 0, key=key)

    def __repr__(self):
        return f"RandomStream(seed={self.seed}, trial_id={self.trial_id}, position={self.position})"

    def uniform_at(self, index: int) -> float:
        return float(_kernels.uniform_at(self.key, np.int64(index)))

    def uniforms_at(self, indices) -> np.ndarray:
        idx = np.ascontiguousarray(indices, dtype=np.int64)
        keys = np.full(idx.shape[0], self.key, dtype=np.uint64)
        return _kernels.uniforms_gather(keys, idx)

    def block(self, start: int, count: int) -> np.ndarray:
        return _kernels.uniform_block(self.key, np.int64(start), np.int64(count))

    def next_uniforms(self, count: int) -> np.ndarray:
        out = self.block(self.position, count)
        self.position += count
        return out


def gather(keys: np.ndarray, indices: np.ndarray) -> np.ndarray:
    """Uniforms at ``(keys[i], indices[i])``; the vectorized multi-stream read."""
    return _kernels.uniforms_gather(
        np.ascontiguousarray(keys, dtype=np.uint64),
        np.ascontiguousarray(indices, dtype=np.int64),
    )
