"""Random k-DAGs and their greedy min-label / max-label root distances.

Slot ``j`` of node ``i`` reads stream address ``i * k + j``, the same address
the max/min-of-k attachment laws use for node ``i``.  Because
``min_j floor(i U_j) = floor(i min_j U_j)``, a greedy distance in the DAG and
the depth in the matching tree are then equal draw by draw, not only in law.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import _kernels
from .distributions import MaxOrder, MinOrder
from .streams import RandomStream
from .tree_sim import DEFAULT_NODE_BUDGET, CapacityExceeded, build_depths

MODES = ("min_label", "max_label")


def storage_limit(k: int) -> int:
    return int(1e7 * 2 / k)


@dataclass
class KDag:
    """``parent_lists[i, j]`` is the j-th parent of node ``i`` (row 0 unused).

    Above :func:`storage_limit` the lists are not stored and parents are
    re-derived from the stream on demand.
    """

    n: int
    k: int
    stream: RandomStream
    parent_lists: Optional[np.ndarray] = None

    def parents(self, i: int) -> np.ndarray:
        if self.parent_lists is not None:
            return self.parent_lists[i]
        u = self.stream.uniforms_at(np.arange(i * self.k, (i + 1) * self.k))
        return np.minimum(np.floor(i * u).astype(np.int64), i - 1)

    def chosen_parents(self, mode: str) -> np.ndarray:
        """Greedy parent of every node (entry 0 is -1)."""
        _check_mode(mode)
        if self.parent_lists is None:
            raise CapacityExceeded("parent lists are not stored for this DAG")
        pick = self.parent_lists[1:].min(axis=1) if mode == "min_label" else self.parent_lists[1:].max(axis=1)
        return np.concatenate([[-1], pick]).astype(np.int64)


def _check_mode(mode):
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}, got {mode!r}")


def build_kdag(n: int, k: int, stream: RandomStream, store: Optional[bool] = None,
               node_budget: int = DEFAULT_NODE_BUDGET) -> KDag:
    """Each node ``i >= 1`` picks ``k`` parents ``floor(i U)`` with replacement."""
    if n < 1 or k < 1:
        raise ValueError("need n >= 1 and k >= 1")
    if store is None:
        store = n <= storage_limit(k)
    if not store:
        return KDag(n, k, stream, None)
    if n * k > node_budget:
        raise CapacityExceeded(f"n*k = {n * k} exceeds the draw budget {node_budget}")
    u = stream.block(k, n * k)
    labels = np.repeat(np.arange(1, n + 1, dtype=np.int64), k)
    par = np.minimum(np.floor(labels * u).astype(np.int64), labels - 1)
    lists = np.full((n + 1, k), -1, dtype=np.int64)
    lists[1:] = par.reshape(n, k)
    return KDag(n, k, stream, lists)


def greedy_distance(dag: KDag, node: int, mode: str) -> int:
    """Steps from ``node`` to 0 always moving to the smallest (largest) parent label."""
    _check_mode(mode)
    if not 0 <= node <= dag.n:
        raise ValueError(f"node {node} outside 0..{dag.n}")
    steps = 0
    cur = node
    while cur > 0:
        p = dag.parents(cur)
        cur = int(p.min() if mode == "min_label" else p.max())
        steps += 1
    return steps


def greedy_distances(dag: KDag, mode: str) -> np.ndarray:
    """Greedy distance of every node, via ``R_i = 1 + R_(chosen parent of i)``."""
    return _kernels.depths_from_parents(dag.chosen_parents(mode))


def reduction_check(n: int, k: int, seed: int, trials: int = 1) -> int:
    """Count nodes whose greedy DAG distance differs from the depth in the tree
    built with the max/min-of-k law from the same draws (both modes, every
    node, every trial)."""
    mismatches = 0
    for trial in range(trials):
        stream = RandomStream(seed, trial)
        dag = build_kdag(n, k, stream, store=True)
        for mode, law in (("min_label", MinOrder(k)), ("max_label", MaxOrder(k))):
            tree = build_depths(n, law, stream)
            mismatches += int(np.count_nonzero(greedy_distances(dag, mode) != tree.depths))
    return mismatches
