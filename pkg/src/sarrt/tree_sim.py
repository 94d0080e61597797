"""Exact simulation of scaled attachment random recursive trees.

Node ``i`` attaches to ``floor(i * X_i)``.  ``X_i`` is read from the stream at
addresses ``i * width .. i * width + width - 1``, so a full build, a lazily
traced path and the renewal bounds below all use the same draws.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy.stats import binomtest

from . import _kernels
from .distributions import AttachmentLaw, as_law
from .streams import RandomStream, derive_key, gather

MAX_LABEL = 2**31 - 2
DEFAULT_NODE_BUDGET = 200_000_000


class CapacityExceeded(MemoryError):
    pass


@dataclass
class TreeDepths:
    n: int
    depths: np.ndarray
    parents: Optional[np.ndarray] = None


@dataclass(frozen=True)
class PathTrace:
    start: int
    labels: tuple

    @property
    def depth(self) -> int:
        return len(self.labels) - 1


@dataclass(frozen=True)
class SimOutcome:
    d_last: int
    height: int
    min_depth: int
    seed: Optional[int] = None
    trial_id: Optional[int] = None


@dataclass(frozen=True)
class RenewalBounds:
    d_hat: int
    d_bar: int
    d_exact: int


def _check_capacity(n: int, width: int, budget: int):
    if n < 1:
        raise ValueError(f"need n >= 1, got {n}")
    if n > MAX_LABEL or n * max(width, 1) > budget:
        raise CapacityExceeded(f"n = {n} exceeds the node budget ({budget} draws, labels < 2^31 - 1)")


def build_parents(n: int, law: AttachmentLaw, stream: RandomStream,
                  node_budget: int = DEFAULT_NODE_BUDGET) -> np.ndarray:
    law = as_law(law)
    w = law.width
    _check_capacity(n, w, node_budget)
    u = stream.block(w, w * n).reshape(n, w)
    parents = np.empty(n + 1, dtype=np.int64)
    parents[0] = -1
    parents[1:] = _kernels.floor_parents(law.transform(u), 1)
    return parents


def build_depths(n: int, law: AttachmentLaw, stream: RandomStream, keep_parents: bool = False,
                 node_budget: int = DEFAULT_NODE_BUDGET) -> TreeDepths:
    """Depths of nodes ``0..n`` in one forward pass."""
    parents = build_parents(n, law, stream, node_budget)
    depths = _kernels.depths_from_parents(parents)
    return TreeDepths(n, depths, parents if keep_parents else None)


def summarize(t: TreeDepths, seed=None, trial_id=None) -> SimOutcome:
    """Depth of node n, height over ``1..n``, min depth over ``ceil(n/2)..n``."""
    d = t.depths
    lo = (t.n + 1) // 2
    return SimOutcome(int(d[t.n]), int(d[1:].max()), int(d[lo:].min()), seed, trial_id)


class LazyTree:
    """Samples ``X_i`` only at labels that are visited, memoizing each draw."""

    def __init__(self, law: AttachmentLaw, stream: RandomStream):
        self.law = as_law(law)
        self.stream = stream
        self._memo: dict[int, float] = {}

    def x(self, label: int) -> float:
        v = self._memo.get(label)
        if v is None:
            v = float(self.law.sample_labels(self.stream, [label])[0])
            self._memo[label] = v
        return v

    def parent(self, label: int) -> int:
        return min(int(math.floor(label * self.x(label))), label - 1)

    def trace(self, start: int) -> PathTrace:
        labels = [start]
        cur = start
        while cur > 0:
            cur = self.parent(cur)
            labels.append(cur)
        return PathTrace(start, tuple(labels))


def trace_path(source, start: Optional[int] = None, law=None) -> PathTrace:
    """Labels from ``start`` down to the root.

    ``source`` is either a :class:`TreeDepths` with parents kept, or a
    :class:`RandomStream` (then ``law`` is required and draws are lazy).
    """
    if isinstance(source, TreeDepths):
        if source.parents is None:
            raise ValueError("TreeDepths was built without parents")
        cur = source.n if start is None else start
        labels = [cur]
        while cur > 0:
            cur = int(source.parents[cur])
            labels.append(cur)
        return PathTrace(labels[0], tuple(labels))
    if law is None or start is None:
        raise ValueError("lazy tracing needs start and law")
    return LazyTree(law, source).trace(start)


# ---------------------------------------------------------------------------
# vectorized many-trial path operations


def _x_at(law: AttachmentLaw, keys: np.ndarray, labels: np.ndarray) -> np.ndarray:
    w = law.width
    idx = (labels[:, None] * w + np.arange(w)[None, :]).ravel()
    u = gather(np.repeat(keys, w), idx).reshape(labels.shape[0], w)
    return law.transform(u)


def _step(law, keys, cur):
    x = _x_at(law, keys, cur)
    nxt = np.floor(cur * x).astype(np.int64)
    return np.minimum(nxt, cur - 1), x


def trace_depths(n: int, law: AttachmentLaw, keys: np.ndarray) -> np.ndarray:
    """``D_n`` for each stream key, traced lazily and in lockstep."""
    law = as_law(law)
    keys = np.asarray(keys, dtype=np.uint64)
    cur = np.full(keys.shape[0], n, dtype=np.int64)
    depth = np.zeros(keys.shape[0], dtype=np.int64)
    act = np.arange(keys.shape[0])
    while act.size:
        nxt, _ = _step(law, keys[act], cur[act])
        cur[act] = nxt
        depth[act] += 1
        act = act[nxt > 0]
    return depth


def renewal_bounds_batch(n: int, law: AttachmentLaw, keys: np.ndarray) -> dict:
    """Vectorized :func:`renewal_bounds`; arrays ``d_hat``, ``d_bar``, ``d_exact``.

    Once the floored path reaches the root, the sums continue with fresh draws
    read at the unused labels ``n + 1, n + 2, ...``.
    """
    if n < 3:
        raise ValueError("renewal bounds need n >= 3")
    law = as_law(law)
    keys = np.asarray(keys, dtype=np.uint64)
    m = keys.shape[0]
    t_hat = math.log(n)
    t_bar = math.log(n) - 2.0 * math.log(math.log(n))
    cur = np.full(m, n, dtype=np.int64)
    spare = np.full(m, n + 1, dtype=np.int64)
    sums = np.zeros(m)
    d_exact = np.zeros(m, dtype=np.int64)
    d_hat = np.zeros(m, dtype=np.int64)
    d_bar = np.zeros(m, dtype=np.int64)
    act = np.arange(m)
    j = 0
    while act.size:
        j += 1
        c = cur[act]
        on_path = c > 0
        labels = np.where(on_path, c, spare[act])
        x = _x_at(law, keys[act], labels)
        with np.errstate(divide="ignore"):
            sums[act] += -np.log(x)
        nxt = np.minimum(np.floor(c * x).astype(np.int64), c - 1)
        cur[act] = np.where(on_path, nxt, 0)
        spare[act] += np.where(on_path, 0, 1)
        newly_root = on_path & (nxt == 0)
        d_exact[act[newly_root]] = j
        s = sums[act]
        hit_hat = (d_hat[act] == 0) & (s > t_hat)
        d_hat[act[hit_hat]] = j
        hit_bar = (d_bar[act] == 0) & (s > t_bar)
        d_bar[act[hit_bar]] = j
        done = (d_exact[act] > 0) & (d_hat[act] > 0) & (d_bar[act] > 0)
        act = act[~done]
    return {"d_hat": d_hat, "d_bar": d_bar, "d_exact": d_exact}


def renewal_bounds(n: int, law: AttachmentLaw, stream: RandomStream) -> RenewalBounds:
    """Stopping indices of ``sum -log X`` along the path of node n at thresholds
    ``log n`` (upper bound on the depth) and ``log n - 2 log log n``."""
    r = renewal_bounds_batch(n, law, np.array([stream.key], dtype=np.uint64))
    return RenewalBounds(int(r["d_hat"][0]), int(r["d_bar"][0]), int(r["d_exact"][0]))


# ---------------------------------------------------------------------------
# path events and the rotation inequality


@dataclass(frozen=True)
class FrequencyEstimate:
    estimate: float
    ci_low: float
    ci_high: float
    successes: int
    trials: int
    meta: dict

    @property
    def se(self) -> float:
        p = self.estimate
        return math.sqrt(max(p * (1 - p), 0.0) / self.trials)


def wilson(successes: int, trials: int) -> tuple[float, float]:
    ci = binomtest(int(successes), int(trials)).proportion_ci(confidence_level=0.95, method="wilson")
    return float(ci.low), float(ci.high)


def _frequency(hits: np.ndarray, meta: dict) -> FrequencyEstimate:
    k, m = int(hits.sum()), int(hits.size)
    lo, hi = wilson(k, m)
    return FrequencyEstimate(k / m, lo, hi, k, m, meta)


def path_event_probability(event: str, n: int, law, t: int, beta: float, trials: int,
                           seed: int = 0) -> FrequencyEstimate:
    """Monte Carlo frequency of a label-keeping path event.

    ``"A"``: ``L(x, s) >= n beta^s`` for ``s = 1..t``, start ``x`` uniform on
    ``2n+1..3n`` in a tree on labels ``0..3n``.
    ``"B"``: ``L(x, s) <= 2n beta^s``, start uniform on ``n+1..2n``, labels ``0..2n``.
    """
    law = as_law(law)
    if event not in ("A", "B"):
        raise ValueError(f"event must be 'A' or 'B', got {event!r}")
    if not 0.0 < beta < 1.0:
        raise ValueError("beta must lie in (0, 1)")
    first = 2 * n + 1 if event == "A" else n + 1
    meta = {"event": event, "n": n, "t": t, "beta": beta,
            "window": (first, first + n - 1), "tree_labels": (0, 3 * n if event == "A" else 2 * n)}
    tree_keys = np.array([derive_key(seed, i, 0) for i in range(trials)], dtype=np.uint64)
    start_keys = np.array([derive_key(seed, i, 1) for i in range(trials)], dtype=np.uint64)
    x0 = first + np.minimum(np.floor(gather(start_keys, np.zeros(trials, dtype=np.int64)) * n), n - 1)
    cur = x0.astype(np.int64)
    ok = np.ones(trials, dtype=bool)
    for s in range(1, t + 1):
        cur, _ = _step(law, tree_keys, np.maximum(cur, 0))
        cur = np.maximum(cur, 0)
        if event == "A":
            ok &= cur >= n * beta**s
        else:
            ok &= cur <= 2 * n * beta**s
    return _frequency(ok, meta)


@dataclass(frozen=True)
class RotationCheck:
    lhs: float
    rhs: float
    passed: bool
    se: float


def rotation_inequality_check(law, t: int, beta: float, trials: int, seed: int = 0) -> RotationCheck:
    """Compare ``P{X1 >= b, X1 X2 >= b^2, ..., X1..Xt >= b^t}`` with
    ``P{X1..Xt >= b^t} / t`` on i.i.d. draws; pass unless the left side falls
    more than 3 standard errors short."""
    if t < 1:
        raise ValueError("t must be >= 1")
    law = as_law(law)
    stream = RandomStream(seed, 0)
    x = law.sample_labels(stream, np.arange(trials * t)).reshape(trials, t)
    with np.errstate(divide="ignore"):
        logs = np.cumsum(np.log(x), axis=1)
    steps = np.arange(1, t + 1)
    thresh = steps * math.log(beta) - 1e-12 * steps
    prefix_ok = np.all(logs >= thresh, axis=1)
    total_ok = logs[:, -1] >= thresh[-1]
    lhs, rhs = prefix_ok.mean(), total_ok.mean()
    se = math.sqrt(lhs * (1 - lhs) / trials + (rhs * (1 - rhs) / trials) / t**2)
    return RotationCheck(float(lhs), float(rhs), bool(lhs >= rhs / t - 3.0 * se), se)
