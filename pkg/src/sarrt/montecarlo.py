"""Seeded, thread-parallel experiment harness.

Every trial owns the stream keyed by ``(seed, n, trial)``.  Trials are split
into fixed chunks, evaluated on a thread pool and reassembled in trial order,
so results do not depend on the number of workers.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np
from scipy import stats

from .distributions import AttachmentLaw, as_law
from .streams import RandomStream, derive_key
from .tree_sim import (
    CapacityExceeded,
    build_depths,
    path_event_probability,
    renewal_bounds_batch,
    rotation_inequality_check,
    trace_depths,
    wilson,
)

STATISTICS = ("d_last", "height", "min_depth", "renewal", "clt", "path_event", "rotation")
DEFAULT_SEED = 20100913
CHUNK = 64

# acceptance windows for the standardized depth; recorded in every clt row
CLT_THRESHOLDS = {"mean": 0.05, "variance": 0.1, "skewness": 0.15, "excess_kurtosis": 0.3, "ks": 0.03}


class DegenerateSigma(ValueError):
    pass


def default_threads() -> int:
    try:
        return max(1, int(os.environ.get("SARRT_THREADS", "1")))
    except ValueError:
        return 1


@dataclass
class ExperimentPlan:
    law: AttachmentLaw
    n_grid: Sequence[int]
    trials: int
    seed: int = DEFAULT_SEED
    statistics: Sequence[str] = ("d_last", "height", "min_depth")
    threads: int = 1
    path_t: int = 10
    path_beta: float = math.exp(-0.5)
    rotation_trials: int = 100_000

    def __post_init__(self):
        self.law = as_law(self.law)
        self.n_grid = [int(n) for n in self.n_grid]
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if any(b <= a for a, b in zip(self.n_grid, self.n_grid[1:])) or not self.n_grid:
            raise ValueError("n_grid must be nonempty and strictly increasing")
        unknown = set(self.statistics) - set(STATISTICS)
        if unknown:
            raise ValueError(f"unknown statistics {sorted(unknown)}; choose from {STATISTICS}")


@dataclass
class StatSummary:
    mean: float
    variance: float
    se: float
    ci_low: float
    ci_high: float
    q05: float
    q50: float
    q95: float
    ratio: float  # mean / log n

    @classmethod
    def of(cls, x: np.ndarray, n: int) -> "StatSummary":
        x = np.asarray(x, dtype=float)
        m = x.size
        mean = float(x.mean())
        var = float(x.var(ddof=1)) if m > 1 else 0.0
        se = math.sqrt(var / m)
        half = float(stats.t.ppf(0.975, m - 1)) * se if m > 1 else 0.0
        q05, q50, q95 = (float(v) for v in np.quantile(x, [0.05, 0.5, 0.95]))
        return cls(mean, var, se, mean - half, mean + half, q05, q50, q95, mean / math.log(n))


@dataclass
class CltDiagnostics:
    mean: float
    variance: float
    skewness: float
    excess_kurtosis: float
    ks: float
    thresholds: dict = field(default_factory=lambda: dict(CLT_THRESHOLDS))

    def passes(self) -> dict:
        t = self.thresholds
        return {
            "mean": abs(self.mean) < t["mean"],
            "variance": abs(self.variance - 1.0) < t["variance"],
            "skewness": abs(self.skewness) < t["skewness"],
            "excess_kurtosis": abs(self.excess_kurtosis) < t["excess_kurtosis"],
            "ks": self.ks < t["ks"],
        }


@dataclass
class ConvergenceRow:
    n: int
    trials: int
    law: str
    seed: int
    stats: dict = field(default_factory=dict)  # name -> StatSummary
    clt: Optional[CltDiagnostics] = None
    renewal: Optional[dict] = None
    path_event: Optional[dict] = None
    rotation: Optional[dict] = None
    samples: dict = field(default_factory=dict, repr=False)
    error: Optional[str] = None


def standardize(d: np.ndarray, mu: float, sigma: float, n: int) -> np.ndarray:
    ln = math.log(n)
    return (np.asarray(d, dtype=float) - ln / mu) / (sigma * math.sqrt(ln / mu**3))


def clt_diagnostics(samples, mu: float, sigma: float, n: int) -> CltDiagnostics:
    """Moments of the standardized depth and its KS distance to N(0, 1)."""
    if not sigma > 0.0:
        raise DegenerateSigma("sigma = 0: the depth is deterministic up to +-1, no Gaussian limit")
    if not (math.isfinite(mu) and math.isfinite(sigma)):
        raise DegenerateSigma("mu and sigma must be finite")
    z = standardize(samples, mu, sigma, n)
    return CltDiagnostics(
        float(z.mean()),
        float(z.var()),
        float(stats.skew(z)),
        float(stats.kurtosis(z)),
        float(stats.kstest(z, "norm").statistic),
    )


def trial_keys(seed: int, n: int, trials: int) -> np.ndarray:
    return np.array([derive_key(seed, n, i) for i in range(trials)], dtype=np.uint64)


def _chunks(trials):
    return [(a, min(a + CHUNK, trials)) for a in range(0, trials, CHUNK)]


def _map(fn, items, threads):
    if threads <= 1:
        return [fn(it) for it in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, items))


def _full_builds(law, n, keys, threads):
    def work(span):
        a, b = span
        out = np.empty((b - a, 3), dtype=np.int64)
        lo = (n + 1) // 2
        for r, key in enumerate(keys[a:b]):
            d = build_depths(n, law, RandomStream.from_key(key)).depths
            out[r] = (d[n], d[1:].max(), d[lo:].min())
        return out

    return np.concatenate(_map(work, _chunks(len(keys)), threads))


def _lazy(fn, keys, threads):
    parts = _map(lambda span: fn(keys[span[0]:span[1]]), _chunks(len(keys)), threads)
    if isinstance(parts[0], dict):
        return {k: np.concatenate([p[k] for p in parts]) for k in parts[0]}
    return np.concatenate(parts)


def run_plan(plan: ExperimentPlan) -> list[ConvergenceRow]:
    """One :class:`ConvergenceRow` per node count in ``plan.n_grid``."""
    law = plan.law
    ms = law.moments()
    rows = []
    for n in plan.n_grid:
        row = ConvergenceRow(n, plan.trials, law.spec(), plan.seed)
        keys = trial_keys(plan.seed, n, plan.trials)
        want = set(plan.statistics)
        try:
            if want & {"height", "min_depth"}:
                arr = _full_builds(law, n, keys, plan.threads)
                row.samples.update(d_last=arr[:, 0], height=arr[:, 1], min_depth=arr[:, 2])
            elif want & {"d_last", "clt"}:
                row.samples["d_last"] = _lazy(lambda k: trace_depths(n, law, k), keys, plan.threads)
        except CapacityExceeded as exc:
            row.error = str(exc)
            rows.append(row)
            continue
        for name in ("d_last", "height", "min_depth"):
            if name in want:
                row.stats[name] = StatSummary.of(row.samples[name], n)
        if "clt" in want:
            try:
                row.clt = clt_diagnostics(row.samples["d_last"], ms.mu, ms.sigma, n)
            except DegenerateSigma as exc:
                row.error = str(exc)
        if "renewal" in want and n >= 3:
            r = _lazy(lambda k: renewal_bounds_batch(n, law, k), keys, plan.threads)
            viol = int(np.count_nonzero(r["d_exact"] > r["d_hat"]))
            lo_ok = int(np.count_nonzero(r["d_bar"] <= r["d_exact"]))
            row.renewal = {
                "upper_violations": viol,
                "lower_holds_fraction": lo_ok / plan.trials,
                "d_hat_mean": float(r["d_hat"].mean()),
                "d_bar_mean": float(r["d_bar"].mean()),
            }
            row.samples.update(r)
        if "path_event" in want:
            est = path_event_probability("A", n, law, plan.path_t, plan.path_beta, plan.trials,
                                         seed=int(derive_key(plan.seed, n, 0xA)))
            row.path_event = {"estimate": est.estimate, "ci_low": est.ci_low, "ci_high": est.ci_high}
        if "rotation" in want:
            rc = rotation_inequality_check(law, plan.path_t, plan.path_beta, plan.rotation_trials,
                                           seed=int(derive_key(plan.seed, n, 0xB)))
            row.rotation = {"lhs": rc.lhs, "rhs": rc.rhs, "passed": rc.passed}
        rows.append(row)
    return rows


def frequency(hits) -> dict:
    hits = np.asarray(hits, dtype=bool)
    lo, hi = wilson(int(hits.sum()), hits.size)
    return {"estimate": float(hits.mean()), "ci_low": lo, "ci_high": hi}
