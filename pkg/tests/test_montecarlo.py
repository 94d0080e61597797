import math

import numpy as np
import pytest

from sarrt.distributions import Constant, MaxOrder, Uniform
from sarrt.montecarlo import (
    CLT_THRESHOLDS,
    DegenerateSigma,
    ExperimentPlan,
    clt_diagnostics,
    run_plan,
    standardize,
)


def test_plan_validation():
    with pytest.raises(ValueError):
        ExperimentPlan(Uniform(), [100, 100], 5)
    with pytest.raises(ValueError):
        ExperimentPlan(Uniform(), [100], 0)
    with pytest.raises(ValueError):
        ExperimentPlan(Uniform(), [100], 5, statistics=("depth",))
    assert ExperimentPlan("max:2", [10], 1).law == MaxOrder(2)


def test_thread_invariance():
    kw = dict(statistics=("d_last", "height", "min_depth", "renewal", "clt"), seed=3)
    one = run_plan(ExperimentPlan(Uniform(), [500, 5000], 150, threads=1, **kw))
    many = run_plan(ExperimentPlan(Uniform(), [500, 5000], 150, threads=4, **kw))
    for a, b in zip(one, many):
        assert a.stats == b.stats and a.clt == b.clt and a.renewal == b.renewal
        for k in a.samples:
            assert np.array_equal(a.samples[k], b.samples[k])


def test_rows_and_ordering():
    rows = run_plan(ExperimentPlan(MaxOrder(2), [100, 1000, 10_000], 80))
    assert [r.n for r in rows] == [100, 1000, 10_000]
    for r in rows:
        s = r.samples
        assert len(s["d_last"]) == r.trials == 80
        assert np.all(s["min_depth"] <= s["d_last"]) and np.all(s["d_last"] <= s["height"])
        h = r.stats["height"]
        assert h.ci_low <= h.mean <= h.ci_high
        assert h.ratio == pytest.approx(h.mean / math.log(r.n))


def test_lazy_and_full_agree():
    full = run_plan(ExperimentPlan(Uniform(), [3000], 60, statistics=("d_last", "height")))[0]
    lazy = run_plan(ExperimentPlan(Uniform(), [3000], 60, statistics=("d_last",)))[0]
    assert np.array_equal(full.samples["d_last"], lazy.samples["d_last"])


def test_constant_has_zero_variance():
    row = run_plan(ExperimentPlan(Constant(0.5), [1000], 20, statistics=("d_last", "clt")))[0]
    assert row.stats["d_last"].variance == 0.0
    assert row.clt is None and "sigma = 0" in row.error


def test_clt_calibration():
    z = np.random.default_rng(0).standard_normal(10_000)
    n = 10**6
    mu, sigma = 1.0, 1.0
    d = z * sigma * math.sqrt(math.log(n) / mu**3) + math.log(n) / mu
    np.testing.assert_allclose(standardize(d, mu, sigma, n), z, atol=1e-12)
    c = clt_diagnostics(d, mu, sigma, n)
    assert c.ks < 1.36 / math.sqrt(z.size)
    assert all(c.passes().values())
    assert c.thresholds == CLT_THRESHOLDS


def test_clt_degenerate():
    with pytest.raises(DegenerateSigma):
        clt_diagnostics([3, 3, 3], 1.0, 0.0, 100)


def test_path_statistics():
    row = run_plan(ExperimentPlan(Uniform(), [10_000], 200, statistics=("renewal", "path_event", "rotation"),
                                  path_t=3, rotation_trials=20_000))[0]
    assert row.renewal["upper_violations"] == 0
    assert 0.0 <= row.path_event["ci_low"] <= row.path_event["estimate"] <= row.path_event["ci_high"]
    assert row.rotation["passed"]


def test_urrt_depth_is_poisson_binomial():
    # for uniform attachment D_n is a sum of independent Bernoulli(1/i), i <= n;
    # this exact law is what keeps the standardized depth visibly skewed at desk scale
    from sarrt.montecarlo import trial_keys
    from sarrt.tree_sim import trace_depths

    n = 1000
    pmf = np.array([1.0])
    for i in range(1, n + 1):
        q = 1.0 / i
        pmf = np.concatenate([pmf * (1 - q), [0.0]]) + np.concatenate([[0.0], pmf * q])
    d = trace_depths(n, Uniform(), trial_keys(9, n, 20_000))
    emp = np.bincount(d, minlength=pmf.size)[: pmf.size] / d.size
    assert 0.5 * np.abs(emp - pmf).sum() < 0.02
