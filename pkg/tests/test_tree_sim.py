import math

import numpy as np
import pytest

from sarrt.distributions import Constant, MaxOrder, Power, Uniform
from sarrt.streams import RandomStream, derive_key
from sarrt.tree_sim import (
    CapacityExceeded,
    LazyTree,
    build_depths,
    path_event_probability,
    renewal_bounds,
    renewal_bounds_batch,
    rotation_inequality_check,
    summarize,
    trace_depths,
    trace_path,
)


def m_ary_depth(i, m):
    # node i hangs below i // m, so its depth counts the base-m digits of i
    d = 0
    while i > 0:
        i //= m
        d += 1
    return d


def test_single_node():
    for law in (Uniform(), MaxOrder(3), Constant(0.9)):
        t = build_depths(1, law, RandomStream(1, 0))
        assert t.depths.tolist() == [0, 1]
        o = summarize(t)
        assert (o.d_last, o.height, o.min_depth) == (1, 1, 1)


def test_binary_tree():
    t = build_depths(8, Constant(0.5), RandomStream(0, 0), keep_parents=True)
    assert t.parents[1:].tolist() == [0, 1, 1, 2, 2, 3, 3, 4]
    assert t.depths.tolist() == [0, 1, 2, 2, 3, 3, 3, 3, 4]
    out = summarize(t)
    assert (out.d_last, out.height, out.min_depth) == (4, 4, 3)


@pytest.mark.parametrize("m", [2, 3, 5])
def test_m_ary_closed_form(m):
    n = 10**4
    d = build_depths(n, Constant(1 / m), RandomStream(0, 0)).depths
    assert all(d[i] == m_ary_depth(i, m) for i in range(n + 1))


def test_recursion_invariants():
    t = build_depths(10**5, Uniform(), RandomStream(3, 1), keep_parents=True)
    p, d = t.parents, t.depths
    assert d[0] == 0
    assert np.all(p[1:] < np.arange(1, t.n + 1)) and np.all(p[1:] >= 0)
    assert np.array_equal(d[1:], d[p[1:]] + 1)
    assert summarize(t).height == d.max()


def test_outcome_ordering():
    for trial in range(20):
        o = summarize(build_depths(5000, Power(2.0), RandomStream(8, trial)))
        assert o.min_depth <= o.d_last <= o.height


def test_determinism():
    a = build_depths(10**4, MaxOrder(2), RandomStream(5, 6)).depths
    b = build_depths(10**4, MaxOrder(2), RandomStream(5, 6)).depths
    c = build_depths(10**4, MaxOrder(2), RandomStream(5, 7)).depths
    assert np.array_equal(a, b) and not np.array_equal(a, c)


def test_capacity():
    with pytest.raises(CapacityExceeded):
        build_depths(2**31, Uniform(), RandomStream(0, 0))
    with pytest.raises(CapacityExceeded):
        build_depths(1000, MaxOrder(5), RandomStream(0, 0), node_budget=1000)


def test_trace_examples():
    assert trace_path(RandomStream(0, 0), 1, Uniform()).labels == (1, 0)
    assert trace_path(RandomStream(0, 0), 13, Constant(0.5)).labels == (13, 6, 3, 1, 0)


def test_lazy_trace_matches_full_build():
    n = 10**5
    law = Uniform()
    keys = np.array([derive_key(4, i) for i in range(100)], dtype=np.uint64)
    fast = trace_depths(n, law, keys)
    for i, key in enumerate(keys):
        s = RandomStream.from_key(key)
        t = build_depths(n, law, s, keep_parents=True)
        tr = trace_path(t)
        assert tr.depth == t.depths[n] == fast[i]
        if i < 10:
            assert trace_path(s, n, law).labels == tr.labels


def test_path_trace_shape():
    tr = LazyTree(MaxOrder(2), RandomStream(1, 1)).trace(10**6)
    assert tr.labels[-1] == 0
    assert all(a > b for a, b in zip(tr.labels, tr.labels[1:]))


def test_max_order_parents_dominate_uniform():
    # the max of k uniforms is at least the first of them, draw by draw
    n = 10**4
    s = RandomStream(2, 2)
    labels = np.arange(1, n + 1)
    first = np.floor(labels * s.uniforms_at(3 * labels)).astype(np.int64)
    hi = build_depths(n, MaxOrder(3), s, keep_parents=True).parents
    assert np.all(hi[1:] >= first)
    lazy = LazyTree(MaxOrder(3), s)
    cur = n
    while cur > 0:
        nxt = lazy.parent(cur)
        assert nxt >= first[cur - 1]
        cur = nxt


def test_renewal_constant():
    for n in (10**4, 10**6):
        r = renewal_bounds(n, Constant(0.5), RandomStream(0, 0))
        assert r.d_hat == math.ceil(math.log(n) / math.log(2))
        assert abs(r.d_exact - r.d_hat) <= 1


def test_renewal_upper_bound_pathwise():
    keys = np.array([derive_key(1, i) for i in range(2000)], dtype=np.uint64)
    for law in (Uniform(), Power(2.0), MaxOrder(2)):
        r = renewal_bounds_batch(10**5, law, keys)
        assert np.all(r["d_exact"] <= r["d_hat"])
        assert np.array_equal(r["d_exact"], trace_depths(10**5, law, keys))


def test_renewal_needs_n3():
    with pytest.raises(ValueError):
        renewal_bounds(2, Uniform(), RandomStream(0, 0))


def test_path_event_t0():
    assert path_event_probability("A", 100, Uniform(), 0, 0.5, 200).estimate == 1.0


def test_path_event_one_step():
    n, beta = 1000, 0.999
    est = path_event_probability("A", n, Uniform(), 1, beta, 100_000, seed=3)
    xs = np.arange(2 * n + 1, 3 * n + 1)
    # P{floor(xU) >= c} = (x - ceil(c)) / x
    exact = np.mean((xs - math.ceil(n * beta)) / xs)
    assert est.ci_low <= exact <= est.ci_high
    assert est.meta["window"] == (2 * n + 1, 3 * n)


def test_path_event_b_window():
    est = path_event_probability("B", 500, Uniform(), 2, 0.6, 1000)
    assert est.meta["window"] == (501, 1000)
    assert est.meta["tree_labels"] == (0, 1000)
    with pytest.raises(ValueError):
        path_event_probability("C", 10, Uniform(), 1, 0.5, 10)


def test_rotation_trivial_cases():
    r = rotation_inequality_check(Uniform(), 1, 0.7, 10_000)
    assert r.lhs == r.rhs and r.passed
    r = rotation_inequality_check(Constant(0.8), 5, 0.7, 1000)
    assert r.lhs == r.rhs == 1.0 and r.passed
