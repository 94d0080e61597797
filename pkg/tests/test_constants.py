import math

import pytest

from sarrt.constants import (
    BracketFailure,
    depth_coefficients,
    format_table1,
    solve_alpha_max,
    solve_alpha_min,
    solve_constants,
    table1,
)
from sarrt.distributions import AtomMixture, Constant, MaxOrder, MinOrder, Power, Uniform
from sarrt.rate_function import RateEvaluator, psi

TABLE1 = [
    (1, 0, 1, math.e, 0, 1, math.e),
    (2, 0.3734, 2, 4.3111, 0, 0.6667, 1.6738),
    (3, 0.9137, 3, 5.7640, 0, 0.5455, 1.3025),
    (4, 1.5296, 4, 7.1451, 0, 0.4800, 1.1060),
    (5, 2.1925, 5, 8.4805, 0, 0.4380, 0.9818),
]


def test_uniform():
    ev = RateEvaluator(Uniform())
    assert solve_alpha_max(ev) == pytest.approx(math.e, abs=1e-6)
    assert solve_alpha_min(ev) == 0.0


def test_table_values():
    assert solve_alpha_max(RateEvaluator(MaxOrder(4))) == pytest.approx(7.1451, abs=5e-4)
    assert solve_alpha_min(RateEvaluator(MaxOrder(2))) == pytest.approx(0.3734, abs=5e-4)
    assert solve_alpha_min(RateEvaluator(MinOrder(3))) == 0.0


def test_point_mass():
    c = solve_constants(Constant(0.5))
    assert c.alpha_max == c.alpha_min == c.one_over_mu == pytest.approx(1 / math.log(2))
    assert c.clt_scale is None


def test_zero_atom_is_uniform():
    assert solve_alpha_max(RateEvaluator(AtomMixture(0.0, Power(1.0)))) == pytest.approx(math.e, abs=1e-6)


def test_atom_law_has_no_min_depth_constant():
    c = solve_constants(AtomMixture(0.25, Uniform()))
    assert c.one_over_mu == 0.0 and c.alpha_min == 0.0
    assert psi(RateEvaluator(AtomMixture(0.25, Uniform())), c.alpha_max) == pytest.approx(1.0, abs=1e-6)


def test_depth_coefficients():
    for k in (1, 2, 5):
        one, clt = depth_coefficients(MaxOrder(k).moments())
        assert one == pytest.approx(k) and clt == pytest.approx(math.sqrt(k))
    assert depth_coefficients(MinOrder(2).moments())[0] == pytest.approx(2 / 3)
    assert depth_coefficients(Constant(0.3).moments())[1] is None
    assert depth_coefficients(AtomMixture(0.1, Uniform()).moments()) == (0.0, None)


def test_table1_rows():
    for got, want in zip(table1(), TABLE1):
        assert got[0] == want[0]
        for g, w in zip(got[1:], want[1:]):
            assert g == pytest.approx(w, abs=5e-4)


def test_format_table1():
    text = format_table1(table1())
    assert "2  0.3734  2  4.3111  0  0.6667  1.6738" in text.splitlines()
    assert text.splitlines()[1] == "1  0  1  2.7183  0  1  2.7183"


@pytest.mark.parametrize("law", [Uniform(), MaxOrder(3), MinOrder(2), Power(0.5), Power(3.0)], ids=repr)
def test_roots_and_ordering(law):
    ev = RateEvaluator(law)
    c = solve_constants(ev)
    assert c.alpha_min < c.one_over_mu < c.alpha_max
    assert psi(ev, c.alpha_max) == pytest.approx(1.0, abs=1e-6)
    if c.alpha_min > 0:
        assert psi(ev, c.alpha_min) == pytest.approx(1.0, abs=1e-6)
    assert c.diagnostics["alpha_max"]["iterations"] <= 200


def test_monotone_in_k():
    rows = table1()
    assert all(a[3] < b[3] for a, b in zip(rows, rows[1:]))
    assert all(a[1] < b[1] for a, b in zip(rows[1:], rows[2:]))


def test_bracket_failure():
    class Flat(RateEvaluator):
        def legendre_dual(self, z):
            return 0.0

    with pytest.raises(BracketFailure):
        solve_alpha_max(Flat(Uniform()))
