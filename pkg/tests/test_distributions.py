import math

import numpy as np
import pytest
from scipy import integrate

from sarrt.distributions import (
    AtomMixture,
    Constant,
    InvalidLaw,
    InvalidTruncation,
    LawSpecError,
    MaxOrder,
    MinOrder,
    Power,
    Tabulated,
    Uniform,
    cumulant,
    neg_log_moments,
    parse_law,
    sample,
    truncate_bounded,
)
from sarrt.streams import RandomStream

BUILTIN = [Uniform(), MaxOrder(2), MaxOrder(5), MinOrder(2), MinOrder(4), Power(0.5), Power(3.0), Constant(0.3)]


def draws(law, m, seed=0):
    return law.sample_labels(RandomStream(seed, 0), np.arange(m))


def test_constant_sample():
    assert sample(Constant(0.5), RandomStream(1, 2)) == 0.5


def test_max1_is_uniform():
    s = RandomStream(9, 0)
    assert sample(MaxOrder(1), s) == RandomStream(9, 0).uniform_at(0)
    assert s.position == 1


def test_order_laws_consume_k_uniforms():
    s = RandomStream(2, 0)
    x = sample(MinOrder(3), s)
    assert s.position == 3
    assert x == RandomStream(2, 0).block(0, 3).min()


def test_max2_mean():
    x = draws(MaxOrder(2), 10**6)
    se = math.sqrt(1 / 18 / x.size)  # Var max(U1, U2) = 1/18
    assert abs(x.mean() - 2 / 3) < 3 * se


@pytest.mark.parametrize("law", BUILTIN, ids=lambda l: l.spec())
def test_samples_in_unit_interval(law):
    x = draws(law, 10**5)
    assert x.min() >= 0.0 and x.max() < 1.0


@pytest.mark.parametrize("law", BUILTIN[:-1], ids=lambda l: l.spec())
def test_sampler_matches_moments(law):
    ms = law.moments()
    y = -np.log(draws(law, 10**6, seed=5))
    assert abs(y.mean() - ms.mu) < 4 * ms.sigma / 1e3


def test_closed_form_moments():
    assert neg_log_moments(Uniform()).mu == 1.0 and Uniform().moments().sigma2 == 1.0
    m = MaxOrder(4).moments()
    assert (m.mu, m.sigma2) == (0.25, 1 / 16)
    m = MinOrder(2).moments()
    assert m.mu == pytest.approx(1.5, abs=1e-15) and m.sigma2 == pytest.approx(1.25, abs=1e-15)
    m = Power(2.5).moments()
    assert (m.mu, m.sigma2) == (2.5, 6.25)
    m = Constant(0.2).moments()
    assert m.mu == pytest.approx(-math.log(0.2)) and m.sigma2 == 0.0
    m = AtomMixture(0.1, Uniform()).moments()
    assert m.mu == math.inf and m.sigma2 == math.inf


def test_min_order_moments_against_quadrature():
    k = 3
    f = lambda x: k * (1 - x) ** (k - 1)
    mu = integrate.quad(lambda x: -math.log(x) * f(x), 0, 1)[0]
    m2 = integrate.quad(lambda x: math.log(x) ** 2 * f(x), 0, 1)[0]
    ms = MinOrder(k).moments()
    assert ms.mu == pytest.approx(mu, abs=1e-9)
    assert ms.sigma2 == pytest.approx(m2 - mu**2, abs=1e-9)


def test_tabulated_uniform_grid():
    x = np.linspace(0.0, 1.0, 4096)
    law = Tabulated.from_grid(x, np.ones_like(x))
    assert abs(law.moments().mu - 1.0) < 1e-6


def test_tabulated_csv(tmp_path):
    p = tmp_path / "tent.csv"
    p.write_text("x,density\n0,0\n0.5,2\n1,0\n")
    law = parse_law(f"table:{p}")
    mu = integrate.quad(lambda x: -math.log(x) * (4 * x if x < 0.5 else 4 * (1 - x)), 0, 1, points=[0.5])[0]
    assert law.moments().mu == pytest.approx(mu, abs=1e-10)
    assert law.cumulant(1.0) == pytest.approx(math.log(0.5), abs=1e-12)


def test_tabulated_normalizes():
    x = np.linspace(0.0, 1.0, 11)
    law = Tabulated.from_grid(x, 3.0 * np.ones_like(x))
    assert law.cumulant(0.0) == pytest.approx(0.0, abs=1e-12)


def test_tabulated_rejects_bad_grid():
    with pytest.raises(InvalidLaw):
        Tabulated.from_grid([0.0, 0.5, 0.4], [1, 1, 1])
    with pytest.raises(InvalidLaw):
        Tabulated.from_grid([0.0, 0.5, 1.0], [1, -1, 1])


def test_cumulant_examples():
    assert cumulant(Uniform(), 0.0) == 0.0
    assert cumulant(MaxOrder(3), 3.0) == pytest.approx(-math.log(2))
    assert cumulant(AtomMixture(0.25, Uniform()), 1.0) == pytest.approx(math.log(0.375))
    assert cumulant(AtomMixture(0.25, Uniform()), 0.0) == pytest.approx(math.log(0.75))
    assert cumulant(Power(2.0), 1.0) == pytest.approx(-math.log(3.0))
    assert cumulant(Constant(0.5), 2.0) == pytest.approx(2 * math.log(0.5))


def test_cumulant_off_domain_is_inf():
    assert cumulant(Uniform(), -1.0) == math.inf
    assert cumulant(Uniform(), -3.0) == math.inf
    assert cumulant(MaxOrder(3), -3.5) == math.inf
    assert cumulant(MaxOrder(3), -2.5) < math.inf
    assert cumulant(MinOrder(3), -1.0) == math.inf
    assert cumulant(Power(2.0), -0.5) == math.inf
    assert cumulant(AtomMixture(0.25, Uniform()), -0.1) == math.inf


def test_cumulant_matches_quadrature():
    for law, f in ((MinOrder(3), lambda x: 3 * (1 - x) ** 2), (Power(0.5), lambda x: 2 * x)):
        for lam in (-0.5, 0.7, 4.0):
            ref = math.log(integrate.quad(lambda x: x**lam * f(x), 0, 1)[0])
            assert cumulant(law, lam) == pytest.approx(ref, rel=1e-9, abs=1e-12)


def test_truncate_uniform_noop():
    t = truncate_bounded(Uniform(), 2.0)
    assert t.atom_mass == 0.0
    assert t.moments() == Uniform().moments()


def test_truncate_infinite_cap():
    for law in (Power(2.0), MinOrder(2)):
        t = truncate_bounded(law, math.inf)
        assert t.atom_mass == 0.0
        assert t.cumulant(1.3) == law.cumulant(1.3)


def test_truncate_power_atom_mass_by_mc():
    law = Power(2.0)
    t = truncate_bounded(law, 5.0)
    x = draws(law, 10**6, seed=11)
    freq = np.mean(law.density(x) > 5.0)
    assert abs(freq - t.atom_mass) < 3 * math.sqrt(t.atom_mass * (1 - t.atom_mass) / x.size)


def test_truncation_is_pathwise_below():
    for law, b in ((Power(2.0), 5.0), (Power(0.4), 2.0), (MinOrder(3), 2.0), (MaxOrder(3), 1.5)):
        t = truncate_bounded(law, b)
        s = RandomStream(4, 0)
        assert np.all(t.sample_labels(s, np.arange(10**4)) <= law.sample_labels(s, np.arange(10**4)))


def test_truncate_errors():
    with pytest.raises(InvalidTruncation):
        truncate_bounded(Constant(0.5), 2.0)
    with pytest.raises(InvalidTruncation):
        truncate_bounded(AtomMixture(0.2, Uniform()), 2.0)
    with pytest.raises(InvalidTruncation):
        truncate_bounded(Uniform(), 0.5)


def test_atom_mixture_no_nesting():
    with pytest.raises(InvalidLaw):
        AtomMixture(0.1, AtomMixture(0.2, Uniform()))


def test_parse_law():
    assert parse_law("uniform") == Uniform()
    assert parse_law("max:3") == MaxOrder(3)
    assert parse_law("min:2") == MinOrder(2)
    assert parse_law("pow:2.5") == Power(2.5)
    assert parse_law("const:0.5") == Constant(0.5)
    law = parse_law("atom:0.25+max:2")
    assert law.atom_mass == 0.25 and law.base == MaxOrder(2)
    assert parse_law(law.spec()) == law


@pytest.mark.parametrize("text,token", [
    ("gauss", "gauss"), ("max:x", "'x'"), ("pow:abc", "abc"), ("atom:0.1", "0.1"),
    ("atom:0.1+atom:0.2+uniform", "atom:0.2"), ("const:2", "const:2"),
])
def test_parse_errors_name_token(text, token):
    with pytest.raises(LawSpecError) as err:
        parse_law(text)
    assert token in str(err.value)
