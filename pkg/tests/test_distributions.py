import math

import numpy as np
import pytest
from scipy import stats

from caltol.distributions import (Beta, Gamma, Normal, NormalMixture, Pareto,
                                  Sample, binom_cdf, binom_pmf, ecdf_content,
                                  empirical_quantile, normal_quantile,
                                  reg_inc_beta, sample_dist, true_cdf,
                                  true_pdf, true_quantile)

FAMILIES = [
    Normal(0, 1),
    Normal(10, 3),
    Gamma(2, 1),
    Pareto(1, 2),
    Beta(5, 2),
    NormalMixture((0.9, 0.1), (0.0, 0.0), (1.0, 10.0)),
]


def _brute_binom_cdf(k, n, p):
    return sum(math.comb(n, j) * p**j * (1 - p) ** (n - j) for j in range(k + 1))


# ---------------------------------------------------------------------------
# sampling
# ---------------------------------------------------------------------------

def test_sampling_deterministic():
    a = sample_dist(Normal(0, 1), 5, 42)
    b = sample_dist(Normal(0, 1), 5, 42)
    assert np.array_equal(a.values, b.values)
    c = sample_dist(Normal(0, 1), 5, 43)
    assert not np.array_equal(a.values, c.values)


def test_mixture_variance_matches_moment_identity():
    spec = NormalMixture((0.9, 0.1), (0.0, 0.0), (1.0, 10.0))
    s = sample_dist(spec, 100_000, 7)
    assert np.var(s.values) == pytest.approx(10.9, rel=0.05)


def test_pareto_sample_quantile_matches_formula():
    s = sample_dist(Pareto(1, 2), 100_000, 11)
    assert empirical_quantile(s, 0.9) == pytest.approx(0.1 ** -0.5, rel=0.02)


@pytest.mark.parametrize("spec", FAMILIES, ids=lambda s: type(s).__name__)
def test_sampling_ks_against_true_cdf(spec):
    s = sample_dist(spec, 100_000, 2024)
    res = stats.kstest(s.values, lambda x: np.array([true_cdf(spec, v) for v in x]))
    assert res.pvalue > 0.001


def test_invalid_parameters_raise():
    with pytest.raises(ValueError):
        Normal(0, -1)
    with pytest.raises(ValueError):
        Gamma(0, 1)
    with pytest.raises(ValueError):
        Pareto(1, 0)
    with pytest.raises(ValueError):
        Beta(5, 0)
    with pytest.raises(ValueError):
        NormalMixture((0.5, 0.4), (0, 0), (1, 1))  # weights sum != 1
    with pytest.raises(ValueError):
        sample_dist(Normal(0, 1), 0, 1)


# ---------------------------------------------------------------------------
# cdf / quantile / pdf
# ---------------------------------------------------------------------------

def test_normal_quantile_value():
    assert true_quantile(Normal(0, 1), 0.9) == pytest.approx(1.2816, abs=1e-4)


def test_pareto_cdf_and_quantile():
    assert true_cdf(Pareto(1, 2), 1.0) == 0.0
    assert true_quantile(Pareto(1, 2), 0.75) == pytest.approx(2.0, abs=1e-12)


@pytest.mark.parametrize("spec", FAMILIES, ids=lambda s: type(s).__name__)
def test_quantile_cdf_inverse(spec):
    for p in np.arange(0.01, 1.0, 0.01):
        q = true_quantile(spec, p)
        assert abs(true_cdf(spec, q) - p) <= 1e-8


@pytest.mark.parametrize("spec", FAMILIES, ids=lambda s: type(s).__name__)
def test_quantile_of_cdf_bounded(spec):
    for x in (0.3, 0.9, 1.7, 3.2):
        p = true_cdf(spec, x)
        if 0.0 < p < 1.0:
            assert true_quantile(spec, p) <= x + 1e-9


@pytest.mark.parametrize("spec", FAMILIES, ids=lambda s: type(s).__name__)
def test_pdf_nonnegative(spec):
    for x in np.linspace(-3, 6, 25):
        assert true_pdf(spec, x) >= 0.0


def test_quantile_domain_errors():
    for bad in (0.0, 1.0, -0.2, 1.7):
        with pytest.raises(ValueError):
            true_quantile(Normal(0, 1), bad)


# ---------------------------------------------------------------------------
# empirical quantities
# ---------------------------------------------------------------------------

def test_empirical_quantile_examples():
    s = Sample([1, 2, 3, 4, 5])
    assert empirical_quantile(s, 0.5) == 3
    assert empirical_quantile(s, 0.4) == 2


def test_empirical_quantile_air_lead(air_lead):
    assert empirical_quantile(air_lead, 0.75) == 350


def test_empirical_quantile_is_inf_definition(rng):
    for _ in range(25):
        n = int(rng.integers(3, 60))
        s = Sample(rng.normal(size=n))
        tau = float(rng.uniform(0.05, 0.95))
        q = empirical_quantile(s, tau)
        sv = s.sorted_values
        eps = min(np.diff(np.unique(sv)), default=1.0) / 10 if len(np.unique(sv)) > 1 else 0.5
        assert np.mean(sv <= q) >= tau
        assert np.mean(sv <= q - eps) < tau


def test_empty_sample_rejected():
    with pytest.raises(ValueError):
        Sample([])
    with pytest.raises(ValueError):
        Sample([1.0, np.nan])
    with pytest.raises(ValueError):
        Sample([np.inf])


def test_sample_is_immutable():
    s = Sample([3.0, 1.0, 2.0])
    with pytest.raises(ValueError):
        s.values[0] = 9.0
    assert list(s.sorted_values) == [1.0, 2.0, 3.0]


def test_ecdf_content_examples():
    assert ecdf_content(Sample([1, 2, 3, 4]), 2, 3) == 0.5
    s = Sample([5, 1, 9])
    assert ecdf_content(s, 0, 10) == 1.0
    assert ecdf_content(s, -np.inf, np.inf) == 1.0
    assert ecdf_content(Sample([1, 1, 1]), 1, 1) == 1.0
    with pytest.raises(ValueError):
        ecdf_content(s, 3, 2)


# ---------------------------------------------------------------------------
# special functions
# ---------------------------------------------------------------------------

def test_binom_cdf_example():
    assert binom_cdf(13, 15, 0.75) == pytest.approx(0.9198, abs=1e-4)


def test_binom_cdf_matches_brute_force():
    for n in (1, 2, 7, 15, 50, 120, 500):
        for p in (0.01, 0.1, 0.5, 0.75, 0.9, 0.99):
            for k in sorted({0, 1, n // 3, n // 2, n - 1, n}):
                assert binom_cdf(k, n, p) == pytest.approx(
                    _brute_binom_cdf(k, n, p), abs=1e-10)


def test_binom_cdf_beta_identity():
    for n, k, p in [(15, 4, 0.3), (40, 20, 0.6), (9, 0, 0.2)]:
        assert binom_cdf(k, n, p) == pytest.approx(
            1.0 - reg_inc_beta(k + 1, n - k, p), abs=1e-12)


def test_binom_pmf_sums_to_cdf():
    n, p = 23, 0.37
    acc = 0.0
    for k in range(n + 1):
        acc += binom_pmf(k, n, p)
        assert acc == pytest.approx(binom_cdf(k, n, p), abs=1e-11)


def test_reg_inc_beta_uniform_case():
    for x in np.linspace(0, 1, 21):
        assert reg_inc_beta(1, 1, x) == pytest.approx(x, abs=1e-13)


def test_reg_inc_beta_against_scipy():
    from scipy.special import betainc
    for a in (0.3, 1.0, 2.5, 14.0, 120.0):
        for b in (0.4, 1.0, 3.0, 55.0):
            for x in (0.001, 0.2, 0.5, 0.8, 0.999):
                assert reg_inc_beta(a, b, x) == pytest.approx(
                    float(betainc(a, b, x)), abs=1e-10)


def test_reg_inc_beta_domain():
    with pytest.raises(ValueError):
        reg_inc_beta(-1, 2, 0.5)
    with pytest.raises(ValueError):
        reg_inc_beta(1, 2, 1.5)


def test_normal_quantile_values():
    assert normal_quantile(0.5) == 0.0
    for p in (1e-8, 1e-3, 0.025, 0.3, 0.7, 0.975, 1 - 1e-6):
        assert normal_quantile(p) == pytest.approx(float(stats.norm.ppf(p)), abs=1e-10)
    with pytest.raises(ValueError):
        normal_quantile(0.0)
    with pytest.raises(ValueError):
        normal_quantile(1.0)
