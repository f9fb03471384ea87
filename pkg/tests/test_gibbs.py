import math

import numpy as np
import pytest

from caltol.distributions import Normal, Sample, empirical_quantile, sample_dist
from caltol.gibbs import (GibbsSpec1D, GibbsSpec2D, MCMCConfig, NormalPrior,
                          UniformPrior, check_loss, log_gibbs_1d, log_gibbs_2d,
                          sample_posterior_1d, sample_posterior_2d)


# ---------------------------------------------------------------------------
# check loss
# ---------------------------------------------------------------------------

def test_check_loss_values():
    assert check_loss(0.0, 0.9) == 0.0
    assert check_loss(1.0, 0.9) == pytest.approx(0.9)
    assert check_loss(-1.0, 0.9) == pytest.approx(0.1)
    assert check_loss(-2.0, 0.25) == pytest.approx(1.5)


def test_check_loss_vectorized_nonnegative(rng):
    r = rng.normal(size=200)
    out = check_loss(r, 0.3)
    assert out.shape == r.shape
    assert np.all(out >= 0)


def test_check_loss_tau_domain():
    with pytest.raises(ValueError):
        check_loss(1.0, 0.0)


# ---------------------------------------------------------------------------
# 1d log density
# ---------------------------------------------------------------------------

def test_grid_argmax_is_empirical_quantile(rng):
    for _ in range(20):
        n = int(rng.integers(5, 80))
        s = Sample(rng.normal(size=n))
        tau = float(rng.uniform(0.05, 0.95))
        eta = float(rng.uniform(0.2, 5.0))
        spec = GibbsSpec1D(tau, eta)
        vals = [log_gibbs_1d(q, s, spec) for q in s.sorted_values]
        argmax = s.sorted_values[int(np.argmax(vals))]
        assert argmax == empirical_quantile(s, tau)


def test_doubling_eta_doubles_log_density_gap(rng):
    s = Sample(rng.normal(size=30))
    q1, q2 = 0.1, 1.7
    g1 = log_gibbs_1d(q1, s, GibbsSpec1D(0.7, 1.3)) - log_gibbs_1d(q2, s, GibbsSpec1D(0.7, 1.3))
    g2 = log_gibbs_1d(q1, s, GibbsSpec1D(0.7, 2.6)) - log_gibbs_1d(q2, s, GibbsSpec1D(0.7, 2.6))
    assert g2 == pytest.approx(2.0 * g1, rel=1e-12)


def test_single_point_log_density_is_half_abs():
    s = Sample([0.0])
    spec = GibbsSpec1D(0.5, 1.0)
    for q in (-3.0, -0.5, 0.0, 1.25, 4.0):
        assert log_gibbs_1d(q, s, spec) == pytest.approx(-0.5 * abs(q), abs=1e-14)


def test_uniform_prior_support():
    s = Sample([0.0, 1.0])
    spec = GibbsSpec1D(0.5, 1.0, prior=UniformPrior(-1.0, 2.0))
    assert math.isfinite(log_gibbs_1d(0.5, s, spec))
    assert log_gibbs_1d(5.0, s, spec) == -math.inf


def test_normal_prior_shifts_density():
    s = Sample([0.0, 1.0])
    flat = GibbsSpec1D(0.5, 1.0)
    norm = GibbsSpec1D(0.5, 1.0, prior=NormalPrior(0.0, 1.0))
    q = 2.0
    assert log_gibbs_1d(q, s, norm) == pytest.approx(log_gibbs_1d(q, s, flat) - 2.0)


# ---------------------------------------------------------------------------
# 2d log density
# ---------------------------------------------------------------------------

def test_jacobian_term_isolated(rng):
    s = Sample(rng.normal(size=25))
    spec = GibbsSpec2D(0.25, 0.75, 1.4)
    th1 = 0.3
    a, b = -0.2, 0.9

    def loss_only(t2):
        q_u = th1 + math.exp(t2)
        rl = s.values - th1
        ru = s.values - q_u
        return -spec.eta * float(np.sum(rl * (0.25 - (rl < 0))) + np.sum(ru * (0.75 - (ru < 0))))

    diff = log_gibbs_2d(th1, a, s, spec) - log_gibbs_2d(th1, b, s, spec)
    assert diff == pytest.approx((loss_only(a) - loss_only(b)) + (a - b), abs=1e-10)


def test_tiny_eta_reduces_to_jacobian():
    s = Sample([0.0, 1.0])
    spec = GibbsSpec2D(0.25, 0.75, 1e-300)
    for t2 in (-1.0, 0.0, 2.0):
        assert log_gibbs_2d(0.0, t2, s, spec) == pytest.approx(t2, abs=1e-12)


def test_two_point_hand_value():
    # s = {0, 1}, tauL=.25, tauU=.75, eta=1, theta=(0, 0):
    # rho_.25(0)+rho_.25(1)+rho_.75(-1)+rho_.75(0) = 0 + .25 + .25 + 0 = 0.5
    s = Sample([0.0, 1.0])
    spec = GibbsSpec2D(0.25, 0.75, 1.0)
    assert log_gibbs_2d(0.0, 0.0, s, spec) == pytest.approx(-0.5, abs=1e-14)


def test_theta2_gradient_matches_central_difference(rng):
    s = Sample(rng.normal(size=40))
    spec = GibbsSpec2D(0.2, 0.8, 1.7)
    th1, th2 = 0.05, 0.4  # away from residual kinks (checked below)
    q_u = th1 + math.exp(th2)
    assert np.min(np.abs(s.values - q_u)) > 1e-3
    # analytic: d/dt2 = eta * e^t2 * sum(tau_u - 1{y < q_u}) + 1
    grad = spec.eta * math.exp(th2) * float(np.sum(0.8 - (s.values < q_u))) + 1.0
    h = 1e-7
    num = (log_gibbs_2d(th1, th2 + h, s, spec) - log_gibbs_2d(th1, th2 - h, s, spec)) / (2 * h)
    assert num == pytest.approx(grad, rel=1e-5)


# ---------------------------------------------------------------------------
# samplers
# ---------------------------------------------------------------------------

def test_1d_sampler_deterministic():
    s = sample_dist(Normal(0, 1), 50, 3)
    cfg = MCMCConfig(n_draws=500, burn_in=100)
    a = sample_posterior_1d(s, GibbsSpec1D(0.8, 1.0), cfg, seed=9)
    b = sample_posterior_1d(s, GibbsSpec1D(0.8, 1.0), cfg, seed=9)
    assert np.array_equal(a.draws, b.draws)


def test_1d_posterior_centered_on_sample_quantile():
    s = sample_dist(Normal(0, 1), 200, 21)
    d = sample_posterior_1d(s, GibbsSpec1D(0.9, 1.95), MCMCConfig(), seed=4)
    target = empirical_quantile(s, 0.9)
    assert abs(np.mean(d.draws) - target) < 3.0 * np.std(d.draws)


def test_1d_posterior_sd_shrinks_with_eta():
    s = sample_dist(Normal(0, 1), 120, 5)
    cfg = MCMCConfig(n_draws=1500, burn_in=400)
    sd = {}
    for eta in (1.0, 4.0):
        vals = [np.std(sample_posterior_1d(s, GibbsSpec1D(0.9, eta), cfg, seed=100 + r).draws)
                for r in range(10)]
        sd[eta] = np.mean(vals)
    assert sd[4.0] < sd[1.0]


def test_1d_draws_bounded(rng):
    for seed in range(5):
        s = Sample(rng.normal(size=int(rng.integers(5, 60))))
        d = sample_posterior_1d(s, GibbsSpec1D(0.9, 0.5), MCMCConfig(n_draws=800, burn_in=200),
                                seed=seed)
        data_range = s.sorted_values[-1] - s.sorted_values[0]
        iqr = max(s.iqr(), 1e-12)
        assert np.max(np.abs(d.draws)) < np.max(np.abs(s.values)) + data_range + 50 * iqr


def test_1d_uniform_prior_respected():
    s = sample_dist(Normal(0, 1), 60, 8)
    prior = UniformPrior(-0.5, 0.5)
    d = sample_posterior_1d(s, GibbsSpec1D(0.9, 0.3, prior=prior),
                            MCMCConfig(n_draws=2000, burn_in=300), seed=1)
    assert np.all(d.draws >= -0.5) and np.all(d.draws <= 0.5)


def test_1d_mh_sampler_works():
    s = sample_dist(Normal(0, 1), 100, 13)
    d = sample_posterior_1d(s, GibbsSpec1D(0.5, 2.0),
                            MCMCConfig(n_draws=3000, burn_in=800, sampler="rwmh"), seed=2)
    assert 0.05 < d.acceptance_rate < 0.9
    assert abs(np.mean(d.draws) - empirical_quantile(s, 0.5)) < 3 * np.std(d.draws)


def test_eta_validation_and_init_guard():
    with pytest.raises(ValueError):
        GibbsSpec1D(0.5, 0.0)
    with pytest.raises(ValueError):
        GibbsSpec1D(0.5, -1.0)
    # loss overflow at init -> initialization error
    s = Sample([-1e308, 1e308])
    with pytest.raises(RuntimeError):
        sample_posterior_1d(s, GibbsSpec1D(0.5, 1.0), MCMCConfig(n_draws=100), seed=0)


def test_mcmc_config_validation():
    with pytest.raises(ValueError):
        MCMCConfig(n_draws=50)
    with pytest.raises(ValueError):
        MCMCConfig(thin=0)
    with pytest.raises(ValueError):
        MCMCConfig(sampler="gibbsy")


def test_2d_pairs_strictly_ordered(rng):
    s = Sample(rng.normal(size=35))
    j = sample_posterior_2d(s, GibbsSpec2D(0.1, 0.9, 0.8),
                            MCMCConfig(n_draws=1500, burn_in=400), seed=14)
    assert np.all(j.q_upper > j.q_lower)


def test_2d_deterministic_and_centered():
    su = Sample(np.random.default_rng(11).random(300))
    cfg = MCMCConfig(n_draws=2500, burn_in=700)
    a = sample_posterior_2d(su, GibbsSpec2D(0.25, 0.75, 2.0), cfg, seed=3)
    b = sample_posterior_2d(su, GibbsSpec2D(0.25, 0.75, 2.0), cfg, seed=3)
    assert np.array_equal(a.pairs, b.pairs)
    ql, qu = empirical_quantile(su, 0.25), empirical_quantile(su, 0.75)
    assert abs(np.mean(a.q_lower) - ql) < 3 * np.std(a.q_lower)
    assert abs(np.mean(a.q_upper) - qu) < 3 * np.std(a.q_upper)


def test_2d_slice_sampler_variant():
    su = Sample(np.random.default_rng(5).normal(size=80))
    j = sample_posterior_2d(su, GibbsSpec2D(0.25, 0.75, 1.5),
                            MCMCConfig(n_draws=1500, burn_in=400, sampler="slice"), seed=6)
    assert j.acceptance_rate is None
    assert np.all(j.q_upper > j.q_lower)


def test_2d_degenerate_gap_initialization():
    # heavy ties make the tau_l and tau_u sample quantiles coincide
    s = Sample([1.0] * 10 + [2.0])
    j = sample_posterior_2d(s, GibbsSpec2D(0.25, 0.75, 1.0),
                            MCMCConfig(n_draws=500, burn_in=200), seed=0)
    assert np.all(np.isfinite(j.pairs))
