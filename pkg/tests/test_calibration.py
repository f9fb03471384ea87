import math

import numpy as np
import pytest

from caltol.calibration import (REGIMES, OneSidedLower, OneSidedUpper,
                                RMSchedule, TwoSidedContent, TwoSidedQuantile,
                                calibrated_ti, estimate_coverage,
                                grid_search_calibrate, plugin_eta0,
                                robbins_monro_calibrate)
from caltol.distributions import (Normal, Sample, Pareto, ecdf_content,
                                  empirical_quantile, sample_dist)
from caltol.gibbs import GibbsSpec1D, MCMCConfig, sample_posterior_1d
from caltol.intervals import upper_bound_from_draws
from caltol.seeds import derive_seed, rng_from


# ---------------------------------------------------------------------------
# objectives and schedules
# ---------------------------------------------------------------------------

def test_objective_validation():
    with pytest.raises(ValueError):
        OneSidedUpper(1.2, 0.9)
    with pytest.raises(ValueError):
        TwoSidedQuantile(0.8, 0.2, 0.9)
    obj = TwoSidedContent(0.025, 0.975, 0.95)
    assert obj.content == pytest.approx(0.95)
    obj2 = TwoSidedContent(0.05, 0.95, 0.9, content=0.85)
    assert obj2.content == 0.85
    assert OneSidedLower(0.9, 0.85).tau == pytest.approx(0.1)


def test_schedule_validation():
    with pytest.raises(ValueError):
        RMSchedule(B=10)
    with pytest.raises(ValueError):
        RMSchedule(bracket=(1.0, 0.5))
    with pytest.raises(ValueError):
        RMSchedule(eta0=-2.0)
    with pytest.raises(ValueError):
        RMSchedule(gamma=1.5)
    assert REGIMES["conservative"].max_iter == 6
    assert REGIMES["aggressive"].c == 1.75
    assert REGIMES["moderate"].B == 200


# ---------------------------------------------------------------------------
# plug-in initialization
# ---------------------------------------------------------------------------

def test_plugin_normal_matches_closed_form():
    s = sample_dist(Normal(0, 1), 10_000, 7)
    eta0 = plugin_eta0(s, OneSidedUpper(0.9, 0.9))
    assert eta0 == pytest.approx(1.950, rel=0.15)


def test_plugin_uniform_matches_closed_form():
    s = Sample(rng_from(3).random(20_000))
    eta0 = plugin_eta0(s, OneSidedUpper(0.5, 0.9))
    assert eta0 == pytest.approx(4.0, rel=0.2)


def test_plugin_degenerate_sample_warns_to_floor():
    s = Sample([2.5] * 30)
    with pytest.warns(UserWarning):
        eta0 = plugin_eta0(s, OneSidedUpper(0.9, 0.9))
    assert eta0 == RMSchedule().bracket[0]


def test_plugin_needs_five_points():
    with pytest.raises(ValueError):
        plugin_eta0(Sample([1.0, 2.0]), OneSidedUpper(0.9, 0.9))


def test_plugin_two_sided_reduces_to_one_sided_shape():
    s = sample_dist(Normal(0, 1), 5_000, 3)
    one = plugin_eta0(s, OneSidedUpper(0.9, 0.9))
    two = plugin_eta0(s, TwoSidedQuantile(0.1, 0.9, 0.9))
    # by symmetry of the normal, the two-sided value matches the one-sided one
    assert two == pytest.approx(one, rel=0.25)


# ---------------------------------------------------------------------------
# bootstrap coverage
# ---------------------------------------------------------------------------

def test_coverage_deterministic(fast_mcmc):
    s = sample_dist(Normal(0, 1), 22, 42)
    obj = OneSidedUpper(0.9, 0.9)
    a = estimate_coverage(s, 2.0, obj, 100, fast_mcmc, 11)
    b = estimate_coverage(s, 2.0, obj, 100, fast_mcmc, 11)
    assert a == b


def test_coverage_diffuse_and_concentrated_limits(fast_mcmc):
    s = sample_dist(Normal(0, 1), 22, 42)
    obj = OneSidedUpper(0.9, 0.9)
    assert estimate_coverage(s, 1e-3, obj, 200, fast_mcmc, 5) >= 0.95
    assert estimate_coverage(s, 1e3, obj, 200, fast_mcmc, 5) <= 0.75


def test_coverage_validation(fast_mcmc):
    s = sample_dist(Normal(0, 1), 22, 1)
    with pytest.raises(ValueError):
        estimate_coverage(s, 0.0, OneSidedUpper(0.9, 0.9), 50, fast_mcmc, 0)
    with pytest.raises(ValueError):
        estimate_coverage(Sample([1.0]), 1.0, OneSidedUpper(0.9, 0.9), 50, fast_mcmc, 0)


def test_one_sided_quantile_and_content_success_agree(fast_mcmc):
    # replicate-by-replicate equality of the two success definitions
    rng = rng_from(99)
    for fix in range(4):
        s = Sample(rng.normal(size=25))
        obj = OneSidedUpper(0.9, 0.9)
        target = empirical_quantile(s, 0.9)
        for b in range(30):
            boot = Sample(rng.choice(s.values, size=s.n, replace=True))
            d = sample_posterior_1d(boot, GibbsSpec1D(0.9, 2.0),
                                    MCMCConfig(n_draws=150, burn_in=50),
                                    seed=derive_seed(fix, b))
            u = upper_bound_from_draws(d, obj.alpha)
            quantile_success = target <= u
            content_success = ecdf_content(s, -math.inf, u) >= obj.content
            assert quantile_success == content_success


# ---------------------------------------------------------------------------
# Robbins-Monro
# ---------------------------------------------------------------------------

def test_rm_one_step_arithmetic(fast_mcmc):
    s = sample_dist(Normal(0, 1), 22, 0)
    sched = RMSchedule(eta0=2.8, c=0.5, gamma=0.75, max_iter=1)
    res = robbins_monro_calibrate(s, OneSidedUpper(0.9, 0.9), sched, fast_mcmc, 0,
                                  coverage_fn=lambda e, step: 0.95)
    assert res.eta_hat == pytest.approx(2.825, abs=1e-12)
    assert res.trajectory == ((0, 2.8, 0.95),)


def test_rm_step_sequence_and_bracket_safety(fast_mcmc):
    s = sample_dist(Normal(0, 1), 22, 0)
    sched = RMSchedule(eta0=1.0, c=2.0, gamma=0.6, max_iter=12, bracket=(0.5, 1.5))
    calls = []

    def fn(eta, step):
        calls.append((step, eta))
        return 1.0 if step % 2 == 0 else 0.0  # violent oscillation

    res = robbins_monro_calibrate(s, OneSidedUpper(0.9, 0.9), sched, fast_mcmc, 0,
                                  coverage_fn=fn)
    for _, eta, _ in res.trajectory:
        assert 0.5 <= eta <= 1.5
    assert 0.5 <= res.eta_hat <= 1.5
    assert len(res.trajectory) == 12


def test_rm_convergence_flag(fast_mcmc):
    s = sample_dist(Normal(0, 1), 22, 0)
    sched = RMSchedule(eta0=2.0, c=0.5, gamma=0.75, max_iter=8)
    res = robbins_monro_calibrate(s, OneSidedUpper(0.9, 0.9), sched, fast_mcmc, 0,
                                  coverage_fn=lambda e, step: 0.9)  # exactly on target
    assert res.converged
    assert res.eta_hat == pytest.approx(2.0)
    assert res.fallback_used == "none"


def test_rm_floor_triggers_grid_fallback():
    # coverage permanently zero drives eta to the floor; the fallback grid then
    # returns the grid minimum since nothing can pass either
    s = sample_dist(Normal(0, 1), 20, 4)
    mc = MCMCConfig(n_draws=120, burn_in=40)
    sched = RMSchedule(eta0=0.001, c=5.0, gamma=0.75, max_iter=10, B=50,
                       bracket=(1e-4, 5.0))
    seen = []

    def fn(eta, step):
        seen.append(eta)
        return 0.0

    res = robbins_monro_calibrate(s, OneSidedUpper(0.9, 0.9), sched, mc, 3,
                                  coverage_fn=fn)
    assert res.fallback_used == "grid"
    assert not res.converged or res.eta_hat > 0
    assert len(seen) <= 10  # fallback fired before exhausting max_iter
    assert res.eta_hat >= sched.bracket[0]


# ---------------------------------------------------------------------------
# grid search
# ---------------------------------------------------------------------------

def test_grid_selection_rule(fast_mcmc):
    s = sample_dist(Normal(0, 1), 22, 0)
    table = {0.1: 1.0, 0.5: 0.9, 2.0: 0.5}
    res = grid_search_calibrate(s, OneSidedUpper(0.9, 0.9), [0.1, 0.5, 2.0],
                                50, fast_mcmc, 0,
                                coverage_fn=lambda e, i: table[e])
    assert res.eta_hat == 0.5
    assert res.converged


def test_grid_all_failing_returns_minimum(fast_mcmc):
    s = sample_dist(Normal(0, 1), 22, 0)
    res = grid_search_calibrate(s, OneSidedUpper(0.9, 0.9), [0.1, 0.5, 2.0],
                                50, fast_mcmc, 0,
                                coverage_fn=lambda e, i: 0.2)
    assert res.eta_hat == 0.1
    assert not res.converged


def test_grid_validation(fast_mcmc):
    s = sample_dist(Normal(0, 1), 22, 0)
    with pytest.raises(ValueError):
        grid_search_calibrate(s, OneSidedUpper(0.9, 0.9), [], 50, fast_mcmc, 0)
    with pytest.raises(ValueError):
        grid_search_calibrate(s, OneSidedUpper(0.9, 0.9), [0.5, 0.1], 50, fast_mcmc, 0)


# ---------------------------------------------------------------------------
# end-to-end
# ---------------------------------------------------------------------------

def test_calibrated_ti_upper_deterministic(fast_mcmc):
    s = sample_dist(Normal(0, 1), 22, 42)
    sched = RMSchedule(eta0=2.8, max_iter=5, B=50)
    ti1, r1 = calibrated_ti(s, OneSidedUpper(0.9, 0.9), sched, fast_mcmc, seed=5)
    ti2, r2 = calibrated_ti(s, OneSidedUpper(0.9, 0.9), sched, fast_mcmc, seed=5)
    assert ti1.upper == ti2.upper
    assert r1.eta_hat == r2.eta_hat
    assert ti1.method == "cal-gibbs"
    assert ti1.kind == "upper"
    assert ti1.lower == -math.inf
    assert ti1.extra["eta_hat"] == r1.eta_hat
    # the calibrated bound should sit above the sample quantile, below the max + slack
    q = empirical_quantile(s, 0.9)
    assert q < ti1.upper < s.sorted_values[-1] + 5 * s.iqr()


def test_calibrated_ti_lower(fast_mcmc):
    s = sample_dist(Normal(0, 1), 40, 8)
    sched = RMSchedule(eta0=2.0, max_iter=4, B=50)
    ti, _ = calibrated_ti(s, OneSidedLower(0.9, 0.9), sched, fast_mcmc, seed=2)
    assert ti.kind == "lower"
    assert ti.upper == math.inf
    assert ti.lower < empirical_quantile(s, 0.1)


def test_calibrated_ti_two_sided_tags(fast_mcmc):
    s = sample_dist(Normal(10, 3), 38, 3)
    sched = RMSchedule(eta0=1.0, max_iter=3, B=50)
    ti_c, _ = calibrated_ti(s, TwoSidedContent(0.05, 0.95, 0.9), sched, fast_mcmc, seed=4)
    ti_q, _ = calibrated_ti(s, TwoSidedQuantile(0.05, 0.95, 0.9), sched, fast_mcmc, seed=4)
    assert ti_c.objective == "content"
    assert ti_q.objective == "quantile"
    assert ti_c.kind == ti_q.kind == "two-sided"
    assert ti_c.lower < ti_c.upper
    assert "mu_bar" in ti_c.extra
