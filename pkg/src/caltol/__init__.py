"""caltol: nonparametric tolerance intervals from a calibrated Gibbs
posterior, with Wilks and YM order-statistic benchmarks and a Monte Carlo
experiment harness."""

__version__ = "0.1.0"

from .calibration import (REGIMES, CalibrationResult, OneSidedLower,
                          OneSidedUpper, RMSchedule, TwoSidedContent,
                          TwoSidedQuantile, calibrated_ti, estimate_coverage,
                          grid_search_calibrate, plugin_eta0,
                          robbins_monro_calibrate)
from .datasets import load_data
from .distributions import (Beta, Gamma, Normal, NormalMixture, Pareto,
                            Sample, binom_cdf, ecdf_content,
                            empirical_quantile, normal_quantile, reg_inc_beta,
                            sample_dist, true_cdf, true_pdf, true_quantile)
from .gibbs import (FlatPrior, GibbsSpec1D, GibbsSpec2D, JointPosteriorDraws,
                    MCMCConfig, NormalPrior, PosteriorDraws, UniformPrior,
                    check_loss, log_gibbs_1d, log_gibbs_2d,
                    sample_posterior_1d, sample_posterior_2d)
from .intervals import (ToleranceInterval, lower_bound_from_draws,
                        two_sided_symmetry, upper_bound_from_draws)
from .orderstats import (InfeasibilityError, OrderStatPlan, min_n_one_sided,
                         min_n_two_sided, wilks_lower, wilks_two_sided,
                         wilks_upper, ym_one_sided, ym_two_sided)
from .simulate import (RegimeSummary, SimConfig, SimResult, run_experiment,
                       run_regime_study, run_sensitivity_sweep)
