"""Check-loss Gibbs posteriors for one quantile and for an ordered quantile
pair, with slice-sampling and random-walk Metropolis chains.

The joint pair is sampled in the unconstrained coordinates
(theta1, theta2) = (q_lower, log(q_upper - q_lower)); the log-density carries
the +theta2 Jacobian term so draws mapped back always satisfy
q_upper > q_lower.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Union

import numpy as np

from . import _kernels as K
from .distributions import Sample, empirical_quantile
from .seeds import kernel_seed

__all__ = [
    "FlatPrior",
    "NormalPrior",
    "UniformPrior",
    "PriorSpec",
    "GibbsSpec1D",
    "GibbsSpec2D",
    "MCMCConfig",
    "PosteriorDraws",
    "JointPosteriorDraws",
    "check_loss",
    "log_gibbs_1d",
    "log_gibbs_2d",
    "sample_posterior_1d",
    "sample_posterior_2d",
]

SLICE = "slice"
RWMH = "rwmh"


@dataclass(frozen=True)
class FlatPrior:
    pass


@dataclass(frozen=True)
class NormalPrior:
    mean: float
    sd: float

    def __post_init__(self):
        if not (self.sd > 0):
            raise ValueError("NormalPrior sd must be positive")


@dataclass(frozen=True)
class UniformPrior:
    a: float
    b: float

    def __post_init__(self):
        if not (self.a < self.b):
            raise ValueError("UniformPrior requires a < b")


PriorSpec = Union[FlatPrior, NormalPrior, UniformPrior]


def _prior_code(prior: PriorSpec):
    if isinstance(prior, NormalPrior):
        return 1, prior.mean, prior.sd
    if isinstance(prior, UniformPrior):
        return 2, prior.a, prior.b
    return 0, 0.0, 0.0


def _log_prior(prior: PriorSpec, q: float) -> float:
    if isinstance(prior, NormalPrior):
        z = (q - prior.mean) / prior.sd
        return -0.5 * z * z
    if isinstance(prior, UniformPrior):
        return 0.0 if prior.a <= q <= prior.b else -math.inf
    return 0.0


@dataclass(frozen=True)
class GibbsSpec1D:
    tau: float
    eta: float
    prior: PriorSpec = FlatPrior()

    def __post_init__(self):
        if not (0.0 < self.tau < 1.0):
            raise ValueError(f"tau must be in (0, 1), got {self.tau}")
        if not (self.eta > 0):
            raise ValueError(f"eta must be positive, got {self.eta}")


@dataclass(frozen=True)
class GibbsSpec2D:
    tau_l: float
    tau_u: float
    eta: float
    prior_l: PriorSpec = FlatPrior()
    prior_u: PriorSpec = FlatPrior()

    def __post_init__(self):
        if not (0.0 < self.tau_l < self.tau_u < 1.0):
            raise ValueError(f"need 0 < tau_l < tau_u < 1, got ({self.tau_l}, {self.tau_u})")
        if not (self.eta > 0):
            raise ValueError(f"eta must be positive, got {self.eta}")


@dataclass(frozen=True)
class MCMCConfig:
    n_draws: int = 4000
    burn_in: int = 1000
    thin: int = 1
    sampler: Optional[str] = None  # None = slice for 1D, rwmh for 2D
    init_scale: float = 1.0

    def __post_init__(self):
        if self.n_draws < 100:
            raise ValueError("n_draws must be at least 100 for interval construction")
        if self.burn_in < 0 or self.thin < 1:
            raise ValueError("burn_in must be >= 0 and thin >= 1")
        if self.sampler not in (None, SLICE, RWMH):
            raise ValueError(f"unknown sampler {self.sampler!r}")
        if not (self.init_scale > 0):
            raise ValueError("init_scale must be positive")


@dataclass(frozen=True)
class PosteriorDraws:
    draws: np.ndarray
    seed: int
    acceptance_rate: Optional[float] = None  # MH chains only

    def __post_init__(self):
        d = np.asarray(self.draws, dtype=float)
        d.setflags(write=False)
        object.__setattr__(self, "draws", d)


@dataclass(frozen=True)
class JointPosteriorDraws:
    pairs: np.ndarray  # shape (n_draws, 2), columns (q_lower, q_upper)
    seed: int
    acceptance_rate: Optional[float] = None

    def __post_init__(self):
        p = np.asarray(self.pairs, dtype=float)
        p.setflags(write=False)
        object.__setattr__(self, "pairs", p)

    @property
    def q_lower(self) -> np.ndarray:
        return self.pairs[:, 0]

    @property
    def q_upper(self) -> np.ndarray:
        return self.pairs[:, 1]


# ---------------------------------------------------------------------------
# densities
# ---------------------------------------------------------------------------

def check_loss(r, tau: float):
    """Pinball loss rho_tau(r) = r * (tau - 1{r < 0}); works elementwise."""
    if not (0.0 < tau < 1.0):
        raise ValueError(f"tau must be in (0, 1), got {tau}")
    r = np.asarray(r, dtype=float)
    out = r * (tau - (r < 0.0))
    return float(out) if out.ndim == 0 else out


def log_gibbs_1d(q: float, s: Sample, spec: GibbsSpec1D) -> float:
    """Log-density (up to a constant) of the one-quantile Gibbs posterior."""
    lp = _log_prior(spec.prior, q)
    if lp == -math.inf:
        return -math.inf
    r = s.values - q
    loss = float(np.sum(r * (spec.tau - (r < 0.0))))
    return -spec.eta * loss + lp


def log_gibbs_2d(theta1: float, theta2: float, s: Sample, spec: GibbsSpec2D) -> float:
    """Log-density of the transformed joint posterior, including the +theta2
    log-Jacobian of (q_l, q_u) -> (theta1, theta2)."""
    if theta2 > 700.0:
        return -math.inf
    lp = _log_prior(spec.prior_l, theta1)
    if lp == -math.inf:
        return -math.inf
    q_u = theta1 + math.exp(theta2)
    lpu = _log_prior(spec.prior_u, q_u)
    if lpu == -math.inf:
        return -math.inf
    rl = s.values - theta1
    ru = s.values - q_u
    loss = float(np.sum(rl * (spec.tau_l - (rl < 0.0))) + np.sum(ru * (spec.tau_u - (ru < 0.0))))
    return -spec.eta * loss + theta2 + lp + lpu


# ---------------------------------------------------------------------------
# samplers
# ---------------------------------------------------------------------------

def _scale_guards(s: Sample) -> float:
    scale = s.iqr()
    if scale <= 0.0:
        scale = float(s.sorted_values[-1] - s.sorted_values[0])
    return scale if scale > 0.0 else 1.0


def sample_posterior_1d(s: Sample, spec: GibbsSpec1D, cfg: MCMCConfig,
                        seed: int) -> PosteriorDraws:
    """Draws from the one-quantile Gibbs posterior, chain initialized at the
    type-1 sample quantile."""
    x0 = empirical_quantile(s, spec.tau)
    if isinstance(spec.prior, UniformPrior):
        x0 = min(max(x0, spec.prior.a), spec.prior.b)
    if not math.isfinite(log_gibbs_1d(x0, s, spec)):
        raise RuntimeError(f"log-density not finite at chain start {x0}")
    pk, p1, p2 = _prior_code(spec.prior)
    scale = _scale_guards(s)
    tmin = min(spec.tau, 1.0 - spec.tau)
    sd_guess = math.sqrt(scale / (spec.eta * s.n * tmin))
    kseed = kernel_seed(seed)
    sampler = cfg.sampler or SLICE
    if sampler == SLICE:
        w = max(scale, 2.0 * sd_guess) * cfg.init_scale
        draws = K.slice_chain_1d(s.sorted_values, spec.tau, spec.eta, pk, p1, p2,
                                 x0, w, cfg.n_draws, cfg.burn_in, cfg.thin, kseed)
        return PosteriorDraws(draws, seed)
    step0 = sd_guess * cfg.init_scale
    draws, acc = K.mh_chain_1d(s.sorted_values, spec.tau, spec.eta, pk, p1, p2,
                               x0, step0, cfg.n_draws, cfg.burn_in, cfg.thin, kseed)
    return PosteriorDraws(draws, seed, acceptance_rate=float(acc))


def sample_posterior_2d(s: Sample, spec: GibbsSpec2D, cfg: MCMCConfig,
                        seed: int) -> JointPosteriorDraws:
    """Draws of the ordered quantile pair, sampled in (theta1, theta2) and
    mapped back to (q_lower, q_upper) = (theta1, theta1 + exp(theta2))."""
    scale = _scale_guards(s)
    t10 = empirical_quantile(s, spec.tau_l)
    gap = empirical_quantile(s, spec.tau_u) - t10
    t20 = math.log(max(gap, 0.1 * scale, 1e-8))
    if isinstance(spec.prior_l, UniformPrior):
        t10 = min(max(t10, spec.prior_l.a), spec.prior_l.b)
    if not math.isfinite(log_gibbs_2d(t10, t20, s, spec)):
        raise RuntimeError(f"log-density not finite at chain start ({t10}, {t20})")
    pkl, pl1, pl2 = _prior_code(spec.prior_l)
    pku, pu1, pu2 = _prior_code(spec.prior_u)
    tmin = min(spec.tau_l, 1.0 - spec.tau_u)
    sd_guess = math.sqrt(scale / (spec.eta * s.n * tmin))
    kseed = kernel_seed(seed)
    sampler = cfg.sampler or RWMH
    acc = None
    if sampler == RWMH:
        s10 = sd_guess * cfg.init_scale
        s20 = min(2.0, max(0.05, 1.414 * sd_guess / math.exp(t20))) * cfg.init_scale
        th1, th2, acc = K.mh_chain_2d(s.sorted_values, spec.tau_l, spec.tau_u, spec.eta,
                                      pkl, pl1, pl2, pku, pu1, pu2,
                                      t10, t20, s10, s20,
                                      cfg.n_draws, cfg.burn_in, cfg.thin, kseed)
        acc = float(acc)
    else:
        w1 = max(scale, 2.0 * sd_guess) * cfg.init_scale
        w2 = 2.0 * cfg.init_scale
        th1, th2 = K.slice_chain_2d(s.sorted_values, spec.tau_l, spec.tau_u, spec.eta,
                                    pkl, pl1, pl2, pku, pu1, pu2,
                                    t10, t20, w1, w2,
                                    cfg.n_draws, cfg.burn_in, cfg.thin, kseed)
    q_l = np.asarray(th1)
    q_u = q_l + np.exp(np.asarray(th2))
    # exp underflow would collapse the strict ordering; nudge if it ever happens
    q_u = np.maximum(q_u, np.nextafter(q_l, np.inf))
    return JointPosteriorDraws(np.column_stack([q_l, q_u]), seed, acceptance_rate=acc)
