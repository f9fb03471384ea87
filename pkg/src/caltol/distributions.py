"""Ground-truth distribution families, empirical-distribution utilities, and
the special-function kernels (binomial CDF, regularized incomplete beta,
normal quantile) the rest of the package is built on.

Family CDFs/quantiles/densities delegate to scipy where a closed form is not
trivial; the special functions are implemented here directly so the
order-statistic methods do not depend on scipy internals.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Union

import numpy as np
from scipy import optimize, stats

from .seeds import rng_from

__all__ = [
    "Normal",
    "Gamma",
    "Pareto",
    "NormalMixture",
    "Beta",
    "DistributionSpec",
    "Sample",
    "sample_dist",
    "true_cdf",
    "true_pdf",
    "true_quantile",
    "empirical_quantile",
    "ecdf_content",
    "binom_cdf",
    "binom_pmf",
    "reg_inc_beta",
    "normal_quantile",
]

_QEPS = 1e-9


# ---------------------------------------------------------------------------
# distribution specs
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Normal:
    mean: float = 0.0
    sd: float = 1.0

    def __post_init__(self):
        if not (self.sd > 0):
            raise ValueError(f"Normal sd must be positive, got {self.sd}")


@dataclass(frozen=True)
class Gamma:
    shape: float
    rate: float

    def __post_init__(self):
        if not (self.shape > 0 and self.rate > 0):
            raise ValueError("Gamma shape and rate must be positive")


@dataclass(frozen=True)
class Pareto:
    """Two-parameter Pareto: support [scale, inf), F(x) = 1 - (scale/x)**shape."""

    scale: float
    shape: float

    def __post_init__(self):
        if not (self.scale > 0 and self.shape > 0):
            raise ValueError("Pareto scale and shape must be positive")


@dataclass(frozen=True)
class NormalMixture:
    weights: tuple
    means: tuple
    sds: tuple

    def __post_init__(self):
        w = np.asarray(self.weights, dtype=float)
        m = np.asarray(self.means, dtype=float)
        s = np.asarray(self.sds, dtype=float)
        if not (len(w) == len(m) == len(s) >= 1):
            raise ValueError("mixture components must have matching nonzero length")
        if np.any(w <= 0):
            raise ValueError("mixture weights must be strictly positive")
        if abs(w.sum() - 1.0) > 1e-12:
            raise ValueError(f"mixture weights must sum to 1, got {w.sum()!r}")
        if np.any(s <= 0):
            raise ValueError("mixture sds must be positive")
        object.__setattr__(self, "weights", tuple(float(x) for x in w))
        object.__setattr__(self, "means", tuple(float(x) for x in m))
        object.__setattr__(self, "sds", tuple(float(x) for x in s))


@dataclass(frozen=True)
class Beta:
    a: float
    b: float

    def __post_init__(self):
        if not (self.a > 0 and self.b > 0):
            raise ValueError("Beta parameters must be positive")


DistributionSpec = Union[Normal, Gamma, Pareto, NormalMixture, Beta]


# ---------------------------------------------------------------------------
# samples
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Sample:
    """Immutable batch of finite observations with a cached sort order."""

    values: np.ndarray
    sorted_values: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        v = np.asarray(self.values, dtype=float).ravel().copy()
        if v.size < 1:
            raise ValueError("Sample requires at least one observation")
        if not np.all(np.isfinite(v)):
            raise ValueError("Sample values must be finite")
        v.setflags(write=False)
        sv = np.sort(v)
        sv.setflags(write=False)
        object.__setattr__(self, "values", v)
        object.__setattr__(self, "sorted_values", sv)

    @property
    def n(self) -> int:
        return int(self.values.size)

    def quantile(self, tau: float) -> float:
        return empirical_quantile(self, tau)

    def iqr(self) -> float:
        return empirical_quantile(self, 0.75) - empirical_quantile(self, 0.25)


def _type1_index(n: int, tau: float) -> int:
    """1-based index ceil(n*tau), guarded against float noise in the product."""
    return min(max(int(math.ceil(n * tau - _QEPS)), 1), n)


def empirical_quantile(s: Sample, tau: float) -> float:
    """Type-1 (inverse-CDF) sample quantile: the ceil(n*tau)-th order statistic."""
    if not (0.0 < tau < 1.0):
        raise ValueError(f"tau must be in (0, 1), got {tau}")
    return float(s.sorted_values[_type1_index(s.n, tau) - 1])


def ecdf_content(s: Sample, lower: float, upper: float) -> float:
    """Fraction of observations inside [lower, upper], endpoints inclusive."""
    if lower > upper:
        raise ValueError(f"lower ({lower}) exceeds upper ({upper})")
    sv = s.sorted_values
    hi = np.searchsorted(sv, upper, side="right")
    lo = np.searchsorted(sv, lower, side="left")
    return float(hi - lo) / s.n


# ---------------------------------------------------------------------------
# special functions
# ---------------------------------------------------------------------------

def _betacf(a: float, b: float, x: float) -> float:
    """Continued fraction for the incomplete beta (modified Lentz)."""
    tiny = 1e-300
    qab, qap, qam = a + b, a + 1.0, a - 1.0
    c = 1.0
    d = 1.0 - qab * x / qap
    if abs(d) < tiny:
        d = tiny
    d = 1.0 / d
    h = d
    for m in range(1, 500):
        m2 = 2 * m
        aa = m * (b - m) * x / ((qam + m2) * (a + m2))
        d = 1.0 + aa * d
        if abs(d) < tiny:
            d = tiny
        c = 1.0 + aa / c
        if abs(c) < tiny:
            c = tiny
        d = 1.0 / d
        h *= d * c
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2))
        d = 1.0 + aa * d
        if abs(d) < tiny:
            d = tiny
        c = 1.0 + aa / c
        if abs(c) < tiny:
            c = tiny
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < 1e-15:
            return h
    raise ArithmeticError(f"incomplete beta continued fraction failed for a={a}, b={b}, x={x}")


def reg_inc_beta(a: float, b: float, x: float) -> float:
    """Regularized incomplete beta I_x(a, b) via continued fraction, with the
    symmetry switch at x > a/(a+b)."""
    if a <= 0 or b <= 0:
        raise ValueError(f"reg_inc_beta requires a, b > 0, got a={a}, b={b}")
    if not (0.0 <= x <= 1.0):
        raise ValueError(f"reg_inc_beta requires x in [0, 1], got {x}")
    if x == 0.0:
        return 0.0
    if x == 1.0:
        return 1.0
    lbeta = (math.lgamma(a + b) - math.lgamma(a) - math.lgamma(b)
             + a * math.log(x) + b * math.log1p(-x))
    bt = math.exp(lbeta)
    if x <= a / (a + b):
        return bt * _betacf(a, b, x) / a
    return 1.0 - bt * _betacf(b, a, 1.0 - x) / b


def binom_cdf(k: int, n: int, p: float) -> float:
    """P(Binomial(n, p) <= k), computed through the incomplete beta identity."""
    if n < 1:
        raise ValueError(f"binom_cdf requires n >= 1, got {n}")
    if not (0.0 <= p <= 1.0):
        raise ValueError(f"binom_cdf requires p in [0, 1], got {p}")
    k = int(math.floor(k))
    if k < 0:
        return 0.0
    if k >= n:
        return 1.0
    if p == 0.0:
        return 1.0
    if p == 1.0:
        return 0.0
    return 1.0 - reg_inc_beta(k + 1.0, float(n - k), p)


def binom_pmf(k: int, n: int, p: float) -> float:
    if k < 0 or k > n:
        return 0.0
    logc = math.lgamma(n + 1) - math.lgamma(k + 1) - math.lgamma(n - k + 1)
    if p == 0.0:
        return 1.0 if k == 0 else 0.0
    if p == 1.0:
        return 1.0 if k == n else 0.0
    return math.exp(logc + k * math.log(p) + (n - k) * math.log1p(-p))


# Acklam's rational approximation, then one Halley step against erfc.
_NQ_A = (-3.969683028665376e+01, 2.209460984245205e+02, -2.759285104469687e+02,
         1.383577518672690e+02, -3.066479806614716e+01, 2.506628277459239e+00)
_NQ_B = (-5.447609879822406e+01, 1.615858368580409e+02, -1.556989798598866e+02,
         6.680131188771972e+01, -1.328068155288572e+01)
_NQ_C = (-7.784894002430293e-03, -3.223964580411365e-01, -2.400758277161838e+00,
         -2.549732539343734e+00, 4.374664141464968e+00, 2.938163982698783e+00)
_NQ_D = (7.784695709041462e-03, 3.224671290700398e-01, 2.445134137142996e+00,
         3.754408661907416e+00)


def normal_quantile(p: float) -> float:
    """Standard normal inverse CDF, |error| well below 1e-10."""
    if not (0.0 < p < 1.0):
        raise ValueError(f"normal_quantile requires p in (0, 1), got {p}")
    a, b, c, d = _NQ_A, _NQ_B, _NQ_C, _NQ_D
    plow, phigh = 0.02425, 1.0 - 0.02425
    if p < plow:
        q = math.sqrt(-2.0 * math.log(p))
        x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) / \
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0)
    elif p <= phigh:
        q = p - 0.5
        r = q * q
        x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q / \
            (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0)
    else:
        q = math.sqrt(-2.0 * math.log1p(-p))
        x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) / \
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0)
    # Halley refinement
    e = 0.5 * math.erfc(-x / math.sqrt(2.0)) - p
    u = e * math.sqrt(2.0 * math.pi) * math.exp(x * x / 2.0)
    return x - u / (1.0 + x * u / 2.0)


# ---------------------------------------------------------------------------
# family dispatch
# ---------------------------------------------------------------------------

def _frozen(spec: DistributionSpec):
    if isinstance(spec, Normal):
        return stats.norm(spec.mean, spec.sd)
    if isinstance(spec, Gamma):
        return stats.gamma(spec.shape, scale=1.0 / spec.rate)
    if isinstance(spec, Beta):
        return stats.beta(spec.a, spec.b)
    raise TypeError(f"no scipy counterpart for {type(spec).__name__}")


def true_cdf(spec: DistributionSpec, x: float) -> float:
    if isinstance(spec, Pareto):
        if x < spec.scale:
            return 0.0
        return 1.0 - (spec.scale / x) ** spec.shape
    if isinstance(spec, NormalMixture):
        tot = 0.0
        for w, m, s in zip(spec.weights, spec.means, spec.sds):
            tot += w * stats.norm.cdf(x, m, s)
        return float(tot)
    return float(_frozen(spec).cdf(x))


def true_pdf(spec: DistributionSpec, x: float) -> float:
    if isinstance(spec, Pareto):
        if x < spec.scale:
            return 0.0
        return spec.shape * spec.scale ** spec.shape / x ** (spec.shape + 1.0)
    if isinstance(spec, NormalMixture):
        tot = 0.0
        for w, m, s in zip(spec.weights, spec.means, spec.sds):
            tot += w * stats.norm.pdf(x, m, s)
        return float(tot)
    return float(_frozen(spec).pdf(x))


def true_quantile(spec: DistributionSpec, p: float) -> float:
    if not (0.0 < p < 1.0):
        raise ValueError(f"quantile requires p in (0, 1), got {p}")
    if isinstance(spec, Pareto):
        return spec.scale * (1.0 - p) ** (-1.0 / spec.shape)
    if isinstance(spec, NormalMixture):
        qs = [stats.norm.ppf(p, m, s) for m, s in zip(spec.means, spec.sds)]
        lo, hi = min(qs), max(qs)
        if hi - lo < 1e-14:
            return float(lo)
        return float(optimize.brentq(lambda x: true_cdf(spec, x) - p,
                                     lo - 1e-9, hi + 1e-9, xtol=1e-13, rtol=8.9e-16))
    return float(_frozen(spec).ppf(p))


def sample_dist(spec: DistributionSpec, n: int, seed: int) -> Sample:
    """n i.i.d. draws from spec; bit-identical for identical (spec, n, seed)."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    rng = rng_from(seed)
    if isinstance(spec, Normal):
        v = rng.normal(spec.mean, spec.sd, size=n)
    elif isinstance(spec, Gamma):
        v = rng.gamma(spec.shape, 1.0 / spec.rate, size=n)
    elif isinstance(spec, Pareto):
        v = spec.scale * (1.0 - rng.random(n)) ** (-1.0 / spec.shape)
    elif isinstance(spec, NormalMixture):
        cumw = np.cumsum(spec.weights)
        idx = np.searchsorted(cumw, rng.random(n), side="right")
        idx = np.minimum(idx, len(spec.weights) - 1)
        means = np.asarray(spec.means)[idx]
        sds = np.asarray(spec.sds)[idx]
        v = means + sds * rng.normal(size=n)
    elif isinstance(spec, Beta):
        v = rng.beta(spec.a, spec.b, size=n)
    else:
        raise TypeError(f"unknown distribution spec {type(spec).__name__}")
    return Sample(v)
