"""Classical nonparametric comparators: Wilks order-statistic tolerance
limits, YM interpolated/extrapolated limits, and feasibility sample sizes.

The YM fractional index comes from linear interpolation of the achieved
confidence between adjacent integer plans: with B ~ Binomial(n, P) and k the
smallest integer whose coverage sum reaches 1-alpha,

    lambda = ((1-alpha) - P(B <= k-2)) / P(B = k-1),   v = (k-1) + lambda.

The two-sided case interpolates one endpoint of the minimal Wilks plan inward
(keeping the shorter candidate); when no integer plan is feasible it
extrapolates both extremes outward by the analogous weight anchored at the
(Y(1), Y(n)) plan, linearly along the adjacent extreme gaps.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Tuple, Union

from .distributions import Sample, binom_cdf, binom_pmf
from .intervals import LOWER, TWO_SIDED, UPPER, ToleranceInterval

__all__ = [
    "InfeasibilityError",
    "OrderStatPlan",
    "wilks_upper",
    "wilks_lower",
    "wilks_two_sided",
    "ym_one_sided",
    "ym_two_sided",
    "min_n_one_sided",
    "min_n_two_sided",
]


class InfeasibilityError(Exception):
    """Raised when no order-statistic plan can reach the nominal confidence;
    carries the minimum sample size that would."""

    def __init__(self, message: str, min_n: int):
        super().__init__(message)
        self.min_n = min_n


@dataclass(frozen=True)
class OrderStatPlan:
    n: int
    indices: Union[int, Tuple[int, int]]
    achieved_confidence: float
    fractional_index: Optional[float] = None
    lam: Optional[float] = None


def _check_levels(content: float, confidence: float):
    if not (0.0 < content < 1.0):
        raise ValueError(f"content must be in (0, 1), got {content}")
    if not (0.0 < confidence < 1.0):
        raise ValueError(f"confidence must be in (0, 1), got {confidence}")


# ---------------------------------------------------------------------------
# feasibility sample sizes
# ---------------------------------------------------------------------------

def min_n_one_sided(content: float, alpha: float) -> int:
    """Smallest n with 1 - P**n >= 1 - alpha, i.e. ceil(ln alpha / ln P)."""
    _check_levels(content, 1.0 - alpha)
    n = max(1, int(math.ceil(math.log(alpha) / math.log(content))) - 1)
    while content ** n > alpha:
        n += 1
    return n


def min_n_two_sided(content: float, alpha: float) -> int:
    """Smallest n with (n-1)P**n - nP**(n-1) + 1 >= 1 - alpha."""
    _check_levels(content, 1.0 - alpha)
    n = 2
    while (n - 1) * content ** n - n * content ** (n - 1) + 1.0 < 1.0 - alpha:
        n += 1
        if n > 10_000_000:
            raise ArithmeticError("two-sided feasibility scan failed to terminate")
    return n


# ---------------------------------------------------------------------------
# Wilks
# ---------------------------------------------------------------------------

def wilks_upper(s: Sample, content: float, alpha: float) -> ToleranceInterval:
    """U = Y(k) for the smallest k with P(Binomial(n, P) <= k-1) >= 1 - alpha."""
    _check_levels(content, 1.0 - alpha)
    n = s.n
    target = 1.0 - alpha
    for k in range(1, n + 1):
        conf = binom_cdf(k - 1, n, content)
        if conf >= target:
            plan = OrderStatPlan(n, k, conf)
            return ToleranceInterval(UPPER, content, target, -math.inf,
                                     float(s.sorted_values[k - 1]), "wilks",
                                     extra={"plan": plan})
    need = min_n_one_sided(content, alpha)
    raise InfeasibilityError(
        f"one-sided Wilks bound infeasible at n={n}; requires n >= {need}", need)


def wilks_lower(s: Sample, content: float, alpha: float) -> ToleranceInterval:
    """L = Y(k) for the largest k with P(Binomial(n, 1-P) >= k) >= 1 - alpha."""
    _check_levels(content, 1.0 - alpha)
    n = s.n
    target = 1.0 - alpha
    for k in range(n, 0, -1):
        conf = 1.0 - binom_cdf(k - 1, n, 1.0 - content)
        if conf >= target:
            plan = OrderStatPlan(n, k, conf)
            return ToleranceInterval(LOWER, content, target,
                                     float(s.sorted_values[k - 1]), math.inf, "wilks",
                                     extra={"plan": plan})
    need = min_n_one_sided(content, alpha)
    raise InfeasibilityError(
        f"one-sided Wilks bound infeasible at n={n}; requires n >= {need}", need)


def _symmetric_plan(n: int, m: int) -> Tuple[int, int]:
    # lower r preferred when the trim cannot split evenly
    r = max(1, int(math.ceil((n - m) / 2.0)))
    return r, r + m


def wilks_two_sided(s: Sample, content: float, alpha: float) -> ToleranceInterval:
    """(Y(r), Y(s)) with minimal m = s - r whose coverage sum reaches 1 - alpha,
    endpoints trimmed symmetrically."""
    _check_levels(content, 1.0 - alpha)
    n = s.n
    target = 1.0 - alpha
    for m in range(1, n):
        conf = binom_cdf(m - 1, n, content)
        if conf >= target:
            r, s_idx = _symmetric_plan(n, m)
            plan = OrderStatPlan(n, (r, s_idx), conf)
            return ToleranceInterval(TWO_SIDED, content, target,
                                     float(s.sorted_values[r - 1]),
                                     float(s.sorted_values[s_idx - 1]), "wilks",
                                     extra={"plan": plan})
    need = min_n_two_sided(content, alpha)
    raise InfeasibilityError(
        f"two-sided Wilks interval infeasible at n={n}; requires n >= {need}", need)


# ---------------------------------------------------------------------------
# YM interpolated / extrapolated order statistics
# ---------------------------------------------------------------------------

def _interp_orderstat(sv, v: float) -> float:
    """Value at fractional 1-based index v; linear through the two extreme
    order statistics beyond either end."""
    n = len(sv)
    if v <= 1.0:
        return float(sv[0] - (1.0 - v) * (sv[1] - sv[0]))
    if v >= n:
        return float(sv[n - 1] + (v - n) * (sv[n - 1] - sv[n - 2]))
    lo = int(math.floor(v))
    frac = v - lo
    return float((1.0 - frac) * sv[lo - 1] + frac * sv[lo])


def _ym_upper_index(n: int, content: float, target: float) -> Tuple[float, float]:
    for k in range(1, n + 2):
        if binom_cdf(k - 1, n, content) >= target:
            lam = (target - binom_cdf(k - 2, n, content)) / binom_pmf(k - 1, n, content)
            return (k - 1) + lam, lam
    raise AssertionError("unreachable: cdf(n) = 1")


def ym_one_sided(s: Sample, content: float, alpha: float, side: str) -> ToleranceInterval:
    """One-sided interpolated (extrapolated past the extremes) bound."""
    _check_levels(content, 1.0 - alpha)
    if side not in (UPPER, LOWER):
        raise ValueError(f"side must be {UPPER!r} or {LOWER!r}")
    n = s.n
    if n < 2:
        raise ValueError("YM bounds need at least 2 observations")
    target = 1.0 - alpha
    v, lam = _ym_upper_index(n, content, target)
    if side == UPPER:
        bound = _interp_orderstat(s.sorted_values, v)
        plan = OrderStatPlan(n, int(math.ceil(v)), target, fractional_index=v, lam=lam)
        return ToleranceInterval(UPPER, content, target, -math.inf, bound, "ym",
                                 extra={"plan": plan})
    # mirror through reflection: lower bound of s is -upper bound of -s
    reflected = Sample(-s.values)
    bound = -_interp_orderstat(reflected.sorted_values, v)
    v_low = n + 1.0 - v
    plan = OrderStatPlan(n, int(math.floor(v_low)), target, fractional_index=v_low, lam=lam)
    return ToleranceInterval(LOWER, content, target, bound, math.inf, "ym",
                             extra={"plan": plan})


def ym_two_sided(s: Sample, content: float, alpha: float) -> ToleranceInterval:
    """Coverage-correcting interpolation at the endpoints of the minimal Wilks
    plan (shorter candidate kept); symmetric outward extrapolation from the
    extremes when no integer plan is feasible."""
    _check_levels(content, 1.0 - alpha)
    n = s.n
    if n < 3:
        raise ValueError("two-sided YM interval needs at least 3 observations")
    sv = s.sorted_values
    target = 1.0 - alpha
    k = None
    for m in range(1, n):
        if binom_cdf(m - 1, n, content) >= target:
            k = m
            break
    if k is not None:
        lam = (target - binom_cdf(k - 2, n, content)) / binom_pmf(k - 1, n, content)
        r, s_idx = _symmetric_plan(n, k)
        lo_a = lam * sv[r - 1] + (1.0 - lam) * sv[r]
        cand_a = (float(lo_a), float(sv[s_idx - 1]))
        hi_b = lam * sv[s_idx - 1] + (1.0 - lam) * sv[s_idx - 2]
        cand_b = (float(sv[r - 1]), float(hi_b))
        lower, upper = min(cand_a, cand_b, key=lambda c: c[1] - c[0])
        plan = OrderStatPlan(n, (r, s_idx), target, lam=lam)
        return ToleranceInterval(TWO_SIDED, content, target, lower, upper, "ym",
                                 extra={"plan": plan})
    denom = binom_pmf(n - 2, n, content)
    if denom <= 0.0:
        need = min_n_two_sided(content, alpha)
        raise InfeasibilityError(
            f"two-sided YM interval infeasible at n={n}; requires n >= {need}", need)
    lam = (target - binom_cdf(n - 2, n, content)) / denom
    lower = float(sv[0] - lam * (sv[1] - sv[0]))
    upper = float(sv[n - 1] + lam * (sv[n - 1] - sv[n - 2]))
    plan = OrderStatPlan(n, (1, n), target, lam=lam)
    return ToleranceInterval(TWO_SIDED, content, target, lower, upper, "ym",
                             extra={"plan": plan})
