"""Tolerance-interval containers and the maps from posterior draws to bounds.

One-sided bounds are posterior quantiles of the single-quantile Gibbs
posterior.  The two-sided construction uses the symmetry rule: with
mu_bar the posterior mean midpoint, U is the (1-alpha) posterior quantile of
U* = max(q_upper, 2*mu_bar - q_lower) and L = 2*mu_bar - U.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

__all__ = [
    "UPPER",
    "LOWER",
    "TWO_SIDED",
    "ToleranceInterval",
    "upper_bound_from_draws",
    "lower_bound_from_draws",
    "two_sided_symmetry",
]

UPPER = "upper"
LOWER = "lower"
TWO_SIDED = "two-sided"

_KINDS = (UPPER, LOWER, TWO_SIDED)
_METHODS = ("cal-gibbs", "wilks", "ym")
_OBJECTIVES = ("content", "quantile", "n/a")
_QEPS = 1e-9


@dataclass(frozen=True)
class ToleranceInterval:
    kind: str
    content: float
    confidence: float
    lower: float  # -inf for upper one-sided
    upper: float  # +inf for lower one-sided
    method: str
    objective: str = "n/a"
    extra: Optional[dict] = None  # method diagnostics (order-stat plan, eta, ...)

    def __post_init__(self):
        if self.kind not in _KINDS:
            raise ValueError(f"unknown interval kind {self.kind!r}")
        if self.method not in _METHODS:
            raise ValueError(f"unknown method {self.method!r}")
        if self.objective not in _OBJECTIVES:
            raise ValueError(f"unknown objective {self.objective!r}")
        if not (0.0 < self.content < 1.0 and 0.0 < self.confidence < 1.0):
            raise ValueError("content and confidence must be in (0, 1)")
        if not self.lower <= self.upper:
            raise ValueError(f"lower ({self.lower}) exceeds upper ({self.upper})")
        if self.kind == UPPER and not (self.lower == -math.inf and math.isfinite(self.upper)):
            raise ValueError("upper one-sided interval must be (-inf, U]")
        if self.kind == LOWER and not (self.upper == math.inf and math.isfinite(self.lower)):
            raise ValueError("lower one-sided interval must be [L, inf)")
        if self.kind == TWO_SIDED and not (math.isfinite(self.lower) and math.isfinite(self.upper)):
            raise ValueError("two-sided interval must have finite endpoints")

    @property
    def length(self) -> float:
        """U - L for two-sided; the finite bound itself for one-sided."""
        if self.kind == TWO_SIDED:
            return self.upper - self.lower
        return self.upper if self.kind == UPPER else self.lower


def _draw_array(d) -> np.ndarray:
    arr = np.asarray(getattr(d, "draws", d), dtype=float).ravel()
    if arr.size == 0:
        raise ValueError("empty draws")
    return arr


def _type1(arr: np.ndarray, tau: float) -> float:
    n = arr.size
    k = min(max(int(math.ceil(n * tau - _QEPS)), 1), n)
    return float(np.partition(arr, k - 1)[k - 1])


def upper_bound_from_draws(d, alpha: float) -> float:
    """Type-1 (1-alpha) quantile of the posterior draws."""
    if not (0.0 < alpha < 1.0):
        raise ValueError(f"alpha must be in (0, 1), got {alpha}")
    return _type1(_draw_array(d), 1.0 - alpha)


def lower_bound_from_draws(d, alpha: float) -> float:
    """Type-1 alpha quantile of the posterior draws."""
    if not (0.0 < alpha < 1.0):
        raise ValueError(f"alpha must be in (0, 1), got {alpha}")
    return _type1(_draw_array(d), alpha)


def two_sided_symmetry(j, alpha: float):
    """Symmetry-rule two-sided bounds from joint draws.

    Returns (L, U, mu_bar) with U the type-1 (1-alpha) quantile of
    U* = max(q_upper, 2*mu_bar - q_lower) and L = 2*mu_bar - U, so the
    interval is centered on the posterior mean midpoint.
    """
    if not (0.0 < alpha < 1.0):
        raise ValueError(f"alpha must be in (0, 1), got {alpha}")
    pairs = np.asarray(getattr(j, "pairs", j), dtype=float)
    if pairs.size == 0:
        raise ValueError("empty draws")
    q_l = pairs[:, 0]
    q_u = pairs[:, 1]
    mu_bar = float(np.mean(0.5 * (q_l + q_u)))
    u_star = np.maximum(q_u, 2.0 * mu_bar - q_l)
    upper = _type1(u_star, 1.0 - alpha)
    lower = 2.0 * mu_bar - upper
    return lower, upper, mu_bar
