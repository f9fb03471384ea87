"""Monte Carlo harness: coverage/length experiments over the ground-truth
distributions, sample-size sensitivity sweeps, and tuning-regime studies.

Success is judged against the true distribution (content: captured CDF mass;
quantile: bracketing the true quantiles).  Below the Wilks/YM feasibility
threshold the one-sided methods fall back to the extreme order statistic and
the two-sided to the sample extremes; such replications are counted in
``failures`` while their best-effort bounds still enter the averages, which
is what makes the under-coverage below the threshold visible.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Dict, Optional, Sequence, Tuple

import numpy as np

from ._parallel import ordered_map
from .calibration import (REGIMES, CalibrationObjective, OneSidedLower,
                          OneSidedUpper, RMSchedule, TwoSidedContent,
                          TwoSidedQuantile, calibrated_ti, is_two_sided,
                          objective_label)
from .distributions import (Beta, DistributionSpec, Gamma, Normal,
                            NormalMixture, Pareto, Sample, sample_dist,
                            true_cdf, true_quantile)
from .gibbs import MCMCConfig
from .intervals import LOWER, TWO_SIDED, UPPER, ToleranceInterval
from .orderstats import (InfeasibilityError, wilks_lower, wilks_two_sided,
                         wilks_upper, ym_one_sided, ym_two_sided)
from .seeds import derive_seed

__all__ = [
    "SimConfig",
    "MethodResult",
    "SimResult",
    "RegimeSummary",
    "run_experiment",
    "run_sensitivity_sweep",
    "run_regime_study",
    "dist_label",
    "simresult_to_rows",
    "rows_to_results",
    "format_table",
    "CSV_HEADER",
]

METHODS = ("cal-gibbs", "wilks", "ym")


def dist_label(spec: DistributionSpec) -> str:
    if isinstance(spec, Normal):
        return f"normal({spec.mean:g},{spec.sd:g})"
    if isinstance(spec, Gamma):
        return f"gamma({spec.shape:g},{spec.rate:g})"
    if isinstance(spec, Pareto):
        return f"pareto({spec.scale:g},{spec.shape:g})"
    if isinstance(spec, Beta):
        return f"beta({spec.a:g},{spec.b:g})"
    if isinstance(spec, NormalMixture):
        parts = ";".join(f"{w:g},{m:g},{s:g}" for w, m, s
                         in zip(spec.weights, spec.means, spec.sds))
        return f"mixture({parts})"
    raise TypeError(f"unknown spec {type(spec).__name__}")


@dataclass(frozen=True)
class SimConfig:
    dist: DistributionSpec
    n: int
    objective: CalibrationObjective
    methods: Tuple[str, ...] = METHODS
    reps: int = 300
    master_seed: int = 0
    schedule: RMSchedule = field(default_factory=lambda: REGIMES["moderate"])
    mcmc: MCMCConfig = field(default_factory=MCMCConfig)

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("n must be >= 1")
        if self.reps < 1:
            raise ValueError("reps must be >= 1")
        if not self.methods:
            raise ValueError("methods must be nonempty")
        for m in self.methods:
            if m not in METHODS:
                raise ValueError(f"unknown method {m!r}")


@dataclass(frozen=True)
class MethodResult:
    coverage: float
    mean_length: float
    mc_stderr_coverage: float
    mean_eta: Optional[float]
    failures: int
    reps: int


@dataclass(frozen=True)
class SimResult:
    config: SimConfig
    per_method: Dict[str, MethodResult]


@dataclass(frozen=True)
class RegimeSummary:
    name: str
    runs: int
    mean_calibrated_cov: float
    sd_calibrated_cov: float
    actual_coverage: float
    sd_actual_coverage: float
    mean_eta: float
    sd_eta: float
    mean_length: float
    sd_length: float


# ---------------------------------------------------------------------------
# per-replication method application
# ---------------------------------------------------------------------------

def _order_stat_interval(method: str, s: Sample, obj: CalibrationObjective):
    """Wilks/YM interval; below feasibility fall back to the sample extremes
    (the most optimistic plan) and flag the replication as degraded."""
    content, alpha = obj.content, obj.alpha
    sv = s.sorted_values
    try:
        if is_two_sided(obj):
            ti = wilks_two_sided(s, content, alpha) if method == "wilks" \
                else ym_two_sided(s, content, alpha)
        elif isinstance(obj, OneSidedUpper):
            ti = wilks_upper(s, content, alpha) if method == "wilks" \
                else ym_one_sided(s, content, alpha, UPPER)
        else:
            ti = wilks_lower(s, content, alpha) if method == "wilks" \
                else ym_one_sided(s, content, alpha, LOWER)
        return ti, False
    except InfeasibilityError:
        conf = 1.0 - alpha
        if is_two_sided(obj):
            ti = ToleranceInterval(TWO_SIDED, content, conf, float(sv[0]),
                                   float(sv[-1]), method, extra={"degraded": True})
        elif isinstance(obj, OneSidedUpper):
            ti = ToleranceInterval(UPPER, content, conf, -math.inf,
                                   float(sv[-1]), method, extra={"degraded": True})
        else:
            ti = ToleranceInterval(LOWER, content, conf, float(sv[0]),
                                   math.inf, method, extra={"degraded": True})
        return ti, True


def _success(ti: ToleranceInterval, dist: DistributionSpec,
             obj: CalibrationObjective) -> bool:
    if isinstance(obj, OneSidedUpper):
        return true_cdf(dist, ti.upper) >= obj.content
    if isinstance(obj, OneSidedLower):
        return true_cdf(dist, ti.lower) <= 1.0 - obj.content
    if isinstance(obj, TwoSidedQuantile):
        return (ti.lower <= true_quantile(dist, obj.tau_l)
                and ti.upper >= true_quantile(dist, obj.tau_u))
    return true_cdf(dist, ti.upper) - true_cdf(dist, ti.lower) >= obj.content


def _one_rep(cfg: SimConfig, i: int):
    s = sample_dist(cfg.dist, cfg.n, derive_seed(cfg.master_seed, i))
    out = {}
    for method in cfg.methods:
        eta = None
        degraded = False
        try:
            if method == "cal-gibbs":
                ti, cal = calibrated_ti(s, cfg.objective, cfg.schedule, cfg.mcmc,
                                        seed=derive_seed(cfg.master_seed, i, 1))
                eta = cal.eta_hat
            else:
                ti, degraded = _order_stat_interval(method, s, cfg.objective)
        except Exception:
            out[method] = (None, None, None, True)
            continue
        ok = _success(ti, cfg.dist, cfg.objective)
        out[method] = (ok, ti.length, eta, degraded)
    return out


def run_experiment(cfg: SimConfig) -> SimResult:
    """Independent replications with per-rep derived seeds; identical results
    under any parallel schedule."""
    rows = ordered_map(lambda i: _one_rep(cfg, i), range(cfg.reps))
    per_method = {}
    for method in cfg.methods:
        succ, lens, etas, failures = [], [], [], 0
        for row in rows:
            ok, length, eta, failed_or_degraded = row[method]
            if ok is None:  # hard error: no interval at all
                failures += 1
                continue
            if failed_or_degraded:
                failures += 1
            succ.append(ok)
            lens.append(length)
            if eta is not None:
                etas.append(eta)
        used = len(succ)
        cov = float(np.mean(succ)) if used else float("nan")
        stderr = math.sqrt(cov * (1.0 - cov) / used) if used else float("nan")
        per_method[method] = MethodResult(
            coverage=cov,
            mean_length=float(np.mean(lens)) if used else float("nan"),
            mc_stderr_coverage=stderr,
            mean_eta=float(np.mean(etas)) if etas else None,
            failures=failures,
            reps=cfg.reps,
        )
    return SimResult(cfg, per_method)


def run_sensitivity_sweep(dist: DistributionSpec, n_values: Sequence[int],
                          objective: CalibrationObjective,
                          methods: Tuple[str, ...] = METHODS,
                          reps: int = 300, master_seed: int = 0,
                          schedule: Optional[RMSchedule] = None,
                          mcmc: Optional[MCMCConfig] = None) -> Dict[int, SimResult]:
    """One experiment per sample size, sharing the master seed so a single-n
    sweep reproduces run_experiment exactly."""
    if not n_values:
        raise ValueError("n_values must be nonempty")
    schedule = schedule or REGIMES["moderate"]
    mcmc = mcmc or MCMCConfig()
    out = {}
    for n in n_values:
        cfg = SimConfig(dist, int(n), objective, methods=tuple(methods), reps=reps,
                        master_seed=master_seed, schedule=schedule, mcmc=mcmc)
        out[int(n)] = run_experiment(cfg)
    return out


def run_regime_study(dist: DistributionSpec, n: int,
                     objective: CalibrationObjective,
                     regimes: Dict[str, RMSchedule], runs: int,
                     master_seed: int = 0,
                     mcmc: Optional[MCMCConfig] = None) -> Dict[str, RegimeSummary]:
    """Per regime: calibrate on fresh samples, record the bootstrap coverage at
    the calibrated eta, the true-distribution success of the final interval,
    eta_hat, and interval length (mirrors the supplementary diagnostics)."""
    if not regimes:
        raise ValueError("regimes must be nonempty")
    if runs < 1:
        raise ValueError("runs must be >= 1")
    mcmc = mcmc or MCMCConfig()
    out = {}
    for name, sched in regimes.items():
        def one(r, sched=sched):
            s = sample_dist(dist, n, derive_seed(master_seed, r))
            ti, cal = calibrated_ti(s, objective, sched, mcmc,
                                    seed=derive_seed(master_seed, r, 17))
            chat_final = cal.trajectory[-1][2] if cal.trajectory else float("nan")
            ok = _success(ti, dist, objective)
            return cal.eta_hat, chat_final, float(ok), ti.length

        vals = np.array(ordered_map(one, range(runs)), dtype=float)
        out[name] = RegimeSummary(
            name=name, runs=runs,
            mean_calibrated_cov=float(vals[:, 1].mean()),
            sd_calibrated_cov=float(vals[:, 1].std(ddof=1)) if runs > 1 else 0.0,
            actual_coverage=float(vals[:, 2].mean()),
            sd_actual_coverage=float(vals[:, 2].std(ddof=1)) if runs > 1 else 0.0,
            mean_eta=float(vals[:, 0].mean()),
            sd_eta=float(vals[:, 0].std(ddof=1)) if runs > 1 else 0.0,
            mean_length=float(vals[:, 3].mean()),
            sd_length=float(vals[:, 3].std(ddof=1)) if runs > 1 else 0.0,
        )
    return out


# ---------------------------------------------------------------------------
# CSV / table emission
# ---------------------------------------------------------------------------

CSV_HEADER = ("dist,n,P,alpha,method,objective,coverage,stderr,"
              "mean_length,mean_eta,failures,reps,seed")


def simresult_to_rows(res: SimResult):
    cfg = res.config
    rows = []
    for method, mr in res.per_method.items():
        rows.append(",".join([
            dist_label(cfg.dist),
            str(cfg.n),
            repr(cfg.objective.content),
            repr(cfg.objective.alpha),
            method,
            objective_label(cfg.objective),
            repr(mr.coverage),
            repr(mr.mc_stderr_coverage),
            repr(mr.mean_length),
            "" if mr.mean_eta is None else repr(mr.mean_eta),
            str(mr.failures),
            str(mr.reps),
            str(cfg.master_seed),
        ]))
    return rows


def rows_to_results(text: str):
    """Parse CSV emitted by simresult_to_rows back into MethodResult values,
    keyed by (dist, n, method); floats round-trip exactly via repr."""
    lines = [ln for ln in text.strip().splitlines() if ln.strip()]
    if lines and lines[0] == CSV_HEADER:
        lines = lines[1:]
    out = {}
    for ln in lines:
        f = ln.split(",")
        # mixture labels contain commas; splitting from the right is stable
        # because only the first column is free-form
        tail = f[-12:]
        dist = ",".join(f[:-12])
        out[(dist, int(tail[0]), tail[3])] = MethodResult(
            coverage=float(tail[5]),
            mc_stderr_coverage=float(tail[6]),
            mean_length=float(tail[7]),
            mean_eta=None if tail[8] == "" else float(tail[8]),
            failures=int(tail[9]),
            reps=int(tail[10]),
        )
    return out


def format_table(res: SimResult) -> str:
    cfg = res.config
    head = (f"{dist_label(cfg.dist)}  n={cfg.n}  P={cfg.objective.content:g}  "
            f"1-alpha={cfg.objective.confidence:g}  objective={objective_label(cfg.objective)}  "
            f"reps={cfg.reps}  seed={cfg.master_seed}")
    lines = [head, f"{'method':<10} {'coverage':>9} {'stderr':>8} {'mean_len':>10} "
                   f"{'mean_eta':>9} {'failures':>8}"]
    for method, mr in res.per_method.items():
        eta = f"{mr.mean_eta:.4f}" if mr.mean_eta is not None else "-"
        lines.append(f"{method:<10} {mr.coverage:>9.4f} {mr.mc_stderr_coverage:>8.4f} "
                     f"{mr.mean_length:>10.4f} {eta:>9} {mr.failures:>8}")
    return "\n".join(lines)
