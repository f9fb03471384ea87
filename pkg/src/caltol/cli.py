"""Command-line front end.

Subcommands: interval, calibrate, simulate, sweep, regimes, min-n.
Exit codes: 0 success, 1 usage/data errors, 2 infeasible order-statistic
plans (the message carries the minimum feasible n).
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import math
import re
import sys

from . import __version__
from .calibration import (REGIMES, OneSidedLower, OneSidedUpper, RMSchedule,
                          TwoSidedContent, TwoSidedQuantile, calibrated_ti,
                          grid_search_calibrate, robbins_monro_calibrate)
from .datasets import DataFormatError, load_data
from .distributions import (Beta, Gamma, Normal, NormalMixture, Pareto)
from .gibbs import MCMCConfig
from .intervals import LOWER, TWO_SIDED, UPPER
from .orderstats import (InfeasibilityError, min_n_one_sided, min_n_two_sided,
                         wilks_lower, wilks_two_sided, wilks_upper,
                         ym_one_sided, ym_two_sided)
from .simulate import (CSV_HEADER, SimConfig, format_table, run_experiment,
                       run_regime_study, run_sensitivity_sweep,
                       simresult_to_rows)

SCHEMA_VERSION = 1


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # usage problems exit 1, not argparse's 2
        raise UsageError(message)


def _prob(text: str) -> float:
    try:
        x = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}")
    if not (0.0 < x < 1.0):
        raise argparse.ArgumentTypeError(
            f"probabilities must be decimals strictly inside (0, 1), got {text!r}")
    return x


def parse_dist(text: str):
    m = re.fullmatch(r"\s*([a-z\-]+)\s*\((.*)\)\s*", text.lower())
    if not m:
        raise UsageError(f"cannot parse distribution {text!r}; "
                         "expected e.g. normal(0,1) or pareto(1,2)")
    name, argstr = m.group(1), m.group(2)
    try:
        if name == "mixture":
            trips = [tuple(float(x) for x in part.split(","))
                     for part in argstr.split(";") if part.strip()]
            if any(len(t) != 3 for t in trips):
                raise ValueError("mixture components are weight,mean,sd triples")
            w, mu, sd = zip(*trips)
            return NormalMixture(w, mu, sd)
        args = [float(x) for x in argstr.split(",") if x.strip()]
        families = {"normal": Normal, "gamma": Gamma, "pareto": Pareto, "beta": Beta}
        if name not in families:
            raise ValueError(f"unknown family {name!r}")
        return families[name](*args)
    except (TypeError, ValueError) as exc:
        raise UsageError(f"bad distribution {text!r}: {exc}")


def _add_objective_flags(p):
    p.add_argument("--kind", required=True, choices=[UPPER, LOWER, TWO_SIDED])
    p.add_argument("--content", required=True, type=_prob,
                   help="content level P, a decimal in (0,1)")
    p.add_argument("--confidence", required=True, type=_prob,
                   help="confidence level 1-alpha, a decimal in (0,1)")
    p.add_argument("--objective", choices=["content", "quantile"], default="content",
                   help="two-sided calibration target (ignored for one-sided)")
    p.add_argument("--tau-l", type=_prob, default=None,
                   help="lower quantile level (default (1-P)/2)")
    p.add_argument("--tau-u", type=_prob, default=None,
                   help="upper quantile level (default (1+P)/2)")


def _add_schedule_flags(p):
    p.add_argument("--regime", choices=sorted(REGIMES), default="moderate")
    p.add_argument("--eta0", type=float, default=None,
                   help="initial learning rate (default: plug-in estimate)")
    p.add_argument("--step-c", type=float, default=None)
    p.add_argument("--gamma", type=float, default=None)
    p.add_argument("--max-iter", type=int, default=None)
    p.add_argument("--bootstrap", type=int, default=None, metavar="B")
    p.add_argument("--bracket", type=float, nargs=2, default=None,
                   metavar=("LO", "HI"))


def _add_mcmc_flags(p):
    p.add_argument("--n-draws", type=int, default=4000)
    p.add_argument("--burn-in", type=int, default=1000)
    p.add_argument("--thin", type=int, default=1)
    p.add_argument("--sampler", choices=["slice", "rwmh"], default=None)
    p.add_argument("--init-scale", type=float, default=1.0)


def _objective_from(args):
    if args.kind == UPPER:
        return OneSidedUpper(args.content, args.confidence)
    if args.kind == LOWER:
        return OneSidedLower(args.content, args.confidence)
    tau_l = args.tau_l if args.tau_l is not None else (1.0 - args.content) / 2.0
    tau_u = args.tau_u if args.tau_u is not None else (1.0 + args.content) / 2.0
    if not tau_l < tau_u:
        raise UsageError(f"need tau_l < tau_u, got ({tau_l}, {tau_u})")
    if args.objective == "quantile":
        if abs((tau_u - tau_l) - args.content) > 1e-9:
            raise UsageError("quantile objective requires tau_u - tau_l == content")
        return TwoSidedQuantile(tau_l, tau_u, args.confidence)
    return TwoSidedContent(tau_l, tau_u, args.confidence, content=args.content)


def _schedule_from(args) -> RMSchedule:
    sched = REGIMES[args.regime]
    updates = {}
    if args.eta0 is not None:
        updates["eta0"] = args.eta0
    if args.step_c is not None:
        updates["c"] = args.step_c
    if args.gamma is not None:
        updates["gamma"] = args.gamma
    if args.max_iter is not None:
        updates["max_iter"] = args.max_iter
    if args.bootstrap is not None:
        updates["B"] = args.bootstrap
    if args.bracket is not None:
        updates["bracket"] = tuple(args.bracket)
    return dataclasses.replace(sched, **updates) if updates else sched


def _mcmc_from(args) -> MCMCConfig:
    return MCMCConfig(n_draws=args.n_draws, burn_in=args.burn_in,
                      thin=args.thin, sampler=args.sampler,
                      init_scale=args.init_scale)


def _emit(args, text: str):
    if getattr(args, "out", None):
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text if text.endswith("\n") else text + "\n")
    else:
        print(text)


def _json_doc(command, config, result) -> str:
    return json.dumps({"schema_version": SCHEMA_VERSION, "command": command,
                       "config": config, "result": result},
                      indent=2, default=_jsonable, allow_nan=True)


def _jsonable(obj):
    if dataclasses.is_dataclass(obj):
        return dataclasses.asdict(obj)
    if isinstance(obj, float) and math.isinf(obj):
        return "inf" if obj > 0 else "-inf"
    if hasattr(obj, "tolist"):
        return obj.tolist()
    return str(obj)


def _interval_result(ti):
    return {
        "kind": ti.kind, "method": ti.method, "objective": ti.objective,
        "content": ti.content, "confidence": ti.confidence,
        "lower": None if ti.lower == -math.inf else ti.lower,
        "upper": None if ti.upper == math.inf else ti.upper,
        "length": ti.length, "extra": ti.extra,
    }


def _resolved_config(args, skip=("func", "out", "format")):
    cfg = {}
    for key, val in sorted(vars(args).items()):
        if key in skip or callable(val):
            continue
        cfg[key] = val
    return cfg


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def _cmd_interval(args) -> int:
    sample = load_data(args.data)
    obj = _objective_from(args)
    alpha = obj.alpha
    if args.method == "wilks":
        if args.kind == UPPER:
            ti = wilks_upper(sample, obj.content, alpha)
        elif args.kind == LOWER:
            ti = wilks_lower(sample, obj.content, alpha)
        else:
            ti = wilks_two_sided(sample, obj.content, alpha)
    elif args.method == "ym":
        if args.kind == TWO_SIDED:
            ti = ym_two_sided(sample, obj.content, alpha)
        else:
            ti = ym_one_sided(sample, obj.content, alpha, args.kind)
    else:
        ti, cal = calibrated_ti(sample, obj, _schedule_from(args),
                                _mcmc_from(args), seed=args.seed)
    result = _interval_result(ti)
    if args.format == "json":
        _emit(args, _json_doc("interval", _resolved_config(args), result))
    else:
        lines = [f"{ti.method} {ti.kind} tolerance interval "
                 f"(P={ti.content:g}, confidence={ti.confidence:g})"]
        if ti.kind != UPPER:
            lines.append(f"  lower = {ti.lower:.6g}")
        if ti.kind != LOWER:
            lines.append(f"  upper = {ti.upper:.6g}")
        if ti.extra and "plan" in ti.extra:
            lines.append(f"  order-statistic plan: {ti.extra['plan']}")
        if ti.extra and "eta_hat" in ti.extra:
            lines.append(f"  calibrated eta = {ti.extra['eta_hat']:.6g} "
                         f"(fallback: {ti.extra['fallback_used']}, seed={args.seed})")
        _emit(args, "\n".join(lines))
    return 0


def _cmd_calibrate(args) -> int:
    sample = load_data(args.data)
    obj = _objective_from(args)
    sched = _schedule_from(args)
    mcmc = _mcmc_from(args)
    if args.grid:
        grid = sorted(float(g) for g in args.grid.split(","))
        res = grid_search_calibrate(sample, obj, grid, sched.B, mcmc, args.seed)
    else:
        res = robbins_monro_calibrate(sample, obj, sched, mcmc, args.seed)
    result = {"eta_hat": res.eta_hat, "converged": res.converged,
              "fallback_used": res.fallback_used, "seed": res.seed,
              "trajectory": [list(t) for t in res.trajectory]}
    if args.format == "json":
        _emit(args, _json_doc("calibrate", _resolved_config(args), result))
    else:
        lines = [f"calibrated eta = {res.eta_hat:.6g}  converged={res.converged}  "
                 f"fallback={res.fallback_used}  seed={res.seed}",
                 f"{'step':>5} {'eta':>12} {'C_hat':>8}"]
        lines += [f"{s:>5} {e:>12.6g} {c:>8.4f}" for s, e, c in res.trajectory]
        _emit(args, "\n".join(lines))
    return 0


def _sim_config(args) -> SimConfig:
    return SimConfig(parse_dist(args.dist), args.n, _objective_from(args),
                     methods=tuple(args.methods.split(",")), reps=args.reps,
                     master_seed=args.seed, schedule=_schedule_from(args),
                     mcmc=_mcmc_from(args))


def _sim_json(res):
    return {m: dataclasses.asdict(mr) for m, mr in res.per_method.items()}


def _cmd_simulate(args) -> int:
    res = run_experiment(_sim_config(args))
    if args.format == "csv":
        _emit(args, "\n".join([CSV_HEADER] + simresult_to_rows(res)))
    elif args.format == "json":
        _emit(args, _json_doc("simulate", _resolved_config(args), _sim_json(res)))
    else:
        _emit(args, format_table(res))
    return 0


def _parse_n_values(text: str):
    if ":" in text:
        lo, hi = text.split(":", 1)
        return list(range(int(lo), int(hi) + 1))
    return [int(x) for x in text.split(",") if x.strip()]


def _cmd_sweep(args) -> int:
    results = run_sensitivity_sweep(parse_dist(args.dist), _parse_n_values(args.n_values),
                                    _objective_from(args),
                                    methods=tuple(args.methods.split(",")),
                                    reps=args.reps, master_seed=args.seed,
                                    schedule=_schedule_from(args), mcmc=_mcmc_from(args))
    if args.format == "csv":
        rows = [CSV_HEADER]
        for n in sorted(results):
            rows += simresult_to_rows(results[n])
        _emit(args, "\n".join(rows))
    elif args.format == "json":
        _emit(args, _json_doc("sweep", _resolved_config(args),
                              {str(n): _sim_json(r) for n, r in results.items()}))
    else:
        _emit(args, "\n\n".join(format_table(results[n]) for n in sorted(results)))
    return 0


def _cmd_regimes(args) -> int:
    eta0s = {}
    if args.eta0_by_regime:
        for part in args.eta0_by_regime.split(","):
            name, val = part.split("=")
            if name not in REGIMES:
                raise UsageError(f"unknown regime {name!r}")
            eta0s[name] = float(val)
    regimes = {name: (dataclasses.replace(sched, eta0=eta0s[name])
                      if name in eta0s else sched)
               for name, sched in REGIMES.items()}
    out = run_regime_study(parse_dist(args.dist), args.n, _objective_from(args),
                           regimes, args.runs, master_seed=args.seed,
                           mcmc=_mcmc_from(args))
    if args.format == "json":
        _emit(args, _json_doc("regimes", _resolved_config(args),
                              {k: dataclasses.asdict(v) for k, v in out.items()}))
    else:
        lines = [f"{'regime':<14} {'cal_cov':>8} {'actual':>8} {'eta_hat':>9} {'length':>9}"]
        for name, sm in out.items():
            lines.append(f"{name:<14} {sm.mean_calibrated_cov:>8.3f} "
                         f"{sm.actual_coverage:>8.3f} {sm.mean_eta:>9.4f} "
                         f"{sm.mean_length:>9.4f}")
        _emit(args, "\n".join(lines))
    return 0


def _cmd_min_n(args) -> int:
    alpha = 1.0 - args.confidence
    if args.kind == TWO_SIDED:
        n = min_n_two_sided(args.content, alpha)
    else:
        n = min_n_one_sided(args.content, alpha)
    if args.format == "json":
        _emit(args, _json_doc("min-n", _resolved_config(args), {"min_n": n}))
    else:
        _emit(args, str(n))
    return 0


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------

def build_parser() -> _Parser:
    parser = _Parser(prog="caltol",
                     description="Nonparametric tolerance intervals: calibrated "
                                 "Gibbs posterior, Wilks, and YM methods")
    parser.add_argument("--version", action="version", version=f"caltol {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("interval", help="tolerance interval from data")
    p.add_argument("--method", required=True, choices=["wilks", "ym", "cal-gibbs"])
    p.add_argument("--data", required=True,
                   help="CSV path or embedded dataset (air-lead, potency)")
    _add_objective_flags(p)
    _add_schedule_flags(p)
    _add_mcmc_flags(p)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default=None)
    p.add_argument("--format", choices=["table", "json"], default="table")
    p.set_defaults(func=_cmd_interval)

    p = sub.add_parser("calibrate", help="calibrate the Gibbs learning rate")
    p.add_argument("--data", required=True)
    _add_objective_flags(p)
    _add_schedule_flags(p)
    _add_mcmc_flags(p)
    p.add_argument("--grid", default=None,
                   help="comma-separated eta grid; runs a grid search instead of RM")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default=None)
    p.add_argument("--format", choices=["table", "json"], default="table")
    p.set_defaults(func=_cmd_calibrate)

    p = sub.add_parser("simulate", help="Monte Carlo coverage/length experiment")
    p.add_argument("--dist", required=True, help="e.g. normal(0,1), pareto(1,2), "
                   "mixture(0.9,0,1;0.1,0,10)")
    p.add_argument("--n", required=True, type=int)
    _add_objective_flags(p)
    p.add_argument("--methods", default="cal-gibbs,wilks,ym")
    p.add_argument("--reps", type=int, default=300)
    _add_schedule_flags(p)
    _add_mcmc_flags(p)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default=None)
    p.add_argument("--format", choices=["table", "csv", "json"], default="table")
    p.set_defaults(func=_cmd_simulate)

    p = sub.add_parser("sweep", help="sample-size sensitivity sweep")
    p.add_argument("--dist", required=True)
    p.add_argument("--n-values", required=True, help="e.g. 15:30 or 15,22,30")
    _add_objective_flags(p)
    p.add_argument("--methods", default="cal-gibbs,wilks,ym")
    p.add_argument("--reps", type=int, default=300)
    _add_schedule_flags(p)
    _add_mcmc_flags(p)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default=None)
    p.add_argument("--format", choices=["table", "csv", "json"], default="table")
    p.set_defaults(func=_cmd_sweep)

    p = sub.add_parser("regimes", help="tuning-regime diagnostic study")
    p.add_argument("--dist", required=True)
    p.add_argument("--n", required=True, type=int)
    _add_objective_flags(p)
    p.add_argument("--runs", type=int, default=100)
    p.add_argument("--eta0-by-regime", default=None,
                   help="e.g. moderate=2.8,conservative=3.3,aggressive=1.5")
    _add_mcmc_flags(p)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default=None)
    p.add_argument("--format", choices=["table", "json"], default="table")
    p.set_defaults(func=_cmd_regimes)

    p = sub.add_parser("min-n", help="minimum feasible sample size for Wilks plans")
    p.add_argument("--kind", required=True, choices=[UPPER, LOWER, TWO_SIDED])
    p.add_argument("--content", required=True, type=_prob)
    p.add_argument("--confidence", required=True, type=_prob)
    p.add_argument("--out", default=None)
    p.add_argument("--format", choices=["table", "json"], default="table")
    p.set_defaults(func=_cmd_min_n)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except InfeasibilityError as exc:
        print(f"infeasible: {exc} (minimum n = {exc.min_n})", file=sys.stderr)
        return 2
    except (DataFormatError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def entrypoint():  # console-script shim
    sys.exit(main())
