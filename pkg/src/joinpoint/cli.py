"""Command line interface.

Subcommands:
  analyze        detect a slope change in a series file and write a report
  fit            fit the two-segment model at one fixed candidate
  quantiles      tabulate null critical values for a trimming fraction
  simulate-null  simulate a null distribution and dump its summary

Exit codes: 0 success, 1 usage problem, 2 data problem, 3 numerical failure.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .cache import QuantileCache
from .detection import analyze, subperiod_analyze
from .errors import JoinpointError, UsageError
from .fitting import fit_joinpoint
from .io import load_example_series, read_series, render_report, SeriesFileSpec
from .nulldist import simulate_finite_n, simulate_limit_null
from .series import CRITICAL_LEVELS, DetectionConfig

DEFAULT_SEED = 1850      # calendar origin of the bundled example series


class _Parser(argparse.ArgumentParser):
    # usage problems must exit 1, not argparse's default 2
    def error(self, message):
        raise UsageError(message)


def _add_input_arguments(sub):
    sub.add_argument("input", nargs="?", default=None,
                     help="path of a delimited series file")
    sub.add_argument("--example", action="store_true",
                     help="use the bundled example series instead of a file")
    sub.add_argument("--delimiter", default=",",
                     help="field delimiter of the input file (default ,)")


def _add_null_arguments(sub, reps_default):
    sub.add_argument("--delta", type=float, default=0.05,
                     help="trimming fraction (default 0.05)")
    sub.add_argument("--reps", type=int, default=reps_default,
                     help=f"simulation replicates (default {reps_default})")
    sub.add_argument("--grid", type=int, default=1000,
                     help="grid points for the limit process (default 1000)")
    sub.add_argument("--seed", type=int, default=DEFAULT_SEED,
                     help=f"simulation seed (default {DEFAULT_SEED})")
    sub.add_argument("--cache", action="store_true",
                     help="cache simulated null distributions on disk")
    sub.add_argument("--cache-dir", default=None,
                     help="cache directory (default: JOINPOINT_CACHE_DIR "
                          "or ~/.cache/joinpoint)")


def _build_parser() -> _Parser:
    parser = _Parser(prog="joinpoint",
                     description="Detect a single continuous slope change "
                                 "in a regularly sampled series.")
    subs = parser.add_subparsers(dest="command", required=True)

    p_an = subs.add_parser("analyze", help="full detection run on a series")
    _add_input_arguments(p_an)
    _add_null_arguments(p_an, reps_default=20000)
    p_an.add_argument("--level", type=float, default=0.05,
                      help="significance level for the decision "
                           "(default 0.05)")
    p_an.add_argument("--from", dest="from_label", type=int, default=None,
                      help="first label of a subperiod to analyze")
    p_an.add_argument("--to", dest="to_label", type=int, default=None,
                      help="last label of a subperiod to analyze")
    p_an.add_argument("--format", choices=("text", "json", "csv"),
                      default="text", help="report format (default text)")
    p_an.add_argument("--output", default=None,
                      help="write the report here instead of stdout")
    p_an.add_argument("--figures", default=None, metavar="DIR",
                      help="also render fit and profile figures into DIR")

    p_fit = subs.add_parser("fit", help="fit the model at one candidate")
    _add_input_arguments(p_fit)
    p_fit.add_argument("--k", type=int, required=True,
                       help="candidate index (2 <= k <= n-2)")
    p_fit.add_argument("--format", choices=("text", "json"), default="text")

    p_q = subs.add_parser("quantiles",
                          help="critical values of the null distribution")
    _add_null_arguments(p_q, reps_default=100000)
    p_q.add_argument("--levels", default="90,95,97.5,99,99.9",
                     help="comma separated confidence percents")
    p_q.add_argument("--format", choices=("text", "csv"), default="text")

    p_sim = subs.add_parser("simulate-null",
                            help="simulate a null distribution")
    _add_null_arguments(p_sim, reps_default=20000)
    p_sim.add_argument("--method", choices=("gp-grid", "finite-n"),
                       default="gp-grid")
    p_sim.add_argument("--n", type=int, default=None,
                       help="series length (finite-n method only)")
    p_sim.add_argument("--output", default=None,
                       help="write the JSON summary here instead of stdout")
    return parser


def _load_series(args):
    if args.example:
        if args.input is not None:
            raise UsageError("give either an input file or --example")
        return load_example_series()
    if args.input is None:
        raise UsageError("an input file (or --example) is required")
    return read_series(SeriesFileSpec(path=args.input,
                                      delimiter=args.delimiter))


def _cache_from(args):
    if not args.cache and args.cache_dir is None:
        return None
    return QuantileCache(args.cache_dir)


def _emit(text: str, output) -> None:
    if output is None:
        sys.stdout.write(text)
    else:
        Path(output).write_text(text, encoding="utf-8")


def _cmd_analyze(args) -> int:
    series = _load_series(args)
    config = DetectionConfig(delta=args.delta, level=args.level,
                             seed=args.seed, mc_replicates=args.reps,
                             grid_size=args.grid)
    cache = _cache_from(args)
    if (args.from_label is None) != (args.to_label is None):
        raise UsageError("--from and --to must be given together")
    if args.from_label is not None:
        report = subperiod_analyze(series, args.from_label, args.to_label,
                                   config, cache=cache)
    else:
        report = analyze(series, config, cache=cache)
    _emit(render_report(report, args.format), args.output)
    if args.figures is not None:
        from .figures import render_report_figures
        stem = Path(args.output).stem if args.output else "report"
        for path in render_report_figures(report, args.figures, stem=stem):
            sys.stderr.write(f"wrote {path}\n")
    return 0


def _cmd_fit(args) -> int:
    series = _load_series(args)
    try:
        fit = fit_joinpoint(series.as_array(), args.k)
    except ValueError as exc:
        raise UsageError(str(exc))
    payload = {
        "k": fit.k,
        "label": series.label_of(fit.k),
        "mu_hat": fit.mu_hat,
        "alpha_hat": fit.alpha_hat,
        "beta_hat": fit.beta_hat,
        "left_slope": fit.left_slope,
        "right_slope": fit.right_slope,
        "sse": fit.sse,
        "sigma2_hat": fit.sigma2_hat,
    }
    if args.format == "json":
        sys.stdout.write(json.dumps(payload, indent=2) + "\n")
    else:
        for key, value in payload.items():
            sys.stdout.write(f"{key}: {value:.6g}\n" if isinstance(value, float)
                             else f"{key}: {value}\n")
    return 0


def _parse_levels(text: str) -> list:
    try:
        levels = [float(part) for part in text.split(",") if part.strip()]
    except ValueError:
        raise UsageError(f"bad --levels value: {text!r}")
    for lvl in levels:
        if not 0.0 < lvl < 100.0:
            raise UsageError(f"confidence percent out of range: {lvl}")
    return levels


def _simulate(args, method: str):
    cache = _cache_from(args)
    if method == "gp-grid":
        return simulate_limit_null(delta=args.delta, grid_size=args.grid,
                                   replicates=args.reps, seed=args.seed,
                                   cache=cache)
    if args.n is None:
        raise UsageError("--n is required with --method finite-n")
    return simulate_finite_n(n=args.n, delta=args.delta,
                             replicates=args.reps, seed=args.seed)


def _cmd_quantiles(args) -> int:
    levels = _parse_levels(args.levels)
    dist = _simulate(args, "gp-grid")
    rows = [(lvl, dist.quantile(lvl / 100.0)) for lvl in levels]
    if args.format == "csv":
        sys.stdout.write("confidence_percent,critical_value\n")
        for lvl, value in rows:
            sys.stdout.write(f"{lvl:g},{value!r}\n")
    else:
        sys.stdout.write(f"delta={args.delta:g}  grid={args.grid}  "
                         f"replicates={args.reps}  seed={args.seed}\n")
        for lvl, value in rows:
            sys.stdout.write(f"{lvl:6g}%  {value:.3f}\n")
    return 0


def _cmd_simulate_null(args) -> int:
    dist = _simulate(args, args.method)
    summary = {
        "method": dist.method,
        "delta": dist.delta,
        "grid_size": int(dist.grid.size),
        "replicates": dist.n_sim,
        "seed": dist.seed,
        "quantiles": {f"{lvl:g}": dist.quantile(lvl / 100.0)
                      for lvl in CRITICAL_LEVELS},
    }
    _emit(json.dumps(summary, indent=2) + "\n", args.output)
    return 0


_COMMANDS = {
    "analyze": _cmd_analyze,
    "fit": _cmd_fit,
    "quantiles": _cmd_quantiles,
    "simulate-null": _cmd_simulate_null,
}


def main(argv=None) -> int:
    try:
        args = _build_parser().parse_args(argv)
        return _COMMANDS[args.command](args)
    except JoinpointError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return exc.exit_code
    except OSError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
