"""Batch command-line front end.

Exit codes: 0 success, 1 config error, 2 partial run failure, 3 benchmark
failure.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys

from .benchmarks import DEFAULT_SAMPLES, DEFAULT_SEED, compute_benchmarks
from .config import (ExperimentConfig, apply_env_overrides, apply_overrides,
                     load_config)
from .errors import BenchmarkFailureError, ConfigError, DuopolyLabError
from .markets import Model, market_preset
from .runner import run_grid
from .shocks import REGIME_NAMES, regime_params
from .tables import write_all_tables

_PACKAGED_CONFIGS = os.path.join(os.path.dirname(os.path.abspath(__file__)),
                                 "configs")


def _resolve_config_path(name: str) -> str:
    if os.path.exists(name):
        return name
    candidate = os.path.join(_PACKAGED_CONFIGS, f"{name}.toml")
    if os.path.exists(candidate):
        return candidate
    raise ConfigError(f"config {name!r} not found (no file, no packaged preset)")


def _build_config(args) -> ExperimentConfig:
    if args.config:
        cfg = load_config(_resolve_config_path(args.config))
    else:
        cfg = ExperimentConfig()
    apply_env_overrides(cfg)
    apply_overrides(cfg, args.set or [])
    if args.seeds is not None:
        cfg.seeds = args.seeds
    if args.out is not None:
        cfg.out_dir = args.out
    if args.jobs is not None:
        cfg.jobs = args.jobs
    if args.series:
        cfg.series = True
    if args.quiet:
        cfg.quiet = True
    return cfg.validate()


def cmd_run(args) -> int:
    cfg = _build_config(args)
    progress = (lambda msg: None) if cfg.quiet else (lambda msg: print(msg, flush=True))
    summaries, results, _cache = run_grid(cfg, progress)
    failures = sum(1 for r in results if r.status != "ok")
    total = len(results)
    print(f"completed {total - failures}/{total} runs; outputs in {cfg.out_dir}")
    return 2 if failures else 0


def cmd_benchmark(args) -> int:
    params = market_preset(args.market)
    regime = regime_params(args.regime)
    try:
        bench = compute_benchmarks(params, regime, args.samples, args.seed)
    except BenchmarkFailureError as exc:
        print(f"benchmark failed: {exc} (last iterate {exc.last_iterate}, "
              f"residual {exc.residual})", file=sys.stderr)
        return 3
    writer = csv.writer(sys.stdout)
    writer.writerow(["market", "regime", "p_nash", "p_mono", "pi_nash",
                     "pi_mono", "samples", "seed"])
    writer.writerow([args.market, args.regime, f"{bench.p_nash:.6g}",
                     f"{bench.p_mono:.6g}", f"{bench.pi_nash:.6g}",
                     f"{bench.pi_mono:.6g}", bench.mc_samples, bench.mc_seed])
    return 0


def cmd_tables(args) -> int:
    out = args.out or "results"
    summary_path = os.path.join(out, "summary.csv")
    if not os.path.exists(summary_path):
        print(f"no summary at {summary_path}; run an experiment first",
              file=sys.stderr)
        return 1
    with open(summary_path, newline="") as fh:
        summary = list(csv.DictReader(fh))
    runs_path = os.path.join(out, "runs.csv")
    run_rows = None
    if os.path.exists(runs_path):
        with open(runs_path, newline="") as fh:
            run_rows = list(csv.DictReader(fh))
    write_all_tables(out, summary, run_rows=run_rows)
    print(f"tables regenerated in {os.path.join(out, 'tables')}")
    return 0


def cmd_validate(args) -> int:
    cfg = _build_config(args)
    json.dump(cfg.resolved(), sys.stdout, indent=2, sort_keys=True)
    print()
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="duopoly-lab",
        description="Pricing-agent duopoly simulations with AR(1) demand shocks")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--config", help="config file path or packaged preset name")
        p.add_argument("--set", action="append", metavar="KEY=VALUE",
                       help="override a config key (repeatable)")
        p.add_argument("--seeds", type=int)
        p.add_argument("--out", help="output directory")
        p.add_argument("--jobs", type=int, help="parallel runs (0 = all cores)")
        p.add_argument("--series", action="store_true",
                       help="persist downsampled per-period time series")
        p.add_argument("--quiet", action="store_true")

    p_run = sub.add_parser("run", help="execute the experiment grid")
    common(p_run)
    p_run.set_defaults(func=cmd_run)

    p_bench = sub.add_parser("benchmark", help="print benchmark CSV for one cell")
    p_bench.add_argument("--market", required=True,
                         choices=[m.value for m in Model])
    p_bench.add_argument("--regime", required=True, choices=REGIME_NAMES)
    p_bench.add_argument("--samples", type=int, default=DEFAULT_SAMPLES)
    p_bench.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p_bench.set_defaults(func=cmd_benchmark)

    p_tables = sub.add_parser("tables", help="regenerate tables from summaries")
    p_tables.add_argument("--out", help="output directory holding summary.csv")
    p_tables.set_defaults(func=cmd_tables)

    p_val = sub.add_parser("validate", help="print the fully resolved config")
    common(p_val)
    p_val.set_defaults(func=cmd_validate)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 1
    except BenchmarkFailureError as exc:
        print(f"benchmark failure: {exc}", file=sys.stderr)
        return 3
    except DuopolyLabError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
