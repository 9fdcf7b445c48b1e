"""Experiment orchestration: single runs, the full grid, and persistence.

A run is the unit of determinism and parallelism: (cell, replicate) fixes
every random draw through named SeedSequence substreams.  Aggregation is a
deterministic reduction over sorted run ids.

Demand shocks are latent to the firms: they move the realized quantities and
profits that the metrics evaluate, but agents act on observed prices and
learn from the structural (zero-shock) profit signal.  Learning trajectories
are therefore identical across shock regimes of the same seed family, and
regime effects show up purely through the evaluated outcomes.
"""

from __future__ import annotations

import csv
import hashlib
import json
import math
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

import numpy as np

from . import metrics
from .agents.base import Observation, make_agent
from .benchmarks import BenchmarkCache, Benchmarks
from .config import ExperimentConfig
from .markets import GRID_SIZE, MarketParams, build_price_grid, market_preset, step
from .metrics import WindowStats
from .shocks import ShockState, regime_params


def cell_id(agent0: str, agent1: str, market: str, regime: str) -> str:
    return f"{agent0}-vs-{agent1}__{market}__{regime}"


def seed_family(agent0: str, agent1: str, market: str) -> str:
    """Seed scope shared by all four regimes of a pairing/market.

    Keeping the regime out of the seed derivation gives common random
    numbers across regimes, so regime contrasts are paired comparisons
    rather than independent redraws.
    """
    return f"{agent0}-vs-{agent1}__{market}"


def _family_hash(family: str) -> int:
    digest = hashlib.sha256(family.encode()).digest()
    return int.from_bytes(digest[:8], "big")


def run_seed_sequences(base_seed: int, family: str, replicate: int):
    """Disjoint named substreams: firm shocks, firm agents, initial prices."""
    root = np.random.SeedSequence([base_seed, _family_hash(family), replicate])
    shock0, shock1, agent0, agent1, init = root.spawn(5)
    return {"shock0": shock0, "shock1": shock1,
            "agent0": agent0, "agent1": agent1, "init": init}


@dataclass
class RunResult:
    cell: str
    agents: Tuple[str, str]
    market: str
    regime: str
    replicate: int
    stats: Optional[WindowStats] = None
    delta: Tuple[float, float] = (math.nan, math.nan)
    rpdi: Tuple[float, float] = (math.nan, math.nan)
    wall_time: float = 0.0
    status: str = "ok"
    error: str = ""
    series: Optional[np.ndarray] = None   # (T/stride, 6): prices, profits, shocks


def run_once(cfg: ExperimentConfig, pairing: Tuple[str, str], market: str,
             regime_name: str, replicate: int, bench: Benchmarks) -> RunResult:
    """Simulate one 10,000-period interaction and compute terminal metrics."""
    cid = cell_id(pairing[0], pairing[1], market, regime_name)
    t_start = time.perf_counter()
    result = RunResult(cell=cid, agents=pairing, market=market,
                       regime=regime_name, replicate=replicate)
    try:
        params = market_preset(market)
        grid = build_price_grid(params.p_nash, params.p_mono,
                                literal_upper=cfg.grid_literal_upper)
        regime = regime_params(regime_name)
        family = seed_family(pairing[0], pairing[1], market)
        seqs = run_seed_sequences(cfg.base_seed, family, replicate)
        shocks = ShockState.from_seed_sequences(regime, [seqs["shock0"], seqs["shock1"]])
        rng_init = np.random.default_rng(seqs["init"])

        agents = [
            make_agent(pairing[i], grid, np.random.default_rng(seqs[f"agent{i}"]),
                       cfg.agent_overrides.get(pairing[i]))
            for i in (0, 1)
        ]

        # both firms' "last prices" start at a uniform random grid point
        last = [float(grid.points[rng_init.integers(GRID_SIZE)]) for _ in (0, 1)]

        # hypothetical profit queries use the deterministic demand model:
        # shocks are latent, so no agent may evaluate prices under them
        oracles = [
            lambda x, y: step(params, x, y).profits[0],
            lambda x, y: step(params, y, x).profits[1],
        ]

        T, window = cfg.horizon, cfg.window
        prices = np.empty((T, 2))
        profits = np.empty((T, 2))
        keep_series = cfg.series
        shock_log = np.empty((T, 2)) if keep_series else None

        for t in range(T):
            obs = [Observation(last[i], last[1 - i], t) for i in (0, 1)]
            p = [agents[i].act(obs[i], profit_fn=oracles[i]) for i in (0, 1)]
            z1, z2 = shocks.z
            outcome = step(params, p[0], p[1], z1, z2)
            if not all(map(math.isfinite, (*p, *outcome.profits))):
                raise FloatingPointError(
                    f"non-finite price/profit at period {t}: p={p}, "
                    f"pi={outcome.profits}")
            prices[t] = p
            profits[t] = outcome.profits
            if keep_series:
                shock_log[t] = shocks.z

            # learning rewards come from the structural (z = 0) demand model:
            # the disturbances are latent, so they shape realized outcomes but
            # never the signal firms learn from
            learn = outcome if regime.sigma_eta == 0.0 else step(params, p[0], p[1])
            next_obs = [Observation(p[i], p[1 - i], t + 1) for i in (0, 1)]
            for i in (0, 1):
                agents[i].observe(obs[i], p[i], learn.profits[i], next_obs[i])
            last = p
            shocks.advance()

        stats = WindowStats.from_series(prices, profits, window,
                                        run_id=cid, seed=replicate)
        result.stats = stats
        result.delta = tuple(
            metrics.delta_index(stats.mean_profit[i], bench.pi_nash, bench.pi_mono)
            for i in (0, 1))
        result.rpdi = tuple(
            metrics.rpdi(stats.mean_price[i], bench.p_nash, bench.p_mono)
            for i in (0, 1))
        if keep_series:
            stride = max(1, cfg.series_stride)
            rows = np.arange(0, T, stride)
            result.series = np.column_stack(
                [rows, prices[rows], profits[rows], shock_log[rows]])
    except Exception as exc:  # recorded per-run; the grid keeps going
        result.status = "failed"
        result.error = f"{type(exc).__name__}: {exc}"
    result.wall_time = time.perf_counter() - t_start
    return result


def _run_spec(args):
    cfg, pairing, market, regime_name, replicate, bench = args
    return run_once(cfg, pairing, market, regime_name, replicate, bench)


@dataclass
class CellSummary:
    cell: str
    agents: Tuple[str, str]
    market: str
    regime: str
    seeds: int
    bench: Benchmarks
    delta_mean: Tuple[float, float] = (math.nan, math.nan)
    delta_std: Tuple[float, float] = (math.nan, math.nan)
    rpdi_mean: Tuple[float, float] = (math.nan, math.nan)
    rpdi_std: Tuple[float, float] = (math.nan, math.nan)
    price_mean: Tuple[float, float] = (math.nan, math.nan)
    price_std: Tuple[float, float] = (math.nan, math.nan)
    profit_mean: Tuple[float, float] = (math.nan, math.nan)
    profit_std: Tuple[float, float] = (math.nan, math.nan)
    cs_change_pct: float = math.nan
    failures: int = 0


def summarize_cell(results: List[RunResult], bench: Benchmarks,
                   cfg: ExperimentConfig) -> CellSummary:
    ok = [r for r in results if r.status == "ok"]
    first = results[0]
    summary = CellSummary(cell=first.cell, agents=first.agents,
                          market=first.market, regime=first.regime,
                          seeds=len(ok), bench=bench,
                          failures=len(results) - len(ok))
    if not ok:
        return summary

    def col(getter):
        arr = np.array([getter(r) for r in ok])
        return (tuple(arr.mean(axis=0)), tuple(arr.std(axis=0)))

    summary.delta_mean, summary.delta_std = col(lambda r: r.delta)
    summary.rpdi_mean, summary.rpdi_std = col(lambda r: r.rpdi)
    summary.price_mean, summary.price_std = col(lambda r: r.stats.mean_price)
    summary.profit_mean, summary.profit_std = col(lambda r: r.stats.mean_profit)

    if first.market == "logit":
        params = market_preset(first.market)
        regime = regime_params(first.regime)
        summary.cs_change_pct = metrics.consumer_surplus_change_pct(
            summary.price_mean, bench.p_nash, params, regime,
            samples=min(cfg.mc_samples, 20_000), seed=cfg.mc_seed)
    return summary


class GridRunner:
    def __init__(self, cfg: ExperimentConfig, progress=None):
        self.cfg = cfg.validate()
        self.cache = BenchmarkCache()
        self.progress = progress or (lambda msg: None)

    def cells(self):
        cfg = self.cfg
        pairings = list(cfg.pairings)
        if cfg.swap_roles:
            for a0, a1 in list(pairings):
                if a0 != a1 and (a1, a0) not in pairings:
                    pairings.append((a1, a0))
        for pairing in pairings:
            for market in cfg.markets:
                for regime in cfg.regimes:
                    yield tuple(pairing), market, regime

    def benchmarks_for(self, market: str, regime_name: str) -> Benchmarks:
        return self.cache.get(market_preset(market), regime_params(regime_name),
                              self.cfg.mc_samples, self.cfg.mc_seed)

    def run(self) -> Tuple[List[CellSummary], List[RunResult]]:
        cfg = self.cfg
        specs = []
        for pairing, market, regime in self.cells():
            bench = self.benchmarks_for(market, regime)
            for rep in range(cfg.seeds):
                specs.append((cfg, pairing, market, regime, rep, bench))

        jobs = cfg.jobs if cfg.jobs > 0 else (os.cpu_count() or 1)
        if jobs > 1 and len(specs) > 1:
            with ProcessPoolExecutor(max_workers=jobs) as pool:
                results = list(pool.map(_run_spec, specs, chunksize=1))
        else:
            results = [_run_spec(s) for s in specs]
        for r in results:
            self.progress(f"{r.cell} rep={r.replicate} status={r.status} "
                          f"({r.wall_time:.1f}s)")

        by_cell: Dict[str, List[RunResult]] = {}
        for r in results:
            by_cell.setdefault(r.cell, []).append(r)
        summaries = []
        for pairing, market, regime in self.cells():
            cid = cell_id(pairing[0], pairing[1], market, regime)
            cell_results = sorted(by_cell[cid], key=lambda r: r.replicate)
            bench = self.benchmarks_for(market, regime)
            summaries.append(summarize_cell(cell_results, bench, cfg))
        return summaries, results


# ---------------------------------------------------------------------------
# persistence

RUN_FIELDS = ["cell", "agent0", "agent1", "market", "regime", "replicate",
              "firm", "agent", "delta", "rpdi", "mean_price", "mean_profit",
              "wall_time", "status", "error"]

SUMMARY_FIELDS = ["cell", "agent0", "agent1", "market", "regime", "firm",
                  "agent", "seeds", "failures",
                  "delta_mean", "delta_std", "rpdi_mean", "rpdi_std",
                  "price_mean", "price_std", "profit_mean", "profit_std",
                  "eff_ratio", "cs_change_pct",
                  "p_nash", "p_mono", "pi_nash", "pi_mono",
                  "mc_samples", "mc_seed"]


def write_runs_csv(path: str, results: List[RunResult]):
    with open(path, "w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=RUN_FIELDS)
        writer.writeheader()
        for r in sorted(results, key=lambda r: (r.cell, r.replicate)):
            for firm in (0, 1):
                writer.writerow({
                    "cell": r.cell, "agent0": r.agents[0], "agent1": r.agents[1],
                    "market": r.market, "regime": r.regime,
                    "replicate": r.replicate, "firm": firm,
                    "agent": r.agents[firm],
                    "delta": r.delta[firm], "rpdi": r.rpdi[firm],
                    "mean_price": r.stats.mean_price[firm] if r.stats else math.nan,
                    "mean_profit": r.stats.mean_profit[firm] if r.stats else math.nan,
                    "wall_time": round(r.wall_time, 3),
                    "status": r.status, "error": r.error,
                })


def summary_rows(summaries: List[CellSummary]) -> List[dict]:
    rows = []
    for s in summaries:
        for firm in (0, 1):
            rows.append({
                "cell": s.cell, "agent0": s.agents[0], "agent1": s.agents[1],
                "market": s.market, "regime": s.regime, "firm": firm,
                "agent": s.agents[firm], "seeds": s.seeds,
                "failures": s.failures,
                "delta_mean": s.delta_mean[firm], "delta_std": s.delta_std[firm],
                "rpdi_mean": s.rpdi_mean[firm], "rpdi_std": s.rpdi_std[firm],
                "price_mean": s.price_mean[firm], "price_std": s.price_std[firm],
                "profit_mean": s.profit_mean[firm],
                "profit_std": s.profit_std[firm],
                "eff_ratio": metrics.efficiency_ratio(s.delta_mean[firm],
                                                      s.rpdi_mean[firm])
                if not math.isnan(s.delta_mean[firm]) else math.nan,
                "cs_change_pct": s.cs_change_pct,
                "p_nash": s.bench.p_nash, "p_mono": s.bench.p_mono,
                "pi_nash": s.bench.pi_nash, "pi_mono": s.bench.pi_mono,
                "mc_samples": s.bench.mc_samples, "mc_seed": s.bench.mc_seed,
            })
    return rows


def write_summary_csv(path: str, summaries: List[CellSummary]):
    with open(path, "w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=SUMMARY_FIELDS)
        writer.writeheader()
        for row in summary_rows(summaries):
            writer.writerow(row)


def write_series(out_dir: str, results: List[RunResult]):
    for r in results:
        if r.series is None:
            continue
        cell_dir = os.path.join(out_dir, "runs", r.cell)
        os.makedirs(cell_dir, exist_ok=True)
        path = os.path.join(cell_dir, f"{r.replicate}.csv")
        header = "t,price0,price1,profit0,profit1,shock0,shock1"
        np.savetxt(path, r.series, delimiter=",", header=header, comments="")


DEFAULT_HYPERPARAMS = {
    "qlearning": {"alpha": 0.15, "delta": 0.95, "beta": 1.5e-4},
    "pso": {"particles": 10, "c1": 1.75, "c2": 1.75, "vel_clip": 0.3,
            "restart_patience": 300, "keep_elite": True,
            "inertia": "max(0.4, 0.9 - 0.5 t / 10000)"},
    "ddqn": {"gamma": 0.99, "lr": 1e-4, "buffer": 50_000, "batch": 128,
             "target_period": 500, "epsilon_min": 0.01, "epsilon_decay": 0.995,
             "grad_clip": 1.0, "hidden": [128, 128, 64],
             "adam_betas": [0.9, 0.999], "adam_eps": 1e-8},
    "ddpg": {"gamma": 0.99, "actor_lr": 1e-4, "critic_lr": 1e-3,
             "weight_decay": 1e-2, "buffer": 1_000_000, "batch": 64,
             "tau": 0.001, "ou_theta": 0.15, "ou_mu": 0.0, "ou_sigma": 0.2,
             "exploration_decay": 0.9993, "exploration_min": 0.01,
             "hidden": [400, 300], "adam_betas": [0.9, 0.999],
             "adam_eps": 1e-8},
}

SEED_POLICY = ("run root = SeedSequence([base_seed, "
               "sha256('<a0>-vs-<a1>__<market>')[:8], replicate]); the regime "
               "is excluded so all four regimes share common random numbers; "
               "substreams spawned in order: firm0 shocks, firm1 shocks, "
               "firm0 agent, firm1 agent, initial prices")


def write_manifest(path: str, cfg: ExperimentConfig, cache: BenchmarkCache):
    manifest = {
        "config": cfg.resolved(),
        "hyperparameter_defaults": DEFAULT_HYPERPARAMS,
        "seed_policy": SEED_POLICY,
        "benchmarks": cache.entries(),
    }
    with open(path, "w") as fh:
        json.dump(manifest, fh, indent=2, sort_keys=True)


def run_grid(cfg: ExperimentConfig, progress=None):
    """Execute the grid, persist runs/summary/tables/manifest; return all three."""
    from .tables import write_all_tables

    runner = GridRunner(cfg, progress)
    summaries, results = runner.run()
    out = cfg.out_dir
    os.makedirs(out, exist_ok=True)
    write_runs_csv(os.path.join(out, "runs.csv"), results)
    write_summary_csv(os.path.join(out, "summary.csv"), summaries)
    if cfg.series:
        write_series(out, results)
    write_manifest(os.path.join(out, "manifest.json"), cfg, runner.cache)
    write_all_tables(out, summary_rows(summaries), results)
    return summaries, results, runner.cache
