"""Result-table emission: CSV files mirroring the published table shapes.

All tables are pure reshapes of the persisted summary/run rows, so they can
be regenerated without re-simulating.  Missing cells are left empty.
"""

from __future__ import annotations

import csv
import math
import os
from typing import Dict, List, Optional

from .agents.base import AGENT_NAMES
from .shocks import REGIME_NAMES

MARKETS = ("logit", "hotelling", "linear")
SCHEMES = ("scheme_a", "scheme_b", "scheme_c")

TABLE_FILES = [
    "table_baseline.csv",
    "table_efficiency.csv",
    "table_shock_logit.csv",
    "table_shock_hotelling.csv",
    "table_shock_linear.csv",
    "table_delta_change.csv",
    "table_heterogeneous.csv",
    "table_avg_price_logit.csv",
    "table_cs_change.csv",
]
SCATTER_FILE = "scatter_delta_rpdi.csv"


def _num(value) -> float:
    if value is None or value == "":
        return math.nan
    return float(value)


def _fmt(value) -> str:
    if value is None or (isinstance(value, float) and math.isnan(value)):
        return ""
    return f"{value:.6g}"


class _SummaryIndex:
    """Cell-level view of the per-firm summary rows."""

    def __init__(self, rows: List[dict]):
        self.cells: Dict[tuple, dict] = {}
        for row in rows:
            key = (row["agent0"], row["agent1"], row["market"], row["regime"])
            cell = self.cells.setdefault(key, {"rows": {}})
            cell["rows"][int(row["firm"])] = row

    def firm_rows(self, agent0, agent1, market, regime):
        cell = self.cells.get((agent0, agent1, market, regime))
        return cell["rows"] if cell else None

    def _mean_over_firms(self, agent0, agent1, market, regime, column) -> float:
        rows = self.firm_rows(agent0, agent1, market, regime)
        if not rows:
            return math.nan
        vals = [_num(r[column]) for r in rows.values()]
        return sum(vals) / len(vals)

    def homog(self, algo, market, regime, column) -> float:
        """Two-firm mean of a column for an algorithm playing itself."""
        return self._mean_over_firms(algo, algo, market, regime, column)

    def cell_value(self, agent0, agent1, market, regime, column) -> float:
        rows = self.firm_rows(agent0, agent1, market, regime)
        if not rows:
            return math.nan
        return _num(next(iter(rows.values()))[column])

    def matchups(self):
        seen = []
        for (a0, a1, _m, _r) in self.cells:
            if a0 != a1 and (a0, a1) not in seen:
                seen.append((a0, a1))
        return seen

    def regimes_present(self):
        present = {key[3] for key in self.cells}
        return [r for r in REGIME_NAMES if r in present]


def _write(path: str, header: List[str], rows: List[List]):
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        for row in rows:
            writer.writerow([cell if isinstance(cell, str) else _fmt(cell)
                             for cell in row])


def write_baseline_table(path: str, idx: _SummaryIndex):
    header = ["algorithm"]
    for m in MARKETS:
        header += [f"{m}_delta", f"{m}_rpdi"]
    rows = []
    for algo in AGENT_NAMES:
        row = [algo]
        for m in MARKETS:
            row += [idx.homog(algo, m, "none", "delta_mean"),
                    idx.homog(algo, m, "none", "rpdi_mean")]
        rows.append(row)
    _write(path, header, rows)


def write_efficiency_table(path: str, idx: _SummaryIndex):
    header = ["algorithm", *MARKETS]
    rows = []
    for algo in AGENT_NAMES:
        row = [algo]
        for m in MARKETS:
            d = idx.homog(algo, m, "none", "delta_mean")
            r = idx.homog(algo, m, "none", "rpdi_mean")
            row.append(d / r if r not in (0.0,) and not math.isnan(r) else math.nan)
        rows.append(row)
    _write(path, header, rows)


def write_shock_table(path: str, idx: _SummaryIndex, market: str):
    header = ["algorithm"]
    for reg in REGIME_NAMES:
        header += [f"{reg}_delta", f"{reg}_rpdi"]
    rows = []
    for algo in AGENT_NAMES:
        row = [algo]
        for reg in REGIME_NAMES:
            row += [idx.homog(algo, market, reg, "delta_mean"),
                    idx.homog(algo, market, reg, "rpdi_mean")]
        rows.append(row)
    _write(path, header, rows)


def write_delta_change_table(path: str, idx: _SummaryIndex):
    header = ["algorithm"]
    for m in MARKETS:
        for s in SCHEMES:
            header.append(f"{m}_{s}")
    rows = []
    for algo in AGENT_NAMES:
        row = [algo]
        for m in MARKETS:
            base = idx.homog(algo, m, "none", "delta_mean")
            for s in SCHEMES:
                shocked = idx.homog(algo, m, s, "delta_mean")
                row.append(shocked - base)
        rows.append(row)
    _write(path, header, rows)


def write_heterogeneous_table(path: str, idx: _SummaryIndex):
    header = ["matchup", "regime", "firm", "agent"]
    for m in MARKETS:
        header += [f"{m}_delta", f"{m}_rpdi"]
    rows = []
    for (a0, a1) in idx.matchups():
        for reg in idx.regimes_present():
            for firm in (0, 1):
                row = [f"{a0} vs {a1}", reg, str(firm), (a0, a1)[firm]]
                any_value = False
                for m in MARKETS:
                    frows = idx.firm_rows(a0, a1, m, reg)
                    if frows and firm in frows:
                        row += [_num(frows[firm]["delta_mean"]),
                                _num(frows[firm]["rpdi_mean"])]
                        any_value = True
                    else:
                        row += [math.nan, math.nan]
                if any_value:
                    rows.append(row)
    _write(path, header, rows)


def write_avg_price_table(path: str, idx: _SummaryIndex):
    header = ["algorithm", *REGIME_NAMES]
    rows = []
    for algo in AGENT_NAMES:
        rows.append([algo] + [idx.homog(algo, "logit", reg, "price_mean")
                              for reg in REGIME_NAMES])
    nash_row = ["nash_shock_adj"]
    for reg in REGIME_NAMES:
        # benchmark columns are constant within a cell; any logit cell works
        vals = [idx.cell_value(a, a, "logit", reg, "p_nash") for a in AGENT_NAMES]
        vals = [v for v in vals if not math.isnan(v)]
        nash_row.append(vals[0] if vals else math.nan)
    rows.append(nash_row)
    _write(path, header, rows)


def write_cs_table(path: str, idx: _SummaryIndex):
    header = ["matchup", *REGIME_NAMES]
    rows = []
    for algo in AGENT_NAMES:
        rows.append([f"{algo} vs {algo}"]
                    + [idx.homog(algo, "logit", reg, "cs_change_pct")
                       for reg in REGIME_NAMES])
    _write(path, header, rows)


def write_scatter(path: str, run_rows: List[dict]):
    header = ["agent", "market", "regime", "cell", "replicate", "firm",
              "delta", "rpdi"]
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        for row in run_rows:
            if row.get("status", "ok") != "ok":
                continue
            writer.writerow([row["agent"], row["market"], row["regime"],
                             row["cell"], row["replicate"], row["firm"],
                             _fmt(_num(row["delta"])), _fmt(_num(row["rpdi"]))])


def write_all_tables(out_dir: str, summary_rows: List[dict],
                     results=None, run_rows: Optional[List[dict]] = None):
    """Emit the nine table CSVs plus the delta-vs-RPDI scatter file."""
    tables_dir = os.path.join(out_dir, "tables")
    os.makedirs(tables_dir, exist_ok=True)
    idx = _SummaryIndex(summary_rows)
    write_baseline_table(os.path.join(tables_dir, "table_baseline.csv"), idx)
    write_efficiency_table(os.path.join(tables_dir, "table_efficiency.csv"), idx)
    for market in MARKETS:
        write_shock_table(os.path.join(tables_dir, f"table_shock_{market}.csv"),
                          idx, market)
    write_delta_change_table(os.path.join(tables_dir, "table_delta_change.csv"), idx)
    write_heterogeneous_table(os.path.join(tables_dir, "table_heterogeneous.csv"), idx)
    write_avg_price_table(os.path.join(tables_dir, "table_avg_price_logit.csv"), idx)
    write_cs_table(os.path.join(tables_dir, "table_cs_change.csv"), idx)

    if run_rows is None and results is not None:
        run_rows = []
        for r in results:
            for firm in (0, 1):
                run_rows.append({
                    "agent": r.agents[firm], "market": r.market,
                    "regime": r.regime, "cell": r.cell,
                    "replicate": r.replicate, "firm": firm,
                    "delta": r.delta[firm], "rpdi": r.rpdi[firm],
                    "status": r.status,
                })
    if run_rows is not None:
        write_scatter(os.path.join(out_dir, SCATTER_FILE), run_rows)
