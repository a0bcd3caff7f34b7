"""Recompute the bundled reference score tables and diff against them.

The bundled datasets store raw scores only; this module recomputes every
metric cell and aggregate row, compares them with the printed values
shipped in ``data/golden/``, and collects every disagreement into a
machine-readable inconsistency log. The reference tables are known to
contain a handful of internal contradictions (malformed cells, values
that disagree with the same table's raw column, aggregate rows that
disagree with their own cells); those are reported, never patched.

Printed percents carry two decimals, so a recomputed cell matches when
it agrees within 0.02 percentage points. Aggregate rows use a looser
0.5-point tolerance and are only expected to match when the printed
column is self-consistent.
"""

from __future__ import annotations

import csv
import json
import statistics
from dataclasses import asdict, dataclass
from pathlib import Path

from hwrbench.datasets import Dataset, load_all_bundled
from hwrbench.games import BaselineRegistry, data_path
from hwrbench.metrics import CapMode, MetricKind
from hwrbench.numfmt import round_half_up
from hwrbench.report import (
    FIGURES,
    EvaluationReport,
    TableLayout,
    emit_plot_series,
    evaluate,
    render_table,
)

CELL_TOLERANCE_PP = 0.02
AGGREGATE_TOLERANCE_PP = 0.5

# Reference-table layouts: table id -> (metric, algorithm columns in print order).
REFERENCE_TABLES: dict[str, tuple[MetricKind, tuple[str, ...]]] = {}
for _metric in (MetricKind.HNS, MetricKind.HWRNS, MetricKind.SABER):
    REFERENCE_TABLES[f"{_metric.value}-sota-200m-model-free"] = (
        _metric, ("Rainbow", "IMPALA", "LASER", "GDI-I3", "GDI-H3"))
    REFERENCE_TABLES[f"{_metric.value}-sota-10bplus-model-free"] = (
        _metric, ("R2D2", "NGU", "Agent57", "GDI-I3", "GDI-H3"))
    REFERENCE_TABLES[f"{_metric.value}-sota-model-based"] = (
        _metric, ("MuZero", "DreamerV2", "SimPLe", "GDI-I3", "GDI-H3"))
    REFERENCE_TABLES[f"{_metric.value}-sota-other"] = (
        _metric, ("Muesli", "Go-Explore", "GDI-I3", "GDI-H3"))


@dataclass(frozen=True)
class Inconsistency:
    """One disagreement between a recomputed value and a printed one."""

    table: str
    algorithm: str
    game: str  # empty for aggregate rows
    kind: str  # "value" | "malformed" | "coverage" | "aggregate" | "hwrb"
    recomputed: str
    printed: str


@dataclass(frozen=True)
class TableStats:
    table: str
    cells: int
    matches: int

    @property
    def match_rate(self) -> float:
        return self.matches / self.cells if self.cells else 1.0


@dataclass(frozen=True)
class AggregateCheck:
    """Recomputed vs printed mean/median for one table column.

    ``column_clean`` means no cell of the printed column was logged as
    inconsistent; ``printed_self_consistent`` means the printed footer
    agrees with the aggregate of the table's own printed cells. Only
    checks with both properties are expected to be within tolerance.
    """

    table: str
    algorithm: str
    stat: str  # "mean" | "median"
    recomputed_pp: float
    printed_pp: float | None
    printed_text: str
    column_clean: bool
    printed_self_consistent: bool

    @property
    def within_tolerance(self) -> bool:
        return (self.printed_pp is not None
                and abs(self.recomputed_pp - self.printed_pp) <= AGGREGATE_TOLERANCE_PP)


@dataclass
class ReproductionResult:
    report: EvaluationReport
    table_stats: list[TableStats]
    inconsistencies: list[Inconsistency]
    aggregate_checks: list[AggregateCheck]
    hwrb: dict[str, dict[str, int | None]]  # algorithm -> recomputed/printed counts

    @property
    def total_cells(self) -> int:
        return sum(t.cells for t in self.table_stats)

    @property
    def total_matches(self) -> int:
        return sum(t.matches for t in self.table_stats)

    @property
    def match_rate(self) -> float:
        return self.total_matches / self.total_cells

    def cell_mismatches(self, table: str, algorithm: str) -> list[Inconsistency]:
        return [m for m in self.inconsistencies
                if m.table == table and m.algorithm == algorithm and m.game]


def _load_golden_cells() -> dict[tuple[str, str, str], str]:
    """(table, algorithm, game) -> printed percent text."""
    cells = {}
    with open(data_path("golden", "printed_cells.csv"), newline="", encoding="utf-8") as fh:
        for row in csv.DictReader(fh):
            cells[(row["table"], row["algorithm"], row["game"])] = row["printed_pct"]
    return cells


def _load_golden_aggregates() -> dict[tuple[str, str, str], str]:
    """(table, algorithm, row) -> printed text; rows mean/median/..._eff/hwrb."""
    rows = {}
    with open(data_path("golden", "printed_aggregates.csv"), newline="",
              encoding="utf-8") as fh:
        for row in csv.DictReader(fh):
            rows[(row["table"], row["algorithm"], row["row"])] = row["printed"]
    return rows


def _parse_number(text: str) -> float | None:
    try:
        return float(text)
    except ValueError:
        return None


def run_reproduction(
    baselines: BaselineRegistry | None = None,
    datasets: list[Dataset] | None = None,
) -> ReproductionResult:
    """Recompute all reference tables (table-compat caps) and diff them."""
    registry = baselines if baselines is not None else BaselineRegistry.load()
    data = datasets if datasets is not None else load_all_bundled()
    report = evaluate(data, registry, CapMode.TABLE_COMPAT)
    golden_cells = _load_golden_cells()
    golden_aggs = _load_golden_aggregates()

    inconsistencies: list[Inconsistency] = []
    table_stats: list[TableStats] = []

    for table_id, (metric, algos) in REFERENCE_TABLES.items():
        cells = matches = 0
        for algo in algos:
            for (key_algo, game), cell in report.cells.items():
                if key_algo != algo:
                    continue
                printed = golden_cells.get((table_id, algo, game))
                recomputed_pct = round_half_up(cell.metrics[metric].value * 100.0)
                recomputed_text = f"{recomputed_pct:.2f}"
                cells += 1
                if printed is None or printed.upper() == "N/A":
                    inconsistencies.append(Inconsistency(
                        table_id, algo, game, "coverage", recomputed_text,
                        printed if printed is not None else "<absent>"))
                    continue
                printed_value = _parse_number(printed)
                if printed_value is None:
                    inconsistencies.append(Inconsistency(
                        table_id, algo, game, "malformed", recomputed_text, printed))
                    continue
                if abs(recomputed_pct - printed_value) <= CELL_TOLERANCE_PP + 1e-9:
                    matches += 1
                else:
                    inconsistencies.append(Inconsistency(
                        table_id, algo, game, "value", recomputed_text, printed))
        table_stats.append(TableStats(table_id, cells, matches))

    # Aggregate rows: compare recomputed mean/median per column against the
    # printed footer. A printed footer that disagrees with its own printed
    # cells (e.g. a wrong denominator) is itself inconsistent; it is logged
    # and not expected to match the recomputation.
    cell_mismatch_keys = {(m.table, m.algorithm) for m in inconsistencies if m.game}
    aggregate_checks: list[AggregateCheck] = []
    for table_id, (metric, algos) in REFERENCE_TABLES.items():
        for algo in algos:
            row = report.aggregates[algo][metric]
            printed_col = [
                v for (t, a, g), text in golden_cells.items()
                if t == table_id and a == algo and g
                and (v := _parse_number(text)) is not None
            ]
            for stat, recomputed in (("mean", row.mean), ("median", row.median)):
                printed_text = golden_aggs.get((table_id, algo, stat))
                if printed_text is None:
                    continue
                printed_value = _parse_number(printed_text)
                if printed_value is not None and printed_col:
                    from_cells = (statistics.fmean(printed_col) if stat == "mean"
                                  else statistics.median(printed_col))
                    self_consistent = (
                        abs(from_cells - printed_value) <= AGGREGATE_TOLERANCE_PP)
                else:
                    self_consistent = False
                check = AggregateCheck(
                    table=table_id,
                    algorithm=algo,
                    stat=stat,
                    recomputed_pp=recomputed * 100.0,
                    printed_pp=printed_value,
                    printed_text=printed_text,
                    column_clean=(table_id, algo) not in cell_mismatch_keys,
                    printed_self_consistent=self_consistent,
                )
                aggregate_checks.append(check)
                if not check.within_tolerance:
                    inconsistencies.append(Inconsistency(
                        table_id, algo, "", "aggregate",
                        f"{check.recomputed_pp:.2f}", printed_text))

    # Breakthrough counts, once per algorithm from the hwrns table family.
    hwrb: dict[str, dict[str, int | None]] = {}
    for table_id, (metric, algos) in REFERENCE_TABLES.items():
        if metric is not MetricKind.HWRNS:
            continue
        for algo in algos:
            recomputed = report.aggregates[algo][MetricKind.HWRNS].hwrb_count
            entry = hwrb.setdefault(algo, {"recomputed": recomputed})
            printed_text = golden_aggs.get((table_id, algo, "hwrb"))
            printed_value = _parse_number(printed_text) if printed_text else None
            key = f"printed:{table_id}"
            entry[key] = int(printed_value) if printed_value is not None else None
            if printed_value is not None and int(printed_value) != recomputed:
                inconsistencies.append(Inconsistency(
                    table_id, algo, "", "hwrb", str(recomputed), printed_text))
    # SABER tables reprint the count; disagreements there are conflicts too.
    for table_id, (metric, algos) in REFERENCE_TABLES.items():
        if metric is not MetricKind.SABER:
            continue
        for algo in algos:
            recomputed = report.aggregates[algo][MetricKind.HWRNS].hwrb_count
            printed_text = golden_aggs.get((table_id, algo, "hwrb"))
            printed_value = _parse_number(printed_text) if printed_text else None
            if printed_value is not None and int(printed_value) != recomputed:
                inconsistencies.append(Inconsistency(
                    table_id, algo, "", "hwrb", str(recomputed), printed_text))

    return ReproductionResult(
        report=report,
        table_stats=table_stats,
        inconsistencies=inconsistencies,
        aggregate_checks=aggregate_checks,
        hwrb=hwrb,
    )


def write_artifacts(result: ReproductionResult, out_dir: str | Path) -> list[Path]:
    """Write the inconsistency log, summary, and recomputed tables."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    written = []

    log_path = out / "inconsistency_log.json"
    log_path.write_text(json.dumps(
        [asdict(m) for m in result.inconsistencies], indent=2) + "\n",
        encoding="utf-8")
    written.append(log_path)

    summary_path = out / "summary.json"
    clean = [c for c in result.aggregate_checks
             if c.column_clean and c.printed_self_consistent]
    summary_path.write_text(json.dumps({
        "cells": result.total_cells,
        "matches": result.total_matches,
        "match_rate": result.match_rate,
        "tables": {t.table: {"cells": t.cells, "matches": t.matches,
                             "match_rate": t.match_rate}
                   for t in result.table_stats},
        "aggregate_checks": len(result.aggregate_checks),
        "clean_aggregate_checks": len(clean),
        "clean_aggregate_matches": sum(1 for c in clean if c.within_tolerance),
        "inconsistencies": len(result.inconsistencies),
        "hwrb": result.hwrb,
    }, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    written.append(summary_path)

    tables_dir = out / "tables"
    tables_dir.mkdir(exist_ok=True)
    for table_id, (metric, algos) in REFERENCE_TABLES.items():
        layout = TableLayout(metric=metric, algorithms=algos, title=table_id)
        path = tables_dir / f"{table_id}.csv"
        path.write_text(render_table(result.report, layout, fmt="csv"),
                        encoding="utf-8")
        written.append(path)

    figures_dir = out / "figures"
    figures_dir.mkdir(exist_ok=True)
    for figure in FIGURES:
        payload = [
            {
                "name": s.name,
                "points": [list(p) for p in s.points],
                "labels": list(s.labels),
                "flagged": list(s.flagged),
            }
            for s in emit_plot_series(result.report, figure)
        ]
        path = figures_dir / f"{figure}.json"
        path.write_text(json.dumps(payload, indent=2) + "\n", encoding="utf-8")
        written.append(path)
    return written


def summary_lines(result: ReproductionResult) -> list[str]:
    lines = [
        f"cells compared: {result.total_cells}",
        f"cells matched:  {result.total_matches} ({result.match_rate:.2%})",
        f"inconsistencies logged: {len(result.inconsistencies)}",
    ]
    for t in result.table_stats:
        lines.append(f"  {t.table:35s} {t.matches:4d}/{t.cells:4d} ({t.match_rate:.2%})")
    lines.append("breakthrough counts (recomputed):")
    for algo, entry in result.hwrb.items():
        lines.append(f"  {algo:12s} {entry['recomputed']}")
    return lines
