"""
Report files.

JSON reports hold the aggregates, the realized fitness breakdown, the
per-step series and the resolved scenario; keys are sorted so that the
same scenario and seed always produce the same bytes. CSV files hold the
per-step series, controller comparisons and sweep rows.
"""

from __future__ import annotations

import csv
import json
import logging
from pathlib import Path
from typing import TYPE_CHECKING, Any, Iterable, Sequence

from geosched.constants import (
    COMPARISON_CSV_HEADER,
    REPORT_CSV_NAME,
    REPORT_JSON_NAME,
    STEP_CSV_HEADER,
)
from geosched.core.simulation.engine import CostReport

if TYPE_CHECKING:
    from geosched.core.simulation.sweep import SweepRow

logger = logging.getLogger(__name__)


def report_json(report: CostReport, timing: bool = False) -> str:
    """Serialized JSON report."""
    return json.dumps(report.to_dict(timing=timing), indent=2, sort_keys=True) + "\n"


def write_report(
    report: CostReport,
    output_dir: Path,
    timing: bool = False,
    prefix: str = "",
) -> tuple[Path, Path]:
    """
    Write the JSON and per-step CSV reports of a run.

    Args:
        report: The run's report.
        output_dir: Directory to write into; created if missing.
        timing: Include controller wall-clock data in the JSON.
        prefix: Prefix for the file names, e.g. the controller name.

    Returns:
        Paths of the JSON and CSV files.
    """
    output_dir.mkdir(parents=True, exist_ok=True)
    json_path = output_dir / f"{prefix}{REPORT_JSON_NAME}"
    csv_path = output_dir / f"{prefix}{REPORT_CSV_NAME}"

    with open(json_path, "w", encoding="utf-8") as f:
        f.write(report_json(report, timing))

    with open(csv_path, "w", newline="", encoding="utf-8") as f:
        writer = csv.writer(f)
        writer.writerow(STEP_CSV_HEADER)
        for step in report.steps:
            writer.writerow(step.to_row())

    logger.info(f"Wrote report {json_path} and {csv_path}")
    return json_path, csv_path


def comparison_row(report: CostReport) -> list[Any]:
    """Row matching COMPARISON_CSV_HEADER."""
    return [
        report.controller,
        report.seed,
        repr(report.total_energy_cost_usd),
        report.migration_count,
        repr(report.mean_consolid),
        report.pending_vm_steps,
        repr(report.fitness.total),
    ]


def write_comparison(reports: Sequence[CostReport], path: Path) -> Path:
    """Write one comparison row per controller run."""
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="", encoding="utf-8") as f:
        writer = csv.writer(f)
        writer.writerow(COMPARISON_CSV_HEADER)
        for report in reports:
            writer.writerow(comparison_row(report))
    logger.info(f"Wrote comparison of {len(reports)} controllers to {path}")
    return path


# ----------------------------------------------------------------------------
# Sweeps
# ----------------------------------------------------------------------------

_TOTAL_COLUMNS = [
    "energy_cost_usd",
    "migrations",
    "placements",
    "mean_consolid",
    "pending_vm_steps",
    "saturated_steps",
]
_FITNESS_COLUMNS = [
    "energy_ceiling_usd",
    "consolid",
    "migration_penalty",
    "constraint_penalty",
    "pending_penalty",
    "total",
]


def sweep_header(keys: Sequence[str]) -> list[str]:
    """Swept keys, report totals, fitness components, then the error column."""
    return list(keys) + _TOTAL_COLUMNS + [f"fitness_{c}" for c in _FITNESS_COLUMNS] + ["error"]


def sweep_row(row: SweepRow, keys: Sequence[str]) -> list[Any]:
    values: list[Any] = [row.params[key] for key in keys]
    if row.report is None:
        return values + [""] * (len(_TOTAL_COLUMNS) + len(_FITNESS_COLUMNS)) + [row.error or ""]
    totals = row.report.totals()
    fitness = row.report.fitness.to_dict()
    values += [totals[c] for c in _TOTAL_COLUMNS]
    values += [fitness[c] for c in _FITNESS_COLUMNS]
    return values + [""]


class SweepWriter:
    """
    Writes sweep rows as they arrive.

    Example:
        with SweepWriter(path, ["weights.w_migration"]) as writer:
            sweep(scenario, grid, on_row=writer.write)
    """

    def __init__(self, path: Path, keys: Sequence[str]):
        self.path = path
        self.keys = list(keys)
        self.rows = 0
        self._file: Any = None
        self._writer: Any = None

    def __enter__(self) -> SweepWriter:
        self.path.parent.mkdir(parents=True, exist_ok=True)
        self._file = open(self.path, "w", newline="", encoding="utf-8")
        self._writer = csv.writer(self._file)
        self._writer.writerow(sweep_header(self.keys))
        return self

    def write(self, row: SweepRow) -> None:
        self._writer.writerow(sweep_row(row, self.keys))
        self._file.flush()
        self.rows += 1

    def __exit__(self, *exc: object) -> None:
        self._file.close()
        logger.info(f"Wrote {self.rows} sweep rows to {self.path}")


def write_sweep(rows: Iterable[SweepRow], keys: Sequence[str], path: Path) -> Path:
    """Write all sweep rows at once."""
    with SweepWriter(path, keys) as writer:
        for row in rows:
            writer.write(row)
    return path
