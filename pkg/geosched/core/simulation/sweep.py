"""
Parameter sweeps.

A grid maps dotted scenario keys to candidate values; every combination
is one independent run. Runs execute on the worker pool and rows come
back in grid order as soon as they are ready. A failing run becomes a row
with an error message instead of stopping the sweep.
"""

from __future__ import annotations

import itertools
import logging
import math
from dataclasses import dataclass
from typing import Any, Callable, Iterable, Mapping, Optional, Sequence

from scipy import stats

from geosched.config import parse_scalar
from geosched.core.parallel import iter_parallel
from geosched.core.simulation.engine import CostReport, run_simulation
from geosched.core.simulation.scenario import Scenario
from geosched.exceptions import ConfigError, GeoschedError

logger = logging.getLogger(__name__)

Grid = Mapping[str, Sequence[Any]]


@dataclass(frozen=True)
class SweepRow:
    """One grid point and its outcome."""

    params: dict[str, Any]
    report: Optional[CostReport] = None
    error: Optional[str] = None

    @property
    def ok(self) -> bool:
        return self.report is not None

    def metric(self, name: str) -> Optional[float]:
        """A report total, or a fitness component prefixed ``fitness_``."""
        if self.report is None:
            return None
        if name.startswith("fitness_"):
            return float(self.report.fitness.to_dict()[name[len("fitness_"):]])
        return float(self.report.totals()[name])


def parse_grid(specs: Iterable[str]) -> dict[str, list[Any]]:
    """
    Parse ``key=v1,v2,...`` specs into a grid.

    Example:
        parse_grid(["weights.w_migration=0,0.5,1", "seed=1,2"])

    Raises:
        ConfigError: On a malformed spec or a key given twice.
    """
    grid: dict[str, list[Any]] = {}
    for spec in specs:
        key, sep, raw = spec.partition("=")
        key = key.strip()
        values = [v.strip() for v in raw.split(",") if v.strip()]
        if not sep or not key or not values:
            raise ConfigError(spec, "expected KEY=V1,V2,...")
        if key in grid:
            raise ConfigError(key, "swept twice")
        grid[key] = [parse_scalar(v) for v in values]
    return grid


def grid_points(grid: Grid) -> list[dict[str, Any]]:
    """Every combination of the grid's values, first key varying slowest."""
    keys = list(grid)
    return [dict(zip(keys, combo)) for combo in itertools.product(*(grid[k] for k in keys))]


def _format(value: Any) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    return str(value)


def run_point(scenario: Scenario, params: Mapping[str, Any]) -> SweepRow:
    """Run one grid point; errors are recorded on the row."""
    try:
        point = scenario.with_overrides(f"{k}={_format(v)}" for k, v in params.items())
        return SweepRow(dict(params), run_simulation(point))
    except GeoschedError as e:
        logger.warning(f"Sweep point {dict(params)} failed: {e}")
        return SweepRow(dict(params), error=str(e))


def sweep(
    scenario: Scenario,
    grid: Grid,
    on_row: Optional[Callable[[SweepRow], None]] = None,
    threads: Optional[int] = None,
) -> list[SweepRow]:
    """
    Run the scenario once per grid point.

    Args:
        scenario: Base scenario.
        grid: Dotted key -> values.
        on_row: Called with every row, in grid order, as soon as it is ready.
        threads: Worker cap; GEOSCHED_THREADS still applies.

    Returns:
        One row per grid point, in grid order.

    Raises:
        ConfigError: If the grid is empty or a key has no values.
    """
    if not grid:
        raise ConfigError("grid", "at least one KEY=V1,V2,... is required")
    for key, values in grid.items():
        if not values:
            raise ConfigError(key, "no values to sweep")
    points = grid_points(grid)
    logger.info(f"Sweeping {len(points)} point(s) over {', '.join(grid)}")

    rows: list[SweepRow] = []
    for row in iter_parallel(lambda params: run_point(scenario, params), points, threads):
        rows.append(row)
        if on_row is not None:
            on_row(row)
    failed = sum(not row.ok for row in rows)
    if failed:
        logger.warning(f"{failed} of {len(rows)} sweep point(s) failed")
    return rows


def summarize_trend(rows: Sequence[SweepRow], parameter: str, metric: str) -> float:
    """
    Spearman rank correlation between a swept parameter and a metric.

    Failed rows are ignored. Returns NaN when fewer than two rows succeed
    or either side is constant.

    Example:
        rho = summarize_trend(rows, "weights.w_migration", "migrations")
    """
    pairs = [
        (float(row.params[parameter]), row.metric(metric))
        for row in rows
        if row.ok and parameter in row.params
    ]
    if len(pairs) < 2:
        return math.nan
    xs, ys = zip(*pairs)
    if len(set(xs)) < 2 or len(set(ys)) < 2:
        return math.nan
    rho, _ = stats.spearmanr(xs, ys)
    return float(rho)
