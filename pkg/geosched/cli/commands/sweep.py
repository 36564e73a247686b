"""
CLI command for parameter sweeps.
"""

from __future__ import annotations

import math
from typing import Optional

import click
from rich.table import Table

from geosched.cli.commands.common import (
    console,
    info,
    output_path,
    reporting_errors,
    resolve_scenario,
    scenario_options,
    success,
    warning,
)
from geosched.constants import SWEEP_CSV_NAME
from geosched.core.simulation import SweepWriter, parse_grid, summarize_trend
from geosched.core.simulation import sweep as run_sweep

TREND_METRICS = ["energy_cost_usd", "migrations", "mean_consolid", "fitness_total"]


@click.command("sweep")
@scenario_options
@click.option(
    "--grid", "-g", "grid_specs",
    multiple=True,
    metavar="KEY=V1,V2,...",
    help="Values to sweep for a scenario key (repeatable; keys combine as a grid).",
)
def sweep(
    config_path: str,
    output_dir: Optional[str],
    seed: Optional[int],
    overrides: tuple[str, ...],
    timing: bool,
    grid_specs: tuple[str, ...],
) -> None:
    """Run the scenario once per grid point and write sweep.csv.

    Rows are written as runs finish. A failing run is recorded with its
    error and does not stop the sweep. For each swept key the Spearman
    correlation with the headline metrics is printed.

    Example:
        geosched sweep --grid weights.w_migration=0,0.25,0.5,1
        geosched sweep -g forecast.sigma=0,0.1,0.3 -g seed=1,2,3,4,5
    """
    if not grid_specs:
        raise click.UsageError("sweep needs at least one --grid KEY=V1,V2,...")
    if timing:
        warning("--timing has no effect on sweep.csv")

    path = output_path(output_dir) / SWEEP_CSV_NAME
    with reporting_errors():
        grid = parse_grid(grid_specs)
        scenario = resolve_scenario(config_path, seed, overrides)
        points = math.prod(len(values) for values in grid.values())
        info(f"Sweeping {points} point(s)")
        with SweepWriter(path, list(grid)) as writer:
            rows = run_sweep(scenario, grid, on_row=writer.write)

    failed = [row for row in rows if not row.ok]
    for row in failed:
        warning(f"{row.params}: {row.error}")

    table = Table(title="Trend (Spearman rho)")
    table.add_column("Parameter", style="cyan")
    for metric in TREND_METRICS:
        table.add_column(metric, justify="right")
    for key, values in grid.items():
        if not all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in values):
            continue
        rhos = [summarize_trend(rows, key, metric) for metric in TREND_METRICS]
        table.add_row(key, *("-" if math.isnan(r) else f"{r:+.3f}" for r in rhos))
    console.print(table)
    success(f"Wrote {len(rows)} row(s) to {path} ({len(failed)} failed)")
