"""
CLI command for single simulation runs.
"""

from __future__ import annotations

from typing import Optional

import click

from geosched.cli.commands.common import (
    console,
    info,
    output_path,
    report_table,
    reporting_errors,
    resolve_scenario,
    scenario_options,
    success,
    warning,
)
from geosched.core.simulation import report_json, run_simulation, write_report


@click.command("simulate")
@scenario_options
@click.option(
    "--json", "as_json",
    is_flag=True,
    help="Print the JSON report to stdout.",
)
def simulate(
    config_path: str,
    output_dir: Optional[str],
    seed: Optional[int],
    overrides: tuple[str, ...],
    timing: bool,
    as_json: bool,
) -> None:
    """Run one scenario and write its reports.

    Writes report.json (totals, fitness breakdown, per-step series and the
    resolved scenario) and steps.csv to the output directory.

    Example:
        geosched simulate
        geosched simulate --config tiny --set controller=bfd
        geosched simulate -c my.toml --seed 7 --out runs/seed7
    """
    with reporting_errors():
        scenario = resolve_scenario(config_path, seed, overrides)
        if not as_json:
            info(
                f"Simulating {scenario.steps} steps with controller "
                f"{scenario.controller} (seed {scenario.seed})"
            )
        report = run_simulation(scenario)
        json_path, csv_path = write_report(report, output_path(output_dir), timing)

    if as_json:
        click.echo(report_json(report, timing), nl=False)
        return

    console.print(report_table([report], "Simulation"))
    if report.saturated:
        warning(f"Inventory saturated in {report.saturated_steps} step(s)")
    success(f"Wrote {json_path} and {csv_path}")
