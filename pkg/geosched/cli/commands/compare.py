"""
CLI command comparing controllers on one scenario.
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
)
from geosched.constants import COMPARISON_CSV_NAME, SUPPORTED_CONTROLLERS
from geosched.core.simulation import CostReport, run_simulation, write_comparison, write_report


def _parse_controllers(value: str) -> list[str]:
    names = [name.strip() for name in value.split(",") if name.strip()]
    unknown = [name for name in names if name not in SUPPORTED_CONTROLLERS]
    if unknown:
        raise click.BadParameter(
            f"unknown controller(s) {', '.join(unknown)}; "
            f"choose from {', '.join(SUPPORTED_CONTROLLERS)}",
            param_hint="--controllers",
        )
    if len(set(names)) < 2:
        raise click.UsageError("compare needs at least two different controllers")
    return list(dict.fromkeys(names))


@click.command("compare")
@scenario_options
@click.option(
    "--controllers",
    default="ga,bfd",
    show_default=True,
    help="Comma-separated controllers to compare (ga, bfd, brute).",
)
def compare(
    config_path: str,
    output_dir: Optional[str],
    seed: Optional[int],
    overrides: tuple[str, ...],
    timing: bool,
    controllers: str,
) -> None:
    """Run the same scenario and seed under several controllers.

    Writes one report pair per controller (prefixed with its name) and a
    comparison.csv with one row per controller.

    Example:
        geosched compare
        geosched compare --config tiny --controllers ga,bfd,brute
    """
    names = _parse_controllers(controllers)
    out = output_path(output_dir)
    reports: list[CostReport] = []

    with reporting_errors():
        scenario = resolve_scenario(config_path, seed, overrides)
        for name in names:
            info(f"Running controller {name} (seed {scenario.seed})")
            report = run_simulation(scenario.with_overrides([f"controller={name}"]))
            write_report(report, out, timing, prefix=f"{name}-")
            reports.append(report)
        csv_path = write_comparison(reports, out / COMPARISON_CSV_NAME)

    console.print(report_table(reports, "Controller comparison"))
    success(f"Wrote {csv_path}")
