"""
Helpers shared by the CLI commands: console output, scenario options and
mapping of package errors to exit codes.
"""

from __future__ import annotations

import logging
from contextlib import contextmanager
from pathlib import Path
from typing import Any, Callable, Iterator, Optional, Sequence

import click
from rich.console import Console
from rich.table import Table

from geosched.config import get_config
from geosched.constants import EXIT_FAILURE, EXIT_USAGE
from geosched.core.simulation import CostReport, Scenario, load_scenario
from geosched.exceptions import GeoschedError, ScenarioError

logger = logging.getLogger(__name__)

# Console for output
console = Console()

DEFAULT_SCENARIO = "desk"


def info(message: str) -> None:
    """Print info message."""
    console.print(f"[blue]ℹ[/blue] {message}")


def success(message: str) -> None:
    """Print success message."""
    console.print(f"[green]✓[/green] {message}")


def warning(message: str) -> None:
    """Print warning message."""
    console.print(f"[yellow]⚠[/yellow] {message}")


def error(message: str) -> None:
    """Print error message."""
    console.print(f"[red]✗[/red] {message}")


@contextmanager
def reporting_errors() -> Iterator[None]:
    """
    Turn package errors into exit codes.

    Scenario and config errors exit with 2, other package errors with 1.
    """
    try:
        yield
    except ScenarioError as e:
        error(str(e))
        raise click.exceptions.Exit(EXIT_USAGE) from e
    except GeoschedError as e:
        error(str(e))
        raise click.exceptions.Exit(EXIT_FAILURE) from e


def scenario_options(func: Callable[..., Any]) -> Callable[..., Any]:
    """Options every scenario-driven command takes."""
    options = [
        click.option(
            "--config", "-c", "config_path",
            default=DEFAULT_SCENARIO,
            show_default=True,
            help="Scenario TOML file, or the name of a bundled scenario.",
        ),
        click.option(
            "--out", "-o", "output_dir",
            type=click.Path(file_okay=False),
            help="Report directory (default: GEOSCHED_OUTPUT_DIR or ./reports).",
        ),
        click.option(
            "--seed",
            type=int,
            help="Override the scenario seed.",
        ),
        click.option(
            "--set", "overrides",
            multiple=True,
            metavar="KEY=VALUE",
            help="Override a scenario key, e.g. ga.gen=50 (repeatable).",
        ),
        click.option(
            "--timing",
            is_flag=True,
            help="Include controller wall-clock times in JSON reports.",
        ),
    ]
    for option in reversed(options):
        func = option(func)
    return func


def resolve_scenario(
    config_path: str, seed: Optional[int], overrides: Sequence[str]
) -> Scenario:
    """Load the scenario and apply --set and --seed overrides."""
    scenario = load_scenario(config_path)
    settings = list(overrides)
    if seed is not None:
        settings.append(f"seed={seed}")
    if settings:
        scenario = scenario.with_overrides(settings)
        logger.debug(f"Applied overrides: {', '.join(settings)}")
    return scenario


def output_path(output_dir: Optional[str]) -> Path:
    return Path(output_dir) if output_dir else get_config().output_dir


def report_table(reports: Sequence[CostReport], title: str) -> Table:
    """Aligned table of the headline totals of one or more runs."""
    table = Table(title=title)
    table.add_column("Controller", style="cyan")
    table.add_column("Seed", justify="right")
    table.add_column("Energy (USD)", justify="right")
    table.add_column("Migrations", justify="right")
    table.add_column("Mean consolid", justify="right")
    table.add_column("Pending VM-steps", justify="right")
    table.add_column("Fitness", justify="right")
    for report in reports:
        table.add_row(
            report.controller,
            str(report.seed),
            f"{report.total_energy_cost_usd:.4f}",
            str(report.migration_count),
            f"{report.mean_consolid:.4f}",
            str(report.pending_vm_steps),
            f"{report.fitness.total:.6f}",
        )
    return table
