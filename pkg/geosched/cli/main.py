"""
Main CLI entry point for geosched.

This module defines the root CLI group and initializes the application.

Usage:
    geosched --help
    geosched simulate --config desk
    geosched compare --controllers ga,bfd
"""

from __future__ import annotations

import logging
import sys
from pathlib import Path
from typing import Optional

import click
from rich.logging import RichHandler

from geosched import __version__
from geosched.cli.commands import compare, simulate, sweep, traces
from geosched.cli.commands.common import console
from geosched.config import get_config, reload_config


def setup_logging(verbose: bool, debug: bool, default_level: str = "WARNING") -> None:
    """Configure logging based on verbosity flags."""
    if debug:
        level = logging.DEBUG
    elif verbose:
        level = logging.INFO
    else:
        level = logging.getLevelName(default_level)
        if not isinstance(level, int):
            level = logging.WARNING

    logging.basicConfig(
        level=level,
        format="%(message)s",
        datefmt="[%X]",
        handlers=[RichHandler(console=console, rich_tracebacks=True)],
    )


@click.group()
@click.version_option(version=__version__, prog_name="geosched")
@click.option(
    "-v", "--verbose",
    is_flag=True,
    help="Enable verbose output.",
)
@click.option(
    "--debug",
    is_flag=True,
    help="Enable debug output (more verbose than -v).",
)
@click.option(
    "--settings",
    type=click.Path(exists=False, dir_okay=False),
    help="Path to a JSON settings file (threads, output_dir, log_level).",
)
@click.pass_context
def cli(
    ctx: click.Context,
    verbose: bool,
    debug: bool,
    settings: Optional[str],
) -> None:
    """
    geosched - Geotemporal VM scheduling simulator.

    Simulates a cloud spread over several data center locations whose
    electricity prices and temperatures change hour by hour, and compares
    controllers that place and migrate VMs to cut energy cost.

    Examples:

        Run the bundled desk-scale scenario:
        $ geosched simulate

        Compare the GA controller against best fit decreasing:
        $ geosched compare --controllers ga,bfd

        Sweep the migration weight:
        $ geosched sweep --grid weights.w_migration=0,0.5,1
    """
    config = reload_config(Path(settings)) if settings else get_config()
    setup_logging(verbose, debug, config.log_level)

    ctx.ensure_object(dict)
    ctx.obj["verbose"] = verbose
    ctx.obj["debug"] = debug
    ctx.obj["console"] = console
    ctx.obj["config"] = config


# Register commands
cli.add_command(simulate.simulate)
cli.add_command(compare.compare)
cli.add_command(sweep.sweep)
cli.add_command(traces.gen_traces)


def main() -> None:
    """Main entry point."""
    try:
        cli()
    except KeyboardInterrupt:
        console.print("\n[yellow]Interrupted by user[/yellow]")
        sys.exit(130)
    except Exception as e:
        console.print(f"[red]Error:[/red] {e}")
        if "--debug" in sys.argv:
            raise
        sys.exit(1)


__all__ = ["cli", "main", "setup_logging"]


if __name__ == "__main__":
    main()
