"""CLI command modules."""

from geosched.cli.commands import compare, simulate, sweep, traces

__all__ = ["compare", "simulate", "sweep", "traces"]
