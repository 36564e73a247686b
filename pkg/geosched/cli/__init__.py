"""
geosched command-line interface.

This package provides the CLI for running simulations, controller
comparisons, weight sweeps and trace generation.
"""

from geosched.cli.main import cli, main

__all__ = ["cli", "main"]
