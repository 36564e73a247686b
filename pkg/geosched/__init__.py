"""
geosched - Geotemporal VM scheduling simulator.

This package simulates a cloud spread over data center locations with
time-varying electricity prices and temperatures, and the controllers
that place and migrate its VMs: a hybrid genetic algorithm over migration
schedules, best fit decreasing, and an exhaustive oracle for tiny cases.
"""

__version__ = "0.1.0"
__author__ = "geosched Contributors"

from geosched.core.simulation import (
    CostReport,
    Scenario,
    load_scenario,
    run_simulation,
)

__all__ = [
    "CostReport",
    "Scenario",
    "load_scenario",
    "run_simulation",
    "__version__",
]
