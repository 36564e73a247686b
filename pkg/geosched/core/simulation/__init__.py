"""Scenarios, workload, the simulation engine, reports and sweeps."""

from geosched.core.simulation.controllers import (
    BFDController,
    BruteForceController,
    Controller,
    GAController,
    make_controller,
)
from geosched.core.simulation.engine import (
    CostReport,
    StepRecord,
    check_coverage,
    run_simulation,
    scenario_traces,
)
from geosched.core.simulation.report import (
    SweepWriter,
    report_json,
    write_comparison,
    write_report,
    write_sweep,
)
from geosched.core.simulation.scenario import (
    LocationSpec,
    Scenario,
    TraceSettings,
    bundled_scenarios,
    load_scenario,
)
from geosched.core.simulation.sweep import (
    SweepRow,
    grid_points,
    parse_grid,
    summarize_trend,
    sweep,
)
from geosched.core.simulation.workload import Workload, WorkloadParams, generate_workload

__all__ = [
    "BFDController",
    "BruteForceController",
    "Controller",
    "CostReport",
    "GAController",
    "LocationSpec",
    "Scenario",
    "StepRecord",
    "SweepRow",
    "SweepWriter",
    "TraceSettings",
    "Workload",
    "WorkloadParams",
    "bundled_scenarios",
    "check_coverage",
    "generate_workload",
    "grid_points",
    "load_scenario",
    "make_controller",
    "parse_grid",
    "report_json",
    "run_simulation",
    "scenario_traces",
    "summarize_trend",
    "sweep",
    "write_comparison",
    "write_report",
    "write_sweep",
]
