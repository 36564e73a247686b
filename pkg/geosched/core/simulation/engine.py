"""
Discrete-time simulation engine.

Each step applies the step's delete and boot requests, hands the
controller the forecasts over the window starting at the step, executes
only the first step of the returned schedule, and records what happened.
Realized costs are accounted afterwards against the ground-truth traces,
so forecast errors change decisions but never the accounting.
"""

from __future__ import annotations

import logging
import time
from collections import defaultdict
from dataclasses import dataclass, field, replace
from datetime import datetime
from typing import Any, Optional

import numpy as np

from geosched.core.fitness.components import consolid_from_utilisation, energy_kernel
from geosched.core.fitness.evaluator import UNPLACED, FitnessEvaluator
from geosched.core.fitness.models import FitnessBreakdown
from geosched.core.forecasting.methods import build_forecasts
from geosched.core.forecasting.models import ForecastWindow
from geosched.core.geotraces.io import load_traces
from geosched.core.geotraces.models import GeoTrace, GeoTraces
from geosched.core.geotraces.synthetic import synthesize_traces
from geosched.core.model.cloud import CloudState, RequestKind, VMRequest
from geosched.core.rng import seed_sequence
from geosched.core.simulation.controllers import Controller, make_controller
from geosched.core.simulation.scenario import Scenario
from geosched.core.simulation.workload import Workload, generate_workload
from geosched.exceptions import CapacityError, SimulationError, TraceGapError

logger = logging.getLogger(__name__)

# Stream keys derived from the scenario seed
WORKLOAD_STREAM = 1


@dataclass(frozen=True)
class StepRecord:
    """What happened at one simulation step."""

    step: int
    timestamp: datetime
    energy_cost_usd: float
    migrations: int
    placements: int
    consolid: float
    pending: int
    booted: int
    deleted: int

    def to_row(self) -> list[Any]:
        """Row matching STEP_CSV_HEADER."""
        return [
            self.step,
            self.timestamp.isoformat(),
            repr(self.energy_cost_usd),
            self.migrations,
            repr(self.consolid),
            self.pending,
        ]


@dataclass(frozen=True)
class CostReport:
    """
    Outcome of one simulation run.

    Totals are computed from the per-step records, so they always equal
    the sums of their series. ``fitness`` is the weighted breakdown of the
    executed run over the whole horizon, against ground truth.

    Attributes:
        scenario: Fully resolved scenario.
        seed: Scenario seed.
        controller: Controller name.
        steps: Per-step records.
        fitness: Realized fitness breakdown.
        saturated: True when at some step the VMs' total demand exceeded
            the inventory's total capacity.
        saturated_steps: Number of such steps.
        controller_seconds: Wall-clock time of each controller call.
    """

    scenario: dict[str, Any]
    seed: int
    controller: str
    steps: tuple[StepRecord, ...]
    fitness: FitnessBreakdown
    saturated: bool = False
    saturated_steps: int = 0
    controller_seconds: tuple[float, ...] = field(default=(), compare=False)

    @property
    def total_energy_cost_usd(self) -> float:
        return sum(s.energy_cost_usd for s in self.steps)

    @property
    def migration_count(self) -> int:
        return sum(s.migrations for s in self.steps)

    @property
    def placement_count(self) -> int:
        return sum(s.placements for s in self.steps)

    @property
    def mean_consolid(self) -> float:
        if not self.steps:
            return 0.0
        return sum(s.consolid for s in self.steps) / len(self.steps)

    @property
    def pending_vm_steps(self) -> int:
        return sum(s.pending for s in self.steps)

    @property
    def controller_wall_clock(self) -> float:
        return sum(self.controller_seconds)

    def totals(self) -> dict[str, Any]:
        return {
            "energy_cost_usd": self.total_energy_cost_usd,
            "migrations": self.migration_count,
            "placements": self.placement_count,
            "mean_consolid": self.mean_consolid,
            "pending_vm_steps": self.pending_vm_steps,
            "saturated_steps": self.saturated_steps,
            "steps": len(self.steps),
        }

    def to_dict(self, timing: bool = False) -> dict[str, Any]:
        """
        Convert to dictionary for serialization.

        Args:
            timing: Include wall-clock data; without it the output depends
                only on the scenario and seed.
        """
        data: dict[str, Any] = {
            "scenario": self.scenario,
            "seed": self.seed,
            "controller": self.controller,
            "totals": self.totals(),
            "fitness": self.fitness.to_dict(),
            "saturated": self.saturated,
            "series": {
                "timestamp": [s.timestamp.isoformat() for s in self.steps],
                "energy_cost_usd": [s.energy_cost_usd for s in self.steps],
                "migrations": [s.migrations for s in self.steps],
                "placements": [s.placements for s in self.steps],
                "consolid": [s.consolid for s in self.steps],
                "pending": [s.pending for s in self.steps],
                "booted": [s.booted for s in self.steps],
                "deleted": [s.deleted for s in self.steps],
            },
        }
        if timing:
            data["timing"] = {
                "controller_seconds": list(self.controller_seconds),
                "controller_wall_clock": self.controller_wall_clock,
            }
        return data


def scenario_traces(scenario: Scenario) -> dict[str, GeoTrace]:
    """
    Ground-truth traces of a scenario: loaded from its CSV or synthesized.

    Synthetic traces use ``traces.seed`` when set, the scenario seed
    otherwise, and one trace per trace key of the locations.
    """
    settings = scenario.traces
    if settings.path:
        return load_traces(settings.path)
    keys = scenario.trace_keys
    seed = scenario.seed if settings.seed is None else settings.seed
    params = replace(settings.synthetic, location_names=keys)
    return synthesize_traces(seed, len(keys), scenario.steps, params, scenario.start, scenario.step)


def check_coverage(traces: GeoTraces, scenario: Scenario) -> None:
    """
    Make sure every trace the locations use covers the horizon.

    Raises:
        TraceGapError: If a trace is missing, has another step, or does
            not cover every simulated timestamp.
    """
    for key in scenario.trace_keys:
        trace = traces.get(key)
        if trace is None:
            raise TraceGapError(key, "no trace with this key")
        if len(trace) > 1 and trace.prices.step != scenario.step:
            raise TraceGapError(key, f"trace step {trace.prices.step} != scenario step {scenario.step}")
        trace.window(scenario.start, scenario.steps)


def _total_demand(state: CloudState) -> np.ndarray:
    inventory = state.inventory
    if not state.vm_ids:
        return np.zeros(len(inventory.pms[0].capacity))
    return np.array([inventory.vm(vm).resources for vm in state.vm_ids]).sum(axis=0)


def run_simulation(
    scenario: Scenario,
    traces: Optional[GeoTraces] = None,
    workload: Optional[Workload] = None,
    controller: Optional[Controller] = None,
) -> CostReport:
    """
    Run one scenario from start to end.

    Args:
        scenario: The scenario.
        traces: Ground-truth traces; derived from the scenario when omitted.
        workload: Request stream; generated from the scenario seed when omitted.
        controller: Controller instance; built from ``scenario.controller``
            when omitted.

    Returns:
        The CostReport of the run. Identical inputs give identical reports.

    Raises:
        TraceGapError: If the traces do not cover the horizon.
        SimulationError: If VM conservation is violated.
    """
    traces = traces if traces is not None else scenario_traces(scenario)
    check_coverage(traces, scenario)
    keys = scenario.trace_keys
    last_observed = min(traces[key].index[-1] for key in keys)

    if workload is None:
        workload = generate_workload(
            seed_sequence(scenario.seed, WORKLOAD_STREAM),
            scenario.workload,
            scenario.steps,
            scenario.start,
            scenario.step,
        )
    inventory = scenario.inventory().with_vms(workload.vms)
    if controller is None:
        controller = make_controller(
            scenario.controller,
            scenario.weights,
            scenario.ga_config(),
            scenario.oracle,
            scenario.cooling,
        )
    error = scenario.error_model()
    index = scenario.index

    requests_at: dict[datetime, list[VMRequest]] = defaultdict(list)
    for request in workload:
        requests_at[request.t].append(request)

    truth = build_forecasts(traces, ForecastWindow(scenario.start, scenario.steps, scenario.step), keys=keys)
    realized = FitnessEvaluator(
        CloudState.empty(inventory, scenario.start),
        truth,
        scenario.weights,
        scenario.cooling,
        workload.requests,
    )
    alloc = np.full((scenario.steps, realized.n_vms), UNPLACED, dtype=np.int64)
    capacity = realized.capacity.sum(axis=0)

    logger.info(
        f"Simulating {scenario.steps} steps with {len(inventory.pms)} PMs, "
        f"{len(workload.vms)} VMs, controller {controller.name}"
    )
    state = CloudState.empty(inventory, scenario.start)
    counts: list[tuple[int, int, int, int, int]] = []
    seconds: list[float] = []
    booted_total = deleted_total = 0
    saturated_steps = 0

    for i, timestamp in enumerate(index):
        state = state.with_epoch(timestamp)
        booted = deleted = 0
        for request in requests_at.get(timestamp, ()):
            if request.kind is RequestKind.DELETE:
                state = state.delete(request.vm)
                deleted += 1
            else:
                state = state.boot(request.vm)
                booted += 1

        window = ForecastWindow(timestamp, scenario.forecast.window, scenario.step).clipped(last_observed)
        forecasts = build_forecasts(traces, window, scenario.forecast, error, step_key=i, keys=keys)

        started = time.perf_counter()
        schedule = controller.reevaluate(state, forecasts)
        seconds.append(time.perf_counter() - started)

        migrations = placements = 0
        for action in schedule.actions_at(0):
            if not state.has_vm(action.vm):
                logger.warning(f"Step {i}: dropping action for unknown VM {action.vm}")
                continue
            before = state.host_of(action.vm)
            try:
                state = state.apply(action, enforce_capacity=True)
            except CapacityError as e:
                logger.warning(f"Step {i}: dropping action {action.vm} -> {action.pm}: {e}")
                continue
            if before is None:
                placements += 1
            elif before != action.pm:
                migrations += 1

        booted_total += booted
        deleted_total += deleted
        if booted_total - deleted_total != len(state.placed_vms) + len(state.pending):
            raise SimulationError(
                f"VM conservation violated at step {i}",
                f"booted {booted_total} - deleted {deleted_total} != "
                f"placed {len(state.placed_vms)} + pending {len(state.pending)}",
            )
        if (_total_demand(state) > capacity).any():
            saturated_steps += 1

        for vm in state.placed_vms:
            alloc[i, realized.vm_pos[vm]] = realized.pm_pos[state.host_of(vm)]
        counts.append((migrations, placements, len(state.pending), booted, deleted))
        logger.debug(
            f"Step {i} {timestamp}: +{booted} -{deleted} VMs, {placements} placed, "
            f"{migrations} migrated, {len(state.pending)} pending"
        )

    if saturated_steps:
        logger.warning(
            f"Inventory saturated in {saturated_steps} of {scenario.steps} steps: "
            "VM demand exceeded total capacity"
        )

    util, active, _ = realized.utilisation(alloc[None])
    energy = energy_kernel(
        util[0][:, None, :],
        active[0][:, None, :],
        realized.power_idle,
        realized.power_span,
        realized.factors[:, None, :],
    )
    consolidation = consolid_from_utilisation(util[0][:, None, :], active[0][:, None, :])
    fitness = realized.evaluate_alloc(alloc[None])[0]

    records = tuple(
        StepRecord(
            step=i,
            timestamp=timestamp,
            energy_cost_usd=float(energy[i]),
            migrations=counts[i][0],
            placements=counts[i][1],
            consolid=float(consolidation[i]),
            pending=counts[i][2],
            booted=counts[i][3],
            deleted=counts[i][4],
        )
        for i, timestamp in enumerate(index)
    )
    report = CostReport(
        scenario=scenario.to_dict(),
        seed=scenario.seed,
        controller=controller.name,
        steps=records,
        fitness=fitness,
        saturated=saturated_steps > 0,
        saturated_steps=saturated_steps,
        controller_seconds=tuple(seconds),
    )
    logger.info(
        f"Run finished: {report.total_energy_cost_usd:.4f} USD, "
        f"{report.migration_count} migrations, mean consolid {report.mean_consolid:.4f}"
    )
    return report
