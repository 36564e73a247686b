"""
Fitness components.

The kernels work on utilisation matrices shaped ``[..., T, P]`` (time by
PM, with optional leading batch axes) so that the same arithmetic serves
single trajectories, whole GA populations and exhaustive search.
"""

from __future__ import annotations

import logging
from collections import defaultdict
from datetime import timedelta
from typing import Iterable, Optional, Sequence

import numpy as np

from geosched.constants import WATTS_PER_KILOWATT
from geosched.core.geotraces.cooling import PPueModel
from geosched.core.geotraces.models import GeoTraces, location_inputs
from geosched.core.model.cloud import (
    CloudState,
    Location,
    RequestKind,
    VMRequest,
    apply_action,
    capacity_ok,
    utilisation,
)
from geosched.core.model.schedule import Schedule
from geosched.core.model.timeseries import TimeSeries

logger = logging.getLogger(__name__)

_DEFAULT_PPUE = PPueModel()


# ----------------------------------------------------------------------------
# Kernels
# ----------------------------------------------------------------------------


def cost_factors(
    ppue_model: PPueModel,
    prices: np.ndarray,
    temperatures: np.ndarray,
    pm_locations: Sequence[int],
    step: timedelta,
) -> np.ndarray:
    """
    USD per watt drawn for one step, shaped [T, P].

    Args:
        ppue_model: Cooling overhead model.
        prices: USD/kWh per location, shaped [L, T].
        temperatures: °C per location, shaped [L, T].
        pm_locations: Row of ``prices`` for every PM.
        step: Duration of one step.
    """
    hours = step / timedelta(hours=1)
    per_location = ppue_model.ppue(temperatures) * prices * hours / WATTS_PER_KILOWATT
    rows = np.asarray(list(pm_locations), dtype=int)
    return np.asarray(per_location)[rows].T


def energy_kernel(
    util: np.ndarray,
    active: np.ndarray,
    power_idle: np.ndarray,
    power_span: np.ndarray,
    factors: np.ndarray,
) -> np.ndarray:
    """
    Energy cost of utilisation matrices.

    Active PMs draw ``idle + span * util`` watts; suspended PMs draw nothing.
    Utilisation above 1 is billed as 1.
    """
    power = np.where(active, power_idle + power_span * np.clip(util, 0.0, 1.0), 0.0)
    return (power * factors).sum(axis=(-2, -1))


def consolid_from_utilisation(
    util: np.ndarray, active: Optional[np.ndarray] = None
) -> np.ndarray:
    """
    Consolidation badness: 1 - mean over PMs of the mean positive utilisation.

    Zero-utilisation steps are excluded from a PM's mean; a PM that is never
    used counts as perfectly consolidated (mean 1).

    Example:
        consolid_from_utilisation(np.array([[0], [0.6], [0.8], [0], [0]]))  # 0.3
    """
    util = np.clip(np.asarray(util, dtype=float), 0.0, 1.0)
    if active is None:
        active = util > 0
    if util.shape[-1] == 0:
        return np.zeros(util.shape[:-2])
    count = active.sum(axis=-2)
    total = np.where(active, util, 0.0).sum(axis=-2)
    means = np.where(count > 0, total / np.maximum(count, 1), 1.0)
    return 1.0 - means.mean(axis=-1)


def overload_fraction(overloaded: np.ndarray) -> np.ndarray:
    """Fraction of (t, pm) cells over capacity."""
    cells = overloaded.shape[-2] * overloaded.shape[-1]
    if cells == 0:
        return np.zeros(overloaded.shape[:-2])
    return overloaded.sum(axis=(-2, -1)) / cells


# ----------------------------------------------------------------------------
# Trajectories
# ----------------------------------------------------------------------------


def trajectory(
    state: CloudState,
    schedule: Schedule,
    requests: Iterable[VMRequest] = (),
) -> TimeSeries[CloudState]:
    """
    Replay ``schedule`` from ``state``.

    At every window step the requests for that timestamp apply first, then
    the step's actions. A delete cancels the remaining actions of its VM.

    Returns:
        The cloud state after each window step.

    Raises:
        UnknownIdentifierError: If an action or request names an unknown id.
    """
    by_time: dict = defaultdict(list)
    for request in requests:
        by_time[request.t].append(request)

    deleted: set[str] = set()
    current = state
    states = []
    for position, timestamp in enumerate(schedule.index):
        for request in by_time.get(timestamp, ()):
            if request.kind is RequestKind.BOOT:
                current = current.boot(request.vm)
            else:
                current = current.delete(request.vm)
                deleted.add(request.vm)
        for action in schedule.actions_at(position):
            if action.vm in deleted:
                continue
            current = apply_action(current, action)
        current = current.with_epoch(timestamp)
        states.append(current)
    return TimeSeries(schedule.index, tuple(states), schedule.step)


def _state_matrices(
    states: TimeSeries[CloudState],
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Utilisation, activity and overload matrices shaped [T, P]."""
    if len(states) == 0:
        empty = np.zeros((0, 0))
        return empty, empty.astype(bool), empty.astype(bool)
    pm_ids = states[0].inventory.pm_ids
    util = np.array([[utilisation(s, pm) for pm in pm_ids] for s in states])
    active = np.array([[bool(s.alloc[pm]) for pm in pm_ids] for s in states])
    overloaded = np.array([[not capacity_ok(s, pm) for pm in pm_ids] for s in states])
    shape = (len(states), len(pm_ids))
    return util.reshape(shape), active.reshape(shape), overloaded.reshape(shape)


def energy_cost(
    states: TimeSeries[CloudState],
    traces: GeoTraces,
    ppue_model: Optional[PPueModel] = None,
) -> float:
    """
    Energy cost of a trajectory in USD.

    Sum over steps and active PMs of power x pPUE(temperature) x price x step.

    Raises:
        TraceGapError: If the traces do not cover the trajectory's index.
    """
    if len(states) == 0:
        return 0.0
    inventory = states[0].inventory
    location_ids = list(dict.fromkeys(pm.location for pm in inventory.pms))
    locations: list[Location] = [inventory.locations[loc] for loc in location_ids]
    prices, temperatures = location_inputs(traces, locations, states.index)
    rows = {loc: i for i, loc in enumerate(location_ids)}
    factors = cost_factors(
        ppue_model or _DEFAULT_PPUE,
        prices,
        temperatures,
        [rows[pm.location] for pm in inventory.pms],
        states.step,  # type: ignore[arg-type]
    )
    util, active, _ = _state_matrices(states)
    idle = np.array([pm.power_idle for pm in inventory.pms])
    span = np.array([pm.power_span for pm in inventory.pms])
    return float(energy_kernel(util, active, idle, span, factors))


def consolid(states: TimeSeries[CloudState]) -> float:
    """Consolidation badness of a trajectory, in [0, 1]."""
    util, active, _ = _state_matrices(states)
    if util.size == 0:
        return 0.0
    return float(consolid_from_utilisation(util, active))


def constraint_penalty(states: TimeSeries[CloudState]) -> float:
    """Fraction of (pm, t) pairs that violate capacity."""
    _, _, overloaded = _state_matrices(states)
    return float(overload_fraction(overloaded))


def pending_penalty(states: TimeSeries[CloudState]) -> float:
    """Fraction of existing (vm, t) pairs where the VM is not placed."""
    present = sum(len(s.vm_ids) for s in states)
    if present == 0:
        return 0.0
    return sum(len(s.pending) for s in states) / present


def migration_penalty(
    schedule: Schedule,
    state: CloudState,
    requests: Iterable[VMRequest] = (),
) -> float:
    """
    Real migrations per (VM, window step), in [0, 1].

    Only actions that move a placed VM to another PM count; placing a
    pending VM and no-op actions do not.
    """
    states = trajectory(state, schedule, requests)
    vms = set(state.vm_ids)
    moves = 0
    previous = state
    for current in states:
        vms.update(current.vm_ids)
        for vm in current.placed_vms:
            before = previous.host_of(vm)
            if before is not None and before != current.host_of(vm):
                moves += 1
        previous = current
    if not vms or len(states) == 0:
        return 0.0
    return moves / (len(vms) * len(states))
