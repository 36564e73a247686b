"""
Genetic operators over schedules.

Each operator respects the shape of a schedule: actions stay inside the
window, name only existing VMs and PMs, and a VM never gets two actions
at one timestamp.
"""

from __future__ import annotations

import logging
import math
from typing import Iterable, Optional

import numpy as np

from geosched.constants import GA_ACTION_PROBABILITY
from geosched.core.forecasting.models import ForecastWindow
from geosched.core.model.cloud import Action, CloudState
from geosched.core.model.schedule import Schedule
from geosched.core.rng import Seed, make_rng
from geosched.core.scheduler.models import GAConfig, Member, Population, ranked
from geosched.exceptions import WindowMismatchError

logger = logging.getLogger(__name__)

_RETARGET, _DELETE, _INSERT = 0, 1, 2


def random_schedule(
    state: CloudState,
    window: ForecastWindow,
    seed: Seed,
    p_action: float = GA_ACTION_PROBABILITY,
) -> Schedule:
    """
    A schedule where each (vm, t) slot holds an action with probability
    ``p_action``, targeting a uniformly drawn PM.

    Example:
        random_schedule(state, window, seed=1, p_action=0.0)  # empty
    """
    rng = make_rng(seed)
    vms = state.vm_ids
    pms = state.inventory.pm_ids
    if not vms or not pms or p_action <= 0:
        return Schedule.empty(window.index, window.step)
    chosen = rng.random((window.length, len(vms))) < p_action
    steps, vm_positions = np.nonzero(chosen)
    targets = rng.integers(0, len(pms), size=len(steps))
    entries = [
        (int(t), Action(vms[v], pms[p]))
        for t, v, p in zip(steps, vm_positions, targets)
    ]
    return Schedule.from_entries(window.index, entries, window.step)


def crossover(
    a: Schedule,
    b: Schedule,
    seed: Seed,
    cut: Optional[int] = None,
) -> Schedule:
    """
    One-point crossover in time.

    The child behaves like ``a`` before the cut position and like ``b``
    from the cut on. The cut is drawn uniformly from 0..len(window), where
    0 reproduces ``b`` and len(window) reproduces ``a``.

    Raises:
        WindowMismatchError: If the parents are not over the same window.
    """
    if not a.same_window(b):
        raise WindowMismatchError("crossover parents are indexed over different windows")
    if cut is None:
        cut = int(make_rng(seed).integers(0, a.window_length + 1))
    entries = [(p, action) for p, action in a.entries() if p < cut]
    entries += [(p, action) for p, action in b.entries() if p >= cut]
    return a.with_entries(entries)


def mutate(schedule: Schedule, state: CloudState, seed: Seed) -> Schedule:
    """
    Change exactly one action.

    One of three edits is drawn: retarget an existing action to another PM,
    delete an action, or insert a random action into a free (vm, t) slot.
    An empty schedule always gets an insertion. Every other action is left
    as it was.
    """
    rng = make_rng(seed)
    entries = schedule.entries()
    vms = state.vm_ids
    pms = state.inventory.pm_ids
    known = set(vms)
    free_slots = schedule.window_length * len(vms) - sum(1 for _, a in entries if a.vm in known)

    if not entries:
        operation = _INSERT
    else:
        operation = int(rng.integers(0, 3))
    if operation == _INSERT and (free_slots <= 0 or not pms):
        if not entries:
            return schedule
        operation = _RETARGET

    if operation == _RETARGET:
        i = int(rng.integers(0, len(entries)))
        position, action = entries[i]
        others = [pm for pm in pms if pm != action.pm]
        if not others:
            return schedule.with_entries(entries[:i] + entries[i + 1:])
        target = others[int(rng.integers(0, len(others)))]
        entries[i] = (position, Action(action.vm, target))
        return schedule.with_entries(entries)

    if operation == _DELETE:
        i = int(rng.integers(0, len(entries)))
        return schedule.with_entries(entries[:i] + entries[i + 1:])

    vm_position = {vm: v for v, vm in enumerate(vms)}
    occupied = np.zeros((schedule.window_length, len(vms)), dtype=bool)
    for position, action in entries:
        if action.vm in vm_position:
            occupied[position, vm_position[action.vm]] = True
    free = np.flatnonzero(~occupied)
    slot = int(free[int(rng.integers(0, len(free)))])
    position, v = divmod(slot, len(vms))
    target = pms[int(rng.integers(0, len(pms)))]
    return schedule.with_entries(entries + [(position, Action(vms[v], target))])


def propagate(
    population: Population,
    new_window: ForecastWindow,
    deleted_vms: Iterable[str],
    state: CloudState,
    config: GAConfig,
    seed: Seed,
) -> Population:
    """
    Carry part of a population to a later forecast window.

    The best ceil(propagate_fraction x population_size) members are kept.
    Their actions before the new window or on deleted VMs are removed and
    they are reindexed over the new window. The rest of the population is
    refilled with random schedules. Fitness is cleared since the forecasts
    changed.

    Raises:
        WindowMismatchError: If ``new_window`` does not start later.
    """
    if new_window.start <= population.window.start:
        raise WindowMismatchError(
            f"new window starting {new_window.start} is not later than "
            f"{population.window.start}"
        )
    rng = make_rng(seed)
    deleted = set(deleted_vms)
    keep = min(
        len(population),
        math.ceil(config.propagate_fraction * config.population_size),
    )
    kept = [
        Member(member.schedule.without_vms(deleted).reindex(new_window.index))
        for member in ranked(population.members)[:keep]
    ]
    fresh = [
        Member(random_schedule(state, new_window, rng, config.action_probability))
        for _ in range(config.population_size - len(kept))
    ]
    logger.debug(
        f"Propagated {len(kept)} member(s) to window {new_window.start}, "
        f"{len(fresh)} fresh"
    )
    return Population(tuple(kept + fresh), new_window)
