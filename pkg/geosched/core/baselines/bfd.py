"""
Best fit decreasing (BFD) placement.

Booted VMs are placed once, at the current step, and never moved again.
VMs are taken in decreasing order of demand; each goes to the PM that
has the least room left after taking it.
"""

from __future__ import annotations

import logging
from typing import Iterable

import numpy as np

from geosched.constants import CAPACITY_EPSILON
from geosched.core.forecasting.models import Forecasts
from geosched.core.model.cloud import Action, CloudState, Inventory
from geosched.core.model.schedule import Schedule

logger = logging.getLogger(__name__)


def decreasing_demand(inventory: Inventory, vms: Iterable[str]) -> list[str]:
    """
    VM ids by decreasing normalized demand, ties by id.

    A VM's normalized demand is its largest demand/capacity ratio against
    the largest PM capacity of each resource.
    """
    vm_ids = list(vms)
    if not vm_ids:
        return []
    reference = (
        np.array([pm.capacity for pm in inventory.pms]).max(axis=0)
        if inventory.pms
        else np.ones(len(inventory.vm(vm_ids[0]).resources))
    )

    def share(vm_id: str) -> float:
        return float((np.array(inventory.vm(vm_id).resources) / reference).max())

    return sorted(vm_ids, key=lambda vm_id: (-share(vm_id), vm_id))


def _current_prices(state: CloudState, forecasts: Forecasts) -> dict[str, float]:
    """Price at the first window step for every location that has one."""
    prices: dict[str, float] = {}
    for location in state.inventory.locations.values():
        trace = forecasts.traces.get(location.price_trace_key)
        if trace is not None and len(trace):
            prices[location.id] = trace.prices[0]
    return prices


def bfd_place(
    state: CloudState,
    pending_vms: Iterable[str],
    forecasts: Forecasts,
) -> Schedule:
    """
    Place pending VMs with best fit decreasing.

    Args:
        state: Current cloud state.
        pending_vms: VMs waiting for a PM.
        forecasts: Forecasts over the window; only the first step's prices
            are used, to break ties.

    Returns:
        A schedule with placement actions at the first window step only.
        VMs that fit on no PM get no action and stay pending.
    """
    inventory = state.inventory
    pms = inventory.pms
    if not pms:
        return Schedule.empty(forecasts.index, forecasts.window.step)
    capacity = np.array([pm.capacity for pm in pms], dtype=float).reshape(len(pms), -1)
    used = np.array([state.load(pm.id) for pm in pms], dtype=float).reshape(capacity.shape)
    prices = _current_prices(state, forecasts)

    entries: list[tuple[int, Action]] = []
    unplaced: list[str] = []
    for vm_id in decreasing_demand(inventory, pending_vms):
        demand = np.array(inventory.vm(vm_id).resources)
        after = used + demand
        fits = np.all(after <= capacity + CAPACITY_EPSILON, axis=1)
        if not fits.any():
            unplaced.append(vm_id)
            continue
        fill = (after / capacity).max(axis=1)
        best = min(
            np.flatnonzero(fits),
            key=lambda p: (-fill[p], prices.get(pms[p].location, 0.0), pms[p].id),
        )
        used[best] += demand
        entries.append((0, Action(vm_id, pms[best].id)))

    if unplaced:
        logger.warning(f"BFD left {len(unplaced)} VM(s) pending: no PM has room")
    return Schedule.from_entries(forecasts.index, entries, forecasts.window.step)
