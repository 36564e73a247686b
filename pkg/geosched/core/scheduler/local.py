"""
Greedy best-cost-fit (BCF) improvement.

For each VM in decreasing demand order, try moving it at the first window
step onto every PM that can hold it; adopt the best move when it strictly
lowers the total fitness. The same pass places pending VMs at boot.
"""

from __future__ import annotations

import logging
from typing import Iterable, Optional

import numpy as np

from geosched.constants import CAPACITY_EPSILON
from geosched.core.fitness.evaluator import FitnessEvaluator
from geosched.core.fitness.models import FitnessWeights
from geosched.core.forecasting.models import Forecasts
from geosched.core.geotraces.cooling import PPueModel
from geosched.core.model.cloud import Action, CloudState, VMRequest
from geosched.core.model.schedule import Schedule

logger = logging.getLogger(__name__)


def _demand_order(evaluator: FitnessEvaluator, candidates: Iterable[int]) -> list[int]:
    """VM positions by decreasing normalized demand, then id."""
    reference = evaluator.capacity.max(axis=0) if evaluator.n_pms else np.ones(1)
    share = (evaluator.demand / reference).max(axis=1) if evaluator.n_vms else np.zeros(0)
    return sorted(candidates, key=lambda v: (-share[v], evaluator.vm_ids[v]))


def _held_until(evaluator: FitnessEvaluator, schedule: Schedule, v: int) -> int:
    """First step after 0 at which the VM acts again or disappears."""
    vm = evaluator.vm_ids[v]
    for t in range(1, evaluator.n_steps):
        if not evaluator.alive[t, v]:
            return t
        if any(a.vm == vm for a in schedule.actions_at(t)):
            return t
    return evaluator.n_steps


def best_cost_fit(
    schedule: Schedule,
    evaluator: FitnessEvaluator,
    vms: Optional[Iterable[str]] = None,
    force: bool = False,
) -> Schedule:
    """
    One best-cost-fit pass over ``schedule``.

    Args:
        schedule: Schedule to improve.
        evaluator: Evaluator of the current state and forecasts.
        vms: VMs to consider; defaults to every VM present at the first step.
        force: Adopt the best feasible move even when it does not improve
            the fitness (used to place booted VMs).

    Returns:
        A schedule whose fitness is no worse than the input's, unless
        ``force`` is set.
    """
    if evaluator.n_steps == 0 or evaluator.n_pms == 0:
        return schedule

    alloc = evaluator.alloc_matrix(schedule)
    current = evaluator.evaluate_alloc(alloc[None])[0].total
    if vms is None:
        considered = [v for v in range(evaluator.n_vms) if evaluator.alive[0, v]]
    else:
        considered = [
            evaluator.vm_pos[vm]
            for vm in vms
            if vm in evaluator.vm_pos and evaluator.alive[0, evaluator.vm_pos[vm]]
        ]

    moved: dict[int, int] = {}
    for v in _demand_order(evaluator, considered):
        until = _held_until(evaluator, schedule, v)
        host = int(alloc[0, v])
        loads, counts = evaluator.loads(alloc[None, :until])
        loads, counts = loads[0], counts[0]
        if host >= 0:
            loads[:, host] -= evaluator.demand[v]
            counts[:, host] -= 1

        fits = np.all(
            loads + evaluator.demand[v] <= evaluator.capacity + CAPACITY_EPSILON,
            axis=(0, 2),
        )
        if host >= 0:
            fits[host] = False
        empty = ~(counts > 0).any(axis=0)

        candidates: list[int] = []
        seen_kinds: set = set()
        for p in np.flatnonzero(fits):
            if empty[p]:
                kind = evaluator.pm_kinds[p]
                if kind in seen_kinds:
                    continue
                seen_kinds.add(kind)
            candidates.append(int(p))
        if not candidates:
            if host < 0:
                logger.debug(f"No PM can hold {evaluator.vm_ids[v]}")
            continue

        batch = np.repeat(alloc[None], len(candidates), axis=0)
        batch[:, :until, v] = np.array(candidates)[:, None]
        totals = [b.total for b in evaluator.evaluate_alloc(batch)]
        best = int(np.argmin(totals))
        if force or totals[best] < current:
            alloc = batch[best]
            current = totals[best]
            moved[v] = candidates[best]

    if not moved:
        return schedule
    changed = {evaluator.vm_ids[v] for v in moved}
    entries = [
        (p, a) for p, a in schedule.entries() if not (p == 0 and a.vm in changed)
    ]
    for v, p in moved.items():
        if p != evaluator.initial_hosts[v]:
            entries.append((0, Action(evaluator.vm_ids[v], evaluator.pm_ids[p])))
    logger.debug(f"Best-cost-fit moved {len(moved)} VM(s)")
    return schedule.with_entries(entries)


def local_improvement(
    best: Schedule,
    state: CloudState,
    forecasts: Forecasts,
    weights: Optional[FitnessWeights] = None,
    ppue_model: Optional[PPueModel] = None,
    requests: Iterable[VMRequest] = (),
    evaluator: Optional[FitnessEvaluator] = None,
) -> Schedule:
    """
    Greedy local improvement of the GA's best schedule.

    Returns a schedule with total fitness lower than or equal to ``best``'s.
    Moves onto PMs without room for the VM are never adopted.
    """
    evaluator = evaluator or FitnessEvaluator(state, forecasts, weights, ppue_model, requests)
    return best_cost_fit(best, evaluator)


def bcf_place(
    state: CloudState,
    pending: Iterable[str],
    forecasts: Forecasts,
    weights: Optional[FitnessWeights] = None,
    ppue_model: Optional[PPueModel] = None,
    evaluator: Optional[FitnessEvaluator] = None,
) -> Schedule:
    """
    Place pending VMs at the first window step on their best-cost PMs.

    VMs that fit nowhere stay pending.
    """
    evaluator = evaluator or FitnessEvaluator(state, forecasts, weights, ppue_model)
    empty = Schedule.empty(forecasts.index, forecasts.window.step)
    return best_cost_fit(empty, evaluator, vms=pending, force=True)
