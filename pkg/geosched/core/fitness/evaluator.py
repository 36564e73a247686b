"""
Vectorised schedule evaluation.

A FitnessEvaluator is built once per reevaluation (one state, one set of
forecasts) and then scores any number of schedules over that window. A
schedule is first replayed into an allocation matrix ``A[t, v]`` (PM
position, or -1 when the VM is unplaced or absent); matrices are scored in
batches with numpy.
"""

from __future__ import annotations

import logging
from typing import Iterable, Optional, Sequence

import numpy as np

from geosched.constants import CAPACITY_EPSILON, RESOURCE_TYPES
from geosched.core.fitness.components import (
    consolid_from_utilisation,
    cost_factors,
    energy_kernel,
    overload_fraction,
)
from geosched.core.fitness.models import FitnessBreakdown, FitnessWeights
from geosched.core.forecasting.models import Forecasts
from geosched.core.geotraces.cooling import PPueModel
from geosched.core.geotraces.models import location_inputs
from geosched.core.model.cloud import CloudState, RequestKind, VMRequest
from geosched.core.model.schedule import Schedule
from geosched.exceptions import UnknownIdentifierError, WindowMismatchError

logger = logging.getLogger(__name__)

UNPLACED = -1


class FitnessEvaluator:
    """
    Scores schedules for one state and one forecast window.

    Evaluation is pure: the same schedule always yields a bit-identical
    breakdown, whatever else is evaluated in the same batch.

    Example:
        evaluator = FitnessEvaluator(state, forecasts, FitnessWeights())
        breakdown = evaluator.evaluate(schedule)
    """

    def __init__(
        self,
        state: CloudState,
        forecasts: Forecasts,
        weights: Optional[FitnessWeights] = None,
        ppue_model: Optional[PPueModel] = None,
        requests: Iterable[VMRequest] = (),
    ):
        self.state = state
        self.forecasts = forecasts
        self.weights = weights or FitnessWeights()
        self.ppue_model = ppue_model or PPueModel()
        self.index = forecasts.index
        self.step = forecasts.window.step

        inventory = state.inventory
        positions = {ts: i for i, ts in enumerate(self.index)}
        window_requests = [r for r in requests if r.t in positions]
        booted = {r.vm for r in window_requests if r.kind is RequestKind.BOOT}

        self.pm_ids: tuple[str, ...] = inventory.pm_ids
        self.pm_pos = {pm_id: i for i, pm_id in enumerate(self.pm_ids)}
        self.vm_ids: tuple[str, ...] = tuple(sorted(set(state.vm_ids) | booted))
        self.vm_pos = {vm_id: i for i, vm_id in enumerate(self.vm_ids)}

        n_resources = len(RESOURCE_TYPES)
        self.demand = np.array(
            [inventory.vm(vm).resources for vm in self.vm_ids], dtype=float
        ).reshape(len(self.vm_ids), n_resources)
        self.capacity = np.array(
            [pm.capacity for pm in inventory.pms], dtype=float
        ).reshape(len(self.pm_ids), n_resources)
        self.power_idle = np.array([pm.power_idle for pm in inventory.pms], dtype=float)
        self.power_span = np.array([pm.power_span for pm in inventory.pms], dtype=float)
        # PMs of one kind are interchangeable while empty
        self.pm_kinds = [
            (pm.location, pm.capacity, pm.power_idle, pm.power_peak) for pm in inventory.pms
        ]

        location_ids = list(dict.fromkeys(pm.location for pm in inventory.pms))
        rows = {loc: i for i, loc in enumerate(location_ids)}
        prices, temperatures = location_inputs(
            forecasts.traces,
            [inventory.locations[loc] for loc in location_ids],
            self.index,
        )
        self.factors = cost_factors(
            self.ppue_model,
            prices,
            temperatures,
            [rows[pm.location] for pm in inventory.pms],
            self.step,
        )
        self.ceiling = float(((self.power_idle + self.power_span) * self.factors).sum())

        self.initial_hosts = np.full(len(self.vm_ids), UNPLACED, dtype=np.int64)
        for vm_id, v in self.vm_pos.items():
            host = state.host_of(vm_id)
            if host is not None:
                self.initial_hosts[v] = self.pm_pos[host]

        self.events: list[list[tuple[RequestKind, int]]] = [[] for _ in self.index]
        for request in window_requests:
            v = self.vm_pos.get(request.vm)
            if v is None:
                raise UnknownIdentifierError("vm", request.vm)
            self.events[positions[request.t]].append((request.kind, v))

        alive = np.array([state.has_vm(vm) for vm in self.vm_ids], dtype=bool)
        self.alive = np.zeros((len(self.index), len(self.vm_ids)), dtype=bool)
        for t, events in enumerate(self.events):
            for kind, v in events:
                alive[v] = kind is RequestKind.BOOT
            self.alive[t] = alive
        self.window_vm_count = int(self.alive.any(axis=0).sum()) if self.alive.size else 0

    @property
    def n_pms(self) -> int:
        return len(self.pm_ids)

    @property
    def n_vms(self) -> int:
        return len(self.vm_ids)

    @property
    def n_steps(self) -> int:
        return len(self.index)

    # ------------------------------------------------------------------
    # Schedule replay
    # ------------------------------------------------------------------

    def alloc_matrix(self, schedule: Schedule) -> np.ndarray:
        """
        Replay ``schedule`` into an allocation matrix shaped [T, V].

        Raises:
            WindowMismatchError: If the schedule is not over this window.
            UnknownIdentifierError: If an action names an unknown VM or PM.
        """
        if schedule.index != self.index:
            raise WindowMismatchError(
                f"schedule starts {schedule.index[0] if schedule.index else None}, "
                f"window starts {self.index[0]}"
            )
        hosts = self.initial_hosts.copy()
        alive = np.array([self.state.has_vm(vm) for vm in self.vm_ids], dtype=bool)
        deleted = np.zeros(self.n_vms, dtype=bool)
        alloc = np.empty((self.n_steps, self.n_vms), dtype=np.int64)

        for t in range(self.n_steps):
            for kind, v in self.events[t]:
                if kind is RequestKind.BOOT:
                    alive[v] = True
                else:
                    alive[v] = False
                    deleted[v] = True
                    hosts[v] = UNPLACED
            for action in schedule.actions_at(t):
                v = self.vm_pos.get(action.vm)
                if v is None:
                    raise UnknownIdentifierError("vm", action.vm)
                p = self.pm_pos.get(action.pm)
                if p is None:
                    raise UnknownIdentifierError("pm", action.pm)
                if not alive[v]:
                    if deleted[v]:
                        continue
                    raise UnknownIdentifierError("vm", action.vm)
                hosts[v] = p
            alloc[t] = hosts
        return alloc

    # ------------------------------------------------------------------
    # Scoring
    # ------------------------------------------------------------------

    def loads(self, alloc: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """
        Per-PM resource loads and VM counts of allocation matrices.

        Args:
            alloc: Shaped [B, T, V].

        Returns:
            (loads [B, T, P, R], counts [B, T, P])
        """
        batch, steps, n_vms = alloc.shape
        n_pms, n_resources = self.n_pms, self.capacity.shape[1]
        cells = batch * steps * n_pms
        placed = alloc >= 0
        base = (np.arange(batch)[:, None, None] * steps + np.arange(steps)[None, :, None]) * n_pms
        flat = (base + alloc)[placed]
        vms = np.broadcast_to(np.arange(n_vms), alloc.shape)[placed]

        counts = np.bincount(flat, minlength=cells).reshape(batch, steps, n_pms)
        loads = np.empty((batch, steps, n_pms, n_resources))
        for r in range(n_resources):
            loads[..., r] = np.bincount(
                flat, weights=self.demand[vms, r], minlength=cells
            ).reshape(batch, steps, n_pms)
        return loads, counts

    def migration_counts(self, alloc: np.ndarray) -> np.ndarray:
        """Real host changes per allocation matrix in a [B, T, V] batch."""
        start = np.broadcast_to(self.initial_hosts, (alloc.shape[0], 1, alloc.shape[2]))
        previous = np.concatenate([start, alloc[:, :-1, :]], axis=1)
        moved = (alloc >= 0) & (previous >= 0) & (alloc != previous)
        return moved.sum(axis=(1, 2))

    def utilisation(self, alloc: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Utilisation, activity and overload of a [B, T, V] batch, each [B, T, P]."""
        loads, counts = self.loads(alloc)
        active = counts > 0
        if self.n_pms:
            util = (loads / self.capacity[None, None]).max(axis=-1)
        else:
            util = np.zeros(counts.shape)
        overloaded = (loads > self.capacity[None, None] + CAPACITY_EPSILON).any(axis=-1)
        return util, active, overloaded

    def evaluate_alloc(self, alloc: np.ndarray) -> list[FitnessBreakdown]:
        """Score a [B, T, V] batch of allocation matrices."""
        if alloc.ndim == 2:
            alloc = alloc[None]
        batch = alloc.shape[0]
        if self.n_steps == 0:
            return [FitnessBreakdown(0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0, 0.0)] * batch

        util, active, overloaded = self.utilisation(alloc)
        energy = energy_kernel(util, active, self.power_idle, self.power_span, self.factors)
        consolidation = consolid_from_utilisation(util, active)
        constraint = overload_fraction(overloaded)

        migrations = self.migration_counts(alloc)
        slots = self.window_vm_count * self.n_steps
        migration = migrations / slots if slots else np.zeros(batch)

        alive_total = int(self.alive.sum())
        unplaced = (self.alive[None] & (alloc < 0)).sum(axis=(1, 2))
        pending = unplaced / alive_total if alive_total else np.zeros(batch)

        w = self.weights
        normalized = energy / self.ceiling if self.ceiling > 0 else np.zeros(batch)
        total = (
            w.w_energy * normalized
            + w.w_consolid * consolidation
            + w.w_migration * migration
            + w.w_constraint * (constraint + pending)
        )

        return [
            FitnessBreakdown(
                energy_cost_usd=float(energy[b]),
                energy_ceiling_usd=self.ceiling,
                consolid=float(consolidation[b]),
                migration_penalty=float(migration[b]),
                constraint_penalty=float(constraint[b]),
                pending_penalty=float(pending[b]),
                migrations=int(migrations[b]),
                total=float(total[b]),
            )
            for b in range(batch)
        ]

    def evaluate(self, schedule: Schedule) -> FitnessBreakdown:
        """Score one schedule."""
        return self.evaluate_alloc(self.alloc_matrix(schedule)[None])[0]

    def evaluate_many(self, schedules: Sequence[Schedule]) -> list[FitnessBreakdown]:
        """Score schedules in one batch."""
        if not schedules:
            return []
        alloc = np.stack([self.alloc_matrix(s) for s in schedules])
        return self.evaluate_alloc(alloc)


def total_fitness(
    schedule: Schedule,
    state: CloudState,
    forecasts: Forecasts,
    weights: Optional[FitnessWeights] = None,
    ppue_model: Optional[PPueModel] = None,
    requests: Iterable[VMRequest] = (),
) -> FitnessBreakdown:
    """
    Weighted fitness of ``schedule`` from ``state`` under ``forecasts``.

    total = w_energy * energy / ceiling + w_consolid * consolid
          + w_migration * migration + w_constraint * (constraint + pending)

    where ceiling is the cost of running every PM at peak over the window.
    Lower is better.
    """
    evaluator = FitnessEvaluator(state, forecasts, weights, ppue_model, requests)
    return evaluator.evaluate(schedule)
