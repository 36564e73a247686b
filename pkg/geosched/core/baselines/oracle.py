"""
Exhaustive search for the optimal schedule of tiny instances.

Every (vm, t) slot has |PMs| + 1 choices: no action, or an action towards
one of the PMs. Choices are enumerated step by step, "no action" first and
then PMs in inventory order, so the first optimum found is also the
lexicographically smallest. Branches whose accrued constraint and migration
penalty already exceed the best total are pruned.
"""

from __future__ import annotations

import itertools
import logging
import math
from dataclasses import asdict, dataclass
from typing import Any, Iterable, Iterator, Optional

import numpy as np

from geosched.constants import CAPACITY_EPSILON, ORACLE_MAX_COMBINATIONS
from geosched.core.fitness.evaluator import UNPLACED, FitnessEvaluator
from geosched.core.fitness.models import FitnessBreakdown, FitnessWeights
from geosched.core.forecasting.models import Forecasts
from geosched.core.geotraces.cooling import PPueModel
from geosched.core.model.cloud import Action, CloudState, RequestKind, VMRequest
from geosched.core.model.schedule import Schedule
from geosched.exceptions import GeoschedError, SearchSpaceTooLargeError

logger = logging.getLogger(__name__)

# Leaves scored per batch
LEAF_CHUNK = 4096


@dataclass(frozen=True)
class OracleLimits:
    """Largest search space the oracle will enumerate."""

    max_combinations: int = ORACLE_MAX_COMBINATIONS

    def __post_init__(self) -> None:
        if self.max_combinations < 1:
            raise ValueError(f"max_combinations must be >= 1, got {self.max_combinations}")

    def to_dict(self) -> dict[str, Any]:
        return asdict(self)


def search_space_log10(choices_per_slot: int, n_vms: int, window_length: int) -> float:
    """
    log10 of choices_per_slot ** (n_vms * window_length).

    Example:
        search_space_log10(2000, 10000, 12)  # 396123.6...
    """
    if choices_per_slot <= 1 or n_vms == 0 or window_length == 0:
        return 0.0
    return n_vms * window_length * math.log10(choices_per_slot)


def check_search_space(n_pms: int, n_vms: int, window_length: int, limit: int) -> int:
    """
    Number of schedules to enumerate.

    Raises:
        SearchSpaceTooLargeError: If it exceeds ``limit``.
    """
    log10_count = search_space_log10(n_pms + 1, n_vms, window_length)
    if log10_count > math.log10(limit) + 1:
        raise SearchSpaceTooLargeError(log10_count, limit)
    count = (n_pms + 1) ** (n_vms * window_length)
    if count > limit:
        raise SearchSpaceTooLargeError(log10_count, limit)
    return count


class _Search:
    """Depth-first enumeration over window steps."""

    def __init__(self, evaluator: FitnessEvaluator):
        self.ev = evaluator
        self.choices = list(range(UNPLACED, evaluator.n_pms))
        self.slots = [np.flatnonzero(evaluator.alive[t]) for t in range(evaluator.n_steps)]
        slot_count = evaluator.window_vm_count * evaluator.n_steps
        self.migration_scale = evaluator.weights.w_migration / slot_count if slot_count else 0.0
        cells = evaluator.n_pms * evaluator.n_steps
        self.overload_scale = evaluator.weights.w_constraint / cells if cells else 0.0
        alive_total = int(evaluator.alive.sum())
        self.pending_scale = evaluator.weights.w_constraint / alive_total if alive_total else 0.0

        self.best_key: Optional[tuple[float, int]] = None
        self.best_alloc: Optional[np.ndarray] = None
        self.best_fitness: Optional[FitnessBreakdown] = None
        self.best_path: list[tuple[int, ...]] = []
        self.leaves = 0
        self.pruned = 0

    def _after_events(self, hosts: np.ndarray, t: int) -> np.ndarray:
        hosts = hosts.copy()
        for kind, v in self.ev.events[t]:
            if kind is RequestKind.DELETE:
                hosts[v] = UNPLACED
        return hosts

    def _step_penalty(self, before: np.ndarray, after: np.ndarray, t: int) -> float:
        """Constraint, pending and migration penalty accrued by one step."""
        loads, _ = self.ev.loads(after[None, None, :])
        overloaded = int((loads[0, 0] > self.ev.capacity + CAPACITY_EPSILON).any(axis=-1).sum())
        unplaced = int((self.ev.alive[t] & (after < 0)).sum())
        moves = int(((after >= 0) & (before >= 0) & (after != before)).sum())
        return (
            self.overload_scale * overloaded
            + self.pending_scale * unplaced
            + self.migration_scale * moves
        )

    def _step_options(self, base: np.ndarray, t: int) -> Iterator[tuple[tuple[int, ...], np.ndarray]]:
        slots = self.slots[t]
        for choice in itertools.product(self.choices, repeat=len(slots)):
            hosts = base.copy()
            for v, c in zip(slots, choice):
                if c >= 0:
                    hosts[v] = c
            yield choice, hosts

    def run(self) -> None:
        self._descend(0, self.ev.initial_hosts.copy(), [], [], 0.0)

    def _descend(
        self,
        t: int,
        hosts: np.ndarray,
        prefix: list[np.ndarray],
        path: list[tuple[int, ...]],
        accrued: float,
    ) -> None:
        base = self._after_events(hosts, t)
        if t == self.ev.n_steps - 1:
            self._leaves(base, prefix, path)
            return
        for choice, after in self._step_options(base, t):
            penalty = accrued + self._step_penalty(hosts, after, t)
            if self.best_key is not None and penalty > self.best_key[0]:
                self.pruned += 1
                continue
            self._descend(t + 1, after, prefix + [after], path + [choice], penalty)

    def _leaves(
        self, base: np.ndarray, prefix: list[np.ndarray], path: list[tuple[int, ...]]
    ) -> None:
        t = self.ev.n_steps - 1
        slots = self.slots[t]
        options = itertools.product(self.choices, repeat=len(slots))
        while True:
            chunk = list(itertools.islice(options, LEAF_CHUNK))
            if not chunk:
                return
            choices = np.array(chunk, dtype=np.int64).reshape(len(chunk), len(slots))
            last = np.repeat(base[None], len(chunk), axis=0)
            if len(slots):
                last[:, slots] = np.where(choices >= 0, choices, last[:, slots])
            if prefix:
                head = np.repeat(np.stack(prefix)[None], len(chunk), axis=0)
                alloc = np.concatenate([head, last[:, None, :]], axis=1)
            else:
                alloc = last[:, None, :]
            results = self.ev.evaluate_alloc(alloc)
            self.leaves += len(chunk)
            for i, fitness in enumerate(results):
                key = (fitness.total, fitness.migrations)
                if self.best_key is None or key < self.best_key:
                    self.best_key = key
                    self.best_alloc = alloc[i]
                    self.best_fitness = fitness
                    self.best_path = path + [tuple(int(c) for c in choices[i])]

    def schedule(self) -> Schedule:
        entries = []
        for t, choice in enumerate(self.best_path):
            for v, c in zip(self.slots[t], choice):
                if c >= 0:
                    entries.append((t, Action(self.ev.vm_ids[v], self.ev.pm_ids[c])))
        return Schedule.from_entries(self.ev.index, entries, self.ev.step)


def brute_force_optimum(
    state: CloudState,
    requests: Iterable[VMRequest],
    forecasts: Forecasts,
    weights: Optional[FitnessWeights] = None,
    limits: Optional[OracleLimits] = None,
    ppue_model: Optional[PPueModel] = None,
) -> tuple[Schedule, FitnessBreakdown]:
    """
    Exact minimum of the total fitness by exhaustive enumeration.

    Ties are broken by fewer migrations, then by enumeration order (no
    action before PMs, PMs in inventory order, earlier steps first).

    Raises:
        SearchSpaceTooLargeError: If (|PMs| + 1) ** (|VMs| x |fw|) exceeds
            ``limits.max_combinations``.
    """
    limits = limits or OracleLimits()
    requests = list(requests)
    n_vms = len(set(state.vm_ids) | {r.vm for r in requests if r.kind is RequestKind.BOOT})
    n_pms = len(state.inventory.pms)
    count = check_search_space(n_pms, n_vms, forecasts.window.length, limits.max_combinations)

    evaluator = FitnessEvaluator(state, forecasts, weights, ppue_model, requests)
    search = _Search(evaluator)
    search.run()
    logger.info(
        f"Oracle scored {search.leaves} of {count} schedules "
        f"({search.pruned} branch(es) pruned), best {search.best_key}"
    )
    if search.best_fitness is None:
        raise GeoschedError("Exhaustive search found no schedule")
    return search.schedule(), search.best_fitness
