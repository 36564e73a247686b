"""
Synthetic IaaS workload.

Users boot VMs without telling how long they will run. Boots arrive as a
Poisson process (``arrival_rate`` per step); each VM lives a geometric
number of steps with mean ``mean_lifetime`` and is then deleted. The
lifetimes only show up as delete requests, never as VM attributes.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from datetime import datetime, timedelta
from typing import Any, Iterator

import numpy as np

from geosched.constants import DEFAULT_START, DEFAULT_STEP
from geosched.core.model.cloud import RequestKind, VirtualMachine, VMRequest
from geosched.core.model.timeseries import date_index
from geosched.core.rng import Seed, make_rng

logger = logging.getLogger(__name__)

DEFAULT_VM_SIZES: tuple[tuple[float, ...], ...] = ((1.0, 1.0), (1.0, 2.0), (2.0, 4.0), (4.0, 8.0))
DEFAULT_SIZE_WEIGHTS: tuple[float, ...] = (0.3, 0.3, 0.25, 0.15)


@dataclass(frozen=True)
class WorkloadParams:
    """
    Parameters of the synthetic workload.

    Attributes:
        arrival_rate: Mean number of boots per step (Poisson).
        mean_lifetime: Mean VM lifetime in steps (geometric, >= 1).
        initial_vms: VMs booted at the first step, on top of the arrivals.
        sizes: Candidate (cpu, ram) demands.
        size_weights: Probability of each size; normalised on use.
    """

    arrival_rate: float = 0.25
    mean_lifetime: float = 120.0
    initial_vms: int = 0
    sizes: tuple[tuple[float, ...], ...] = field(default=DEFAULT_VM_SIZES)
    size_weights: tuple[float, ...] = field(default=DEFAULT_SIZE_WEIGHTS)

    def __post_init__(self) -> None:
        if self.arrival_rate < 0:
            raise ValueError(f"arrival_rate must be >= 0, got {self.arrival_rate}")
        if self.mean_lifetime < 1:
            raise ValueError(f"mean_lifetime must be >= 1 step, got {self.mean_lifetime}")
        if self.initial_vms < 0:
            raise ValueError(f"initial_vms must be >= 0, got {self.initial_vms}")
        if not self.sizes:
            raise ValueError("sizes must not be empty")
        if len(self.sizes) != len(self.size_weights):
            raise ValueError(
                f"{len(self.sizes)} sizes but {len(self.size_weights)} size_weights"
            )
        if any(w < 0 for w in self.size_weights) or sum(self.size_weights) <= 0:
            raise ValueError("size_weights must be >= 0 with a positive sum")
        for size in self.sizes:
            if any(d <= 0 for d in size):
                raise ValueError(f"VM size demands must be > 0, got {size}")

    def to_dict(self) -> dict[str, Any]:
        return {
            "arrival_rate": self.arrival_rate,
            "mean_lifetime": self.mean_lifetime,
            "initial_vms": self.initial_vms,
            "sizes": [list(s) for s in self.sizes],
            "size_weights": list(self.size_weights),
        }


@dataclass(frozen=True)
class Workload:
    """
    A generated workload: the VM catalogue and the request stream.

    Iterating a Workload yields its requests in time order, so it can be
    used wherever a list of VMRequest is expected.
    """

    vms: tuple[VirtualMachine, ...]
    requests: tuple[VMRequest, ...]

    def __iter__(self) -> Iterator[VMRequest]:
        return iter(self.requests)

    def __len__(self) -> int:
        return len(self.requests)

    def at(self, timestamp: datetime) -> list[VMRequest]:
        """Requests issued at ``timestamp``, deletes first."""
        return [r for r in self.requests if r.t == timestamp]

    @property
    def boots(self) -> list[VMRequest]:
        return [r for r in self.requests if r.kind is RequestKind.BOOT]

    @property
    def deletes(self) -> list[VMRequest]:
        return [r for r in self.requests if r.kind is RequestKind.DELETE]


def _vm_name(i: int) -> str:
    return f"vm{i:05d}"


def generate_workload(
    seed: Seed,
    params: WorkloadParams,
    horizon: int,
    start: datetime = DEFAULT_START,
    step: timedelta = DEFAULT_STEP,
) -> Workload:
    """
    Generate boot and delete requests over ``horizon`` steps.

    Args:
        seed: Random seed; the same seed gives the same workload.
        params: Workload parameters.
        horizon: Number of simulation steps.
        start: Timestamp of the first step.
        step: Step length.

    Returns:
        The VM catalogue and the requests, ordered by time with deletes
        before boots at the same step. A VM whose lifetime runs past the
        horizon has no delete request.

    Example:
        workload = generate_workload(7, WorkloadParams(arrival_rate=0.5), horizon=168)
    """
    if horizon < 0:
        raise ValueError(f"horizon must be >= 0, got {horizon}")
    rng = make_rng(seed)
    index = date_index(start, horizon, step)

    arrivals = rng.poisson(params.arrival_rate, size=horizon) if horizon else np.zeros(0, int)
    if horizon:
        arrivals[0] += params.initial_vms
    boot_steps = np.repeat(np.arange(horizon), arrivals)
    n_vms = len(boot_steps)

    weights = np.asarray(params.size_weights, dtype=float)
    size_choice = rng.choice(len(params.sizes), size=n_vms, p=weights / weights.sum())
    lifetimes = rng.geometric(1.0 / params.mean_lifetime, size=n_vms)

    vms: list[VirtualMachine] = []
    deletes: list[VMRequest] = []
    boots: list[VMRequest] = []
    for i in range(n_vms):
        vm = VirtualMachine(_vm_name(i), tuple(float(d) for d in params.sizes[size_choice[i]]))
        vms.append(vm)
        booted_at = int(boot_steps[i])
        boots.append(VMRequest(index[booted_at], RequestKind.BOOT, vm.id))
        deleted_at = booted_at + int(lifetimes[i])
        if deleted_at < horizon:
            deletes.append(VMRequest(index[deleted_at], RequestKind.DELETE, vm.id))

    kind_order = {RequestKind.DELETE: 0, RequestKind.BOOT: 1}
    requests = sorted(deletes + boots, key=lambda r: (r.t, kind_order[r.kind], r.vm))
    logger.debug(
        f"Generated {n_vms} VMs with {len(deletes)} deletes over {horizon} steps"
    )
    return Workload(tuple(vms), tuple(requests))
