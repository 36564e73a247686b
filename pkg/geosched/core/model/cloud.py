"""
Cloud model: machines, locations, requests and the allocation state.

The state of the cloud at one moment is the allocation ``alloc(pm)`` of
VMs to every physical machine. A PM with no VMs is suspended. States are
immutable; migration actions produce new states.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from datetime import datetime
from enum import Enum
from typing import Any, Iterable, Mapping, Optional, Union

from geosched.constants import CAPACITY_EPSILON, RESOURCE_TYPES
from geosched.exceptions import CapacityError, UnknownIdentifierError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class VirtualMachine:
    """
    A virtual machine and its resource demand.

    Attributes:
        id: Opaque identifier.
        resources: Demand per resource type, ordered as RESOURCE_TYPES.
    """

    id: str
    resources: tuple[float, ...]

    def __post_init__(self) -> None:
        resources = tuple(float(r) for r in self.resources)
        if len(resources) != len(RESOURCE_TYPES):
            raise ValueError(
                f"VM {self.id} needs {len(RESOURCE_TYPES)} resource values, got {len(resources)}"
            )
        if any(r <= 0 for r in resources):
            raise ValueError(f"VM {self.id} demands must be positive: {resources}")
        object.__setattr__(self, "resources", resources)

    def to_dict(self) -> dict[str, Any]:
        """Convert to dictionary."""
        return {"id": self.id, **dict(zip(RESOURCE_TYPES, self.resources))}


@dataclass(frozen=True)
class PhysicalMachine:
    """
    A physical server in one data center location.

    Attributes:
        id: Opaque identifier.
        capacity: Capacity per resource type, ordered as RESOURCE_TYPES.
        location: Location id.
        power_idle: Power draw in watts when on but idle.
        power_peak: Power draw in watts at full utilisation.
    """

    id: str
    capacity: tuple[float, ...]
    location: str
    power_idle: float
    power_peak: float

    def __post_init__(self) -> None:
        capacity = tuple(float(c) for c in self.capacity)
        if len(capacity) != len(RESOURCE_TYPES):
            raise ValueError(
                f"PM {self.id} needs {len(RESOURCE_TYPES)} capacity values, got {len(capacity)}"
            )
        if any(c <= 0 for c in capacity):
            raise ValueError(f"PM {self.id} capacity must be positive: {capacity}")
        if not 0 <= self.power_idle <= self.power_peak:
            raise ValueError(
                f"PM {self.id} needs 0 <= power_idle <= power_peak, "
                f"got {self.power_idle} and {self.power_peak}"
            )
        object.__setattr__(self, "capacity", capacity)

    @property
    def power_span(self) -> float:
        """Extra watts between idle and full load."""
        return self.power_peak - self.power_idle


@dataclass(frozen=True)
class Location:
    """
    A data center location and the traces that describe it.

    Attributes:
        id: Opaque identifier.
        price_trace_key: GeoTrace key supplying electricity prices.
        temperature_trace_key: GeoTrace key supplying temperatures.
    """

    id: str
    price_trace_key: str = ""
    temperature_trace_key: str = ""

    def __post_init__(self) -> None:
        if not self.price_trace_key:
            object.__setattr__(self, "price_trace_key", self.id)
        if not self.temperature_trace_key:
            object.__setattr__(self, "temperature_trace_key", self.id)


class RequestKind(Enum):
    """What a user asks for."""

    BOOT = "boot"
    DELETE = "delete"


@dataclass(frozen=True)
class VMRequest:
    """A user request to boot or delete a VM at time ``t``."""

    t: datetime
    kind: RequestKind
    vm: str


@dataclass(frozen=True, order=True)
class Action:
    """Migrate (or place) ``vm`` onto ``pm``."""

    vm: str
    pm: str

    def __str__(self) -> str:
        return f"({self.vm}, {self.pm})"


@dataclass(frozen=True)
class Inventory:
    """
    Everything the scenario knows about: PMs, locations and VM sizes.

    The VM catalog holds the sizes of every VM that may appear; which VMs
    actually exist at a moment is part of the CloudState.
    """

    pms: tuple[PhysicalMachine, ...]
    vms: Mapping[str, VirtualMachine] = field(default_factory=dict)
    locations: Mapping[str, Location] = field(default_factory=dict)
    _pm_index: dict[str, PhysicalMachine] = field(
        init=False, repr=False, compare=False, hash=False
    )

    def __post_init__(self) -> None:
        pms = tuple(self.pms)
        pm_index = {pm.id: pm for pm in pms}
        if len(pm_index) != len(pms):
            raise ValueError("PM identifiers must be unique")
        locations = dict(self.locations)
        for pm in pms:
            locations.setdefault(pm.location, Location(pm.location))
        object.__setattr__(self, "pms", pms)
        object.__setattr__(self, "vms", dict(self.vms))
        object.__setattr__(self, "locations", locations)
        object.__setattr__(self, "_pm_index", pm_index)

    @property
    def pm_ids(self) -> tuple[str, ...]:
        """PM identifiers in inventory order."""
        return tuple(pm.id for pm in self.pms)

    def pm(self, pm_id: str) -> PhysicalMachine:
        """Look up a PM by id."""
        try:
            return self._pm_index[pm_id]
        except KeyError:
            raise UnknownIdentifierError("pm", pm_id) from None

    def vm(self, vm_id: str) -> VirtualMachine:
        """Look up a VM by id."""
        try:
            return self.vms[vm_id]
        except KeyError:
            raise UnknownIdentifierError("vm", vm_id) from None

    def has_pm(self, pm_id: str) -> bool:
        return pm_id in self._pm_index

    def with_vms(self, vms: Iterable[VirtualMachine]) -> Inventory:
        """Return a copy whose VM catalog also holds ``vms``."""
        catalog = dict(self.vms)
        catalog.update({vm.id: vm for vm in vms})
        return Inventory(self.pms, catalog, self.locations)


@dataclass(frozen=True)
class CloudState:
    """
    The whole state of the cloud at one moment.

    Attributes:
        inventory: Machines and VM sizes of the scenario.
        alloc: PM id -> ids of the VMs it hosts (every PM has an entry).
        epoch: Timestamp of this state.
        pending: Booted VMs that have not been placed yet.
    """

    inventory: Inventory
    alloc: Mapping[str, frozenset[str]]
    epoch: datetime
    pending: frozenset[str] = frozenset()
    _hosts: dict[str, str] = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self) -> None:
        alloc = {pm_id: frozenset() for pm_id in self.inventory.pm_ids}
        hosts: dict[str, str] = {}
        for pm_id, vm_ids in self.alloc.items():
            if not self.inventory.has_pm(pm_id):
                raise UnknownIdentifierError("pm", pm_id)
            alloc[pm_id] = frozenset(vm_ids)
            for vm_id in vm_ids:
                if vm_id in hosts:
                    raise ValueError(
                        f"VM {vm_id} allocated to both {hosts[vm_id]} and {pm_id}"
                    )
                hosts[vm_id] = pm_id
        pending = frozenset(self.pending)
        overlap = pending & hosts.keys()
        if overlap:
            raise ValueError(f"VMs both pending and placed: {sorted(overlap)}")
        object.__setattr__(self, "alloc", alloc)
        object.__setattr__(self, "pending", pending)
        object.__setattr__(self, "_hosts", hosts)

    @classmethod
    def empty(cls, inventory: Inventory, epoch: datetime) -> CloudState:
        """A state with every PM suspended and no VMs."""
        return cls(inventory, {}, epoch)

    @property
    def suspended(self) -> dict[str, bool]:
        """PM id -> True when the PM hosts no VMs."""
        return {pm_id: not vm_ids for pm_id, vm_ids in self.alloc.items()}

    @property
    def placed_vms(self) -> frozenset[str]:
        """Ids of VMs currently hosted by some PM."""
        return frozenset(self._hosts)

    @property
    def vm_ids(self) -> tuple[str, ...]:
        """Sorted ids of every existing VM, placed or pending."""
        return tuple(sorted(self._hosts.keys() | self.pending))

    def host_of(self, vm_id: str) -> Optional[str]:
        """PM hosting ``vm_id``, or None when it is pending or unknown."""
        return self._hosts.get(vm_id)

    def has_vm(self, vm_id: str) -> bool:
        return vm_id in self._hosts or vm_id in self.pending

    def load(self, pm: Union[PhysicalMachine, str]) -> tuple[float, ...]:
        """Per-resource demand sum on ``pm``."""
        pm_id = pm if isinstance(pm, str) else pm.id
        self.inventory.pm(pm_id)
        totals = [0.0] * len(RESOURCE_TYPES)
        for vm_id in sorted(self.alloc[pm_id]):
            for i, demand in enumerate(self.inventory.vm(vm_id).resources):
                totals[i] += demand
        return tuple(totals)

    def apply(self, action: Action, enforce_capacity: bool = False) -> CloudState:
        """Shorthand for apply_action(self, action, enforce_capacity)."""
        return apply_action(self, action, enforce_capacity)

    def with_epoch(self, epoch: datetime) -> CloudState:
        """Same allocation at another moment."""
        return CloudState(self.inventory, self.alloc, epoch, self.pending)

    def boot(self, vm_id: str) -> CloudState:
        """Register a boot request: the VM becomes pending."""
        self.inventory.vm(vm_id)
        if self.has_vm(vm_id):
            raise ValueError(f"VM {vm_id} already exists")
        return CloudState(self.inventory, self.alloc, self.epoch, self.pending | {vm_id})

    def delete(self, vm_id: str) -> CloudState:
        """Register a delete request: the VM disappears from the cloud."""
        if vm_id in self.pending:
            return CloudState(self.inventory, self.alloc, self.epoch, self.pending - {vm_id})
        host = self._hosts.get(vm_id)
        if host is None:
            raise UnknownIdentifierError("vm", vm_id)
        alloc = dict(self.alloc)
        alloc[host] = alloc[host] - {vm_id}
        return CloudState(self.inventory, alloc, self.epoch, self.pending)

    def to_dict(self) -> dict[str, Any]:
        """Convert to dictionary for serialization."""
        return {
            "epoch": self.epoch.isoformat(),
            "alloc": {pm_id: sorted(vms) for pm_id, vms in self.alloc.items()},
            "pending": sorted(self.pending),
        }


def apply_action(
    state: CloudState, action: Action, enforce_capacity: bool = False
) -> CloudState:
    """
    Return the state after migrating ``action.vm`` to ``action.pm``.

    A pending VM is placed. Moving a VM onto its current host returns an
    equal state. The input state is never modified.

    Args:
        state: State to start from.
        action: Migration or placement to apply.
        enforce_capacity: Reject actions that leave the target PM overloaded.

    Raises:
        UnknownIdentifierError: If the VM does not exist or the PM is unknown.
        CapacityError: If ``enforce_capacity`` is set and the VM does not fit.
    """
    state.inventory.pm(action.pm)
    source = state.host_of(action.vm)
    if source is None and action.vm not in state.pending:
        raise UnknownIdentifierError("vm", action.vm)
    if source == action.pm:
        return state

    alloc = dict(state.alloc)
    pending = state.pending
    if source is None:
        pending = pending - {action.vm}
    else:
        alloc[source] = alloc[source] - {action.vm}
    alloc[action.pm] = alloc[action.pm] | {action.vm}
    moved = CloudState(state.inventory, alloc, state.epoch, pending)
    if enforce_capacity and not capacity_ok(moved, action.pm):
        raise CapacityError(
            action.pm,
            f"VM {action.vm} would raise the load to {moved.load(action.pm)}",
        )
    return moved


def utilisation(state: CloudState, pm: Union[PhysicalMachine, str]) -> float:
    """
    Utilisation of ``pm``: the largest demand/capacity ratio over resources.

    Returns 0.0 for a PM hosting nothing; values above 1.0 mean the PM is
    overloaded.
    """
    machine = state.inventory.pm(pm if isinstance(pm, str) else pm.id)
    if not state.alloc[machine.id]:
        return 0.0
    load = state.load(machine.id)
    return max(used / cap for used, cap in zip(load, machine.capacity))


def capacity_ok(state: CloudState, pm: Union[PhysicalMachine, str]) -> bool:
    """True iff the per-resource demand on ``pm`` fits its capacity."""
    machine = state.inventory.pm(pm if isinstance(pm, str) else pm.id)
    load = state.load(machine.id)
    return all(used <= cap + CAPACITY_EPSILON for used, cap in zip(load, machine.capacity))
