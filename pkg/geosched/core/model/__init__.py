"""Cloud model: machines, states, actions, schedules and time series."""

from geosched.core.model.cloud import (
    Action,
    CloudState,
    Inventory,
    Location,
    PhysicalMachine,
    RequestKind,
    VirtualMachine,
    VMRequest,
    apply_action,
    capacity_ok,
    utilisation,
)
from geosched.core.model.schedule import Schedule
from geosched.core.model.timeseries import TimeSeries, date_index

__all__ = [
    "Action",
    "CloudState",
    "Inventory",
    "Location",
    "PhysicalMachine",
    "RequestKind",
    "Schedule",
    "TimeSeries",
    "VMRequest",
    "VirtualMachine",
    "apply_action",
    "capacity_ok",
    "date_index",
    "utilisation",
]
