"""
Custom exceptions for the geosched package.

All geosched-specific exceptions inherit from GeoschedError to allow
catching all package exceptions with a single except clause.
"""

from __future__ import annotations

from typing import Optional


class GeoschedError(Exception):
    """Base exception for all geosched errors."""

    def __init__(self, message: str, details: Optional[str] = None):
        self.message = message
        self.details = details
        super().__init__(message)

    def __str__(self) -> str:
        if self.details:
            return f"{self.message}: {self.details}"
        return self.message


# Cloud model errors
class ModelError(GeoschedError):
    """Base class for cloud model errors."""

    pass


class UnknownIdentifierError(ModelError):
    """A VM or PM identifier does not exist in the scenario."""

    def __init__(self, kind: str, identifier: str):
        self.kind = kind
        self.identifier = identifier
        super().__init__(
            f"Unknown {kind}",
            f"No {kind} with id: {identifier}",
        )


class CapacityError(ModelError):
    """A placement would exceed the capacity of a physical machine."""

    def __init__(self, pm_id: str, reason: Optional[str] = None):
        self.pm_id = pm_id
        details = f"PM: {pm_id}"
        if reason:
            details += f", Reason: {reason}"
        super().__init__("Capacity exceeded", details)


# Trace errors
class TraceError(GeoschedError):
    """Base class for geotemporal trace errors."""

    pass


class TraceFormatError(TraceError):
    """A trace file is malformed."""

    def __init__(self, path: str, reason: str, row: Optional[int] = None):
        self.path = path
        self.row = row
        self.reason = reason
        details = f"{path}"
        if row is not None:
            details += f", row {row}"
        details += f": {reason}"
        super().__init__("Malformed trace file", details)


class TraceOrderError(TraceError):
    """Trace timestamps are not strictly increasing."""

    def __init__(self, location: str, timestamp: str):
        self.location = location
        self.timestamp = timestamp
        super().__init__(
            "Non-monotone trace timestamps",
            f"Location {location} goes backwards at {timestamp}",
        )


class TraceGapError(TraceError):
    """Traces do not cover the requested time range."""

    def __init__(self, location: str, reason: str):
        self.location = location
        super().__init__("Trace gap", f"Location {location}: {reason}")


# Forecasting errors
class ForecastError(GeoschedError):
    """Invalid forecast request."""

    pass


# Schedule errors
class ScheduleError(GeoschedError):
    """Base class for schedule and population errors."""

    pass


class WindowMismatchError(ScheduleError):
    """Two schedules or a schedule and a window do not line up."""

    def __init__(self, reason: str):
        super().__init__("Forecast window mismatch", reason)


class SearchSpaceTooLargeError(GeoschedError):
    """Exhaustive search was asked to enumerate too many schedules."""

    def __init__(self, log10_combinations: float, limit: int):
        self.log10_combinations = log10_combinations
        self.limit = limit
        exponent = int(log10_combinations)
        mantissa = 10 ** (log10_combinations - exponent)
        super().__init__(
            "Search space too large",
            f"approximately {mantissa:.2f} x 10^{exponent} combinations "
            f"exceed the limit of {limit}",
        )


# Scenario errors
class ScenarioError(GeoschedError):
    """Base class for scenario definition errors."""

    pass


class ConfigError(ScenarioError):
    """A scenario key is unknown or holds an invalid value."""

    def __init__(self, key_path: str, reason: str, line: Optional[int] = None):
        self.key_path = key_path
        self.reason = reason
        self.line = line
        location = f"line {line}: " if line is not None else ""
        super().__init__("Invalid scenario", f"{location}{key_path}: {reason}")


# Simulation errors
class SimulationError(GeoschedError):
    """The simulation reached an inconsistent state."""

    pass
