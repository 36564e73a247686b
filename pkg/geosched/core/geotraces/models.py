"""
Data models for geotemporal traces.

A GeoTrace holds the electricity price and outside temperature of one data
center location over time. A scenario's traces are a mapping from trace key
to GeoTrace.
"""

from __future__ import annotations

from dataclasses import dataclass
from datetime import datetime
from typing import Any, Mapping, Sequence

import numpy as np

from geosched.core.model.cloud import Location
from geosched.core.model.timeseries import TimeSeries
from geosched.exceptions import TraceGapError


@dataclass(frozen=True)
class GeoTrace:
    """
    Price and temperature series of one location.

    Attributes:
        location: Trace key (usually the location id).
        prices: Electricity price in USD/kWh.
        temperatures: Outside temperature in °C.
    """

    location: str
    prices: TimeSeries[float]
    temperatures: TimeSeries[float]

    def __post_init__(self) -> None:
        if self.prices.index != self.temperatures.index:
            raise ValueError(
                f"Trace {self.location}: price and temperature indexes differ"
            )
        if any(p < 0 for p in self.prices.values):
            raise ValueError(f"Trace {self.location}: prices must be non-negative")

    @property
    def index(self) -> tuple[datetime, ...]:
        return self.prices.index

    def __len__(self) -> int:
        return len(self.prices)

    def window(self, start: datetime, length: int) -> GeoTrace:
        """Sub-trace of ``length`` steps from ``start``."""
        try:
            return GeoTrace(
                self.location,
                self.prices.window(start, length),
                self.temperatures.window(start, length),
            )
        except KeyError as e:
            raise TraceGapError(self.location, str(e.args[0])) from None

    def with_values(
        self, prices: Sequence[float], temperatures: Sequence[float]
    ) -> GeoTrace:
        """Same index, new values."""
        return GeoTrace(
            self.location,
            self.prices.with_values(float(p) for p in prices),
            self.temperatures.with_values(float(t) for t in temperatures),
        )

    def to_dict(self) -> dict[str, Any]:
        """Convert to dictionary for serialization."""
        return {
            "location": self.location,
            "index": [ts.isoformat() for ts in self.index],
            "prices": list(self.prices.values),
            "temperatures": list(self.temperatures.values),
        }


GeoTraces = Mapping[str, GeoTrace]


def covering_values(
    traces: GeoTraces,
    key: str,
    index: Sequence[datetime],
    field: str,
) -> np.ndarray:
    """
    Values of ``traces[key]`` at every timestamp of ``index``.

    Args:
        traces: Loaded or forecast traces.
        key: Trace key.
        index: Timestamps that must be covered.
        field: "prices" or "temperatures".

    Raises:
        TraceGapError: If the key is missing or a timestamp is not covered.
    """
    trace = traces.get(key)
    if trace is None:
        raise TraceGapError(key, "no trace with this key")
    series: TimeSeries[float] = getattr(trace, field)
    try:
        return np.array([series.at(ts) for ts in index], dtype=float)
    except KeyError as e:
        raise TraceGapError(key, str(e.args[0])) from None


def location_inputs(
    traces: GeoTraces,
    locations: Sequence[Location],
    index: Sequence[datetime],
) -> tuple[np.ndarray, np.ndarray]:
    """
    Price and temperature matrices of shape [len(locations), len(index)].

    Raises:
        TraceGapError: If any location's traces do not cover ``index``.
    """
    shape = (len(locations), len(index))
    prices = np.zeros(shape)
    temperatures = np.zeros(shape)
    for row, location in enumerate(locations):
        prices[row] = covering_values(traces, location.price_trace_key, index, "prices")
        temperatures[row] = covering_values(
            traces, location.temperature_trace_key, index, "temperatures"
        )
    return prices, temperatures
