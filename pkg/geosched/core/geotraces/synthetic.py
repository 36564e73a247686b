"""
Synthetic geotemporal traces.

Stands in for real-time electricity price and weather feeds. Prices follow
a daily sinusoid plus AR(1) noise; each location is phase shifted by
2*pi*i/n so that locations are anti-correlated. Temperatures follow a daily
sinusoid plus a seasonal offset and a per-location climate offset.
"""

from __future__ import annotations

import logging
from dataclasses import asdict, dataclass
from datetime import datetime, timedelta
from typing import Any, Optional, Sequence

import numpy as np
from scipy import signal

from geosched.constants import DEFAULT_START, DEFAULT_STEP
from geosched.core.geotraces.models import GeoTrace
from geosched.core.model.timeseries import TimeSeries, date_index
from geosched.core.rng import Seed, make_rng, spawn

logger = logging.getLogger(__name__)

HOURS_PER_DAY = 24.0
HOURS_PER_YEAR = 365.0 * 24.0


@dataclass(frozen=True)
class TraceParams:
    """
    Shape of the synthetic traces.

    Attributes:
        base_price: Mean price in USD/kWh.
        price_amplitude: Amplitude of the daily price cycle.
        price_noise: Innovation std-dev of the AR(1) price noise.
        ar_coefficient: AR(1) coefficient in [0, 1).
        base_temperature: Mean temperature in °C.
        temperature_amplitude: Amplitude of the daily temperature cycle.
        seasonal_amplitude: Amplitude of the yearly temperature cycle.
        climate_spread: Difference in mean temperature between the coldest
            and the warmest location.
        temperature_noise: Std-dev of independent hourly temperature noise.
        period_hours: Period of the price and temperature cycles.
        location_names: Optional trace keys; defaults to loc0, loc1, ...
    """

    base_price: float = 0.10
    price_amplitude: float = 0.04
    price_noise: float = 0.004
    ar_coefficient: float = 0.8
    base_temperature: float = 12.0
    temperature_amplitude: float = 6.0
    seasonal_amplitude: float = 8.0
    climate_spread: float = 10.0
    temperature_noise: float = 0.5
    period_hours: float = HOURS_PER_DAY
    location_names: Optional[tuple[str, ...]] = None

    def __post_init__(self) -> None:
        if self.base_price < 0 or self.price_amplitude < 0 or self.price_noise < 0:
            raise ValueError("Price parameters must be non-negative")
        if not 0 <= self.ar_coefficient < 1:
            raise ValueError(f"AR coefficient must be in [0, 1), got {self.ar_coefficient}")
        if self.temperature_noise < 0:
            raise ValueError("Temperature noise must be non-negative")
        if self.period_hours <= 0:
            raise ValueError("Period must be positive")
        if self.location_names is not None:
            object.__setattr__(self, "location_names", tuple(self.location_names))

    def names(self, n_locations: int) -> tuple[str, ...]:
        """Trace keys for ``n_locations`` locations."""
        if self.location_names is None:
            return tuple(f"loc{i}" for i in range(n_locations))
        if len(self.location_names) != n_locations:
            raise ValueError(
                f"{len(self.location_names)} location names for {n_locations} locations"
            )
        return self.location_names

    def to_dict(self) -> dict[str, Any]:
        """Convert to dictionary for serialization."""
        data = asdict(self)
        if data["location_names"] is not None:
            data["location_names"] = list(data["location_names"])
        return data


def _ar1(rng: np.random.Generator, n: int, phi: float, sigma: float) -> np.ndarray:
    """AR(1) noise started from its stationary distribution."""
    shocks = rng.standard_normal(n) * sigma
    shocks[0] /= np.sqrt(1.0 - phi**2)
    return signal.lfilter([1.0], [1.0, -phi], shocks)


def synthesize_traces(
    seed: Seed,
    n_locations: int,
    horizon: int,
    params: Optional[TraceParams] = None,
    start: datetime = DEFAULT_START,
    step: timedelta = DEFAULT_STEP,
) -> dict[str, GeoTrace]:
    """
    Generate anti-correlated price and temperature traces.

    Args:
        seed: Base seed; each location draws from its own child stream.
        n_locations: Number of locations (>= 1).
        horizon: Number of steps (>= 1).
        params: Trace shape; defaults to TraceParams().
        start: First timestamp.
        step: Spacing between timestamps.

    Returns:
        Mapping of trace key to GeoTrace.

    Raises:
        ValueError: If n_locations or horizon is below 1.

    Example:
        traces = synthesize_traces(7, n_locations=2, horizon=48)
    """
    if n_locations < 1:
        raise ValueError(f"n_locations must be at least 1, got {n_locations}")
    if horizon < 1:
        raise ValueError(f"horizon must be at least 1, got {horizon}")
    params = params or TraceParams()

    index = date_index(start, horizon, step)
    hours = np.arange(horizon) * (step / timedelta(hours=1))
    start_hour_of_year = (start - datetime(start.year, 1, 1)) / timedelta(hours=1)
    seasonal = params.seasonal_amplitude * np.sin(
        2 * np.pi * (hours + start_hour_of_year) / HOURS_PER_YEAR - np.pi / 2
    )
    daily = 2 * np.pi * hours / params.period_hours

    traces: dict[str, GeoTrace] = {}
    names: Sequence[str] = params.names(n_locations)
    for i, (name, child) in enumerate(zip(names, spawn(seed, n_locations))):
        rng = make_rng(child)
        phase = 2 * np.pi * i / n_locations

        prices = params.base_price + params.price_amplitude * np.sin(daily + phase)
        if params.price_noise > 0:
            prices = prices + _ar1(rng, horizon, params.ar_coefficient, params.price_noise)
        prices = np.clip(prices, 0.0, None)

        climate = 0.0
        if n_locations > 1:
            climate = params.climate_spread * (i / (n_locations - 1) - 0.5)
        temperatures = (
            params.base_temperature
            + climate
            + seasonal
            + params.temperature_amplitude * np.sin(daily + phase - np.pi / 2)
        )
        if params.temperature_noise > 0:
            temperatures = temperatures + rng.normal(0.0, params.temperature_noise, horizon)

        traces[name] = GeoTrace(
            name,
            TimeSeries(index, tuple(float(p) for p in prices), step),
            TimeSeries(index, tuple(float(t) for t in temperatures), step),
        )

    logger.debug(f"Synthesized {n_locations} trace(s) of {horizon} steps")
    return traces
