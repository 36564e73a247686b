"""
Time series forecasting and forecast assembly for the controllers.
"""

from __future__ import annotations

import logging
from typing import Iterable, Optional

import numpy as np
import pandas as pd
from statsmodels.tsa.holtwinters import Holt

from geosched.constants import (
    DEFAULT_HOLT_ALPHA,
    DEFAULT_HOLT_BETA,
    DEFAULT_SMA_K,
    FORECAST_METHODS,
    FORECAST_MODE_METHOD,
)
from geosched.core.forecasting.models import (
    ErrorModel,
    ForecastSettings,
    Forecasts,
    ForecastWindow,
)
from geosched.core.forecasting.noise import perturb, perturb_temperatures
from geosched.core.geotraces.models import GeoTrace, GeoTraces
from geosched.core.model.timeseries import TimeSeries
from geosched.core.rng import seed_sequence
from geosched.exceptions import ForecastError, TraceGapError

logger = logging.getLogger(__name__)


def _holt(values: np.ndarray, horizon: int, alpha: float, beta: float) -> np.ndarray:
    """Holt's linear trend method, initialised with l0 = y0 and b0 = y1 - y0."""
    steps = np.arange(1, horizon + 1)
    if len(values) < 3:
        # with l0 = y0 and b0 = y1 - y0 the first update reproduces y1 exactly
        trend = values[-1] - values[0]
        return values[-1] + trend * steps
    model = Holt(
        values[1:],
        initialization_method="known",
        initial_level=values[0],
        initial_trend=values[1] - values[0],
    )
    fitted = model.fit(smoothing_level=alpha, smoothing_trend=beta, optimized=False)
    return np.asarray(fitted.forecast(horizon), dtype=float)


def forecast(
    history: TimeSeries[float],
    window: ForecastWindow,
    method: str = "persistence",
    k: int = DEFAULT_SMA_K,
    alpha: float = DEFAULT_HOLT_ALPHA,
    beta: float = DEFAULT_HOLT_BETA,
) -> TimeSeries[float]:
    """
    Forecast the values of ``history`` over ``window``.

    Args:
        history: Observed values; the window must start one step after its end.
        window: Window to forecast over.
        method: "persistence" (last value), "sma" (mean of the last k
            values) or "double_exponential" (Holt's linear trend).
        k: Values averaged by sma.
        alpha: Level smoothing of double_exponential.
        beta: Trend smoothing of double_exponential.

    Returns:
        Series indexed exactly over the window.

    Raises:
        ForecastError: Empty history, misaligned window, unknown method or
            k larger than the history.
    """
    if len(history) == 0:
        raise ForecastError("Cannot forecast", "history is empty")
    if window.step != history.step or window.start != history.end + history.step:
        raise ForecastError(
            "Cannot forecast",
            f"window starting {window.start} does not follow history ending {history.end}",
        )

    values = history.to_numpy()
    if method == "persistence":
        predicted = np.full(window.length, values[-1])
    elif method == "sma":
        if not 1 <= k <= len(values):
            raise ForecastError(
                "Cannot forecast", f"sma k={k} needs 1..{len(values)} history values"
            )
        predicted = np.full(window.length, pd.Series(values).rolling(k).mean().iloc[-1])
    elif method == "double_exponential":
        predicted = _holt(values, window.length, alpha, beta)
    else:
        raise ForecastError(
            "Unknown forecast method",
            f"{method!r}; expected one of {', '.join(FORECAST_METHODS)}",
        )
    return TimeSeries(window.index, tuple(float(v) for v in predicted), window.step)


def _history(series: TimeSeries[float], window: ForecastWindow) -> TimeSeries[float]:
    """Observed values up to and including the window's first step."""
    last = series.position(window.start)
    return TimeSeries(series.index[: last + 1], series.values[: last + 1], series.step)


def _method_forecast(
    trace: GeoTrace, window: ForecastWindow, settings: ForecastSettings
) -> GeoTrace:
    # The current step is observed; only later steps are forecast.
    current = trace.window(window.start, 1)
    if window.length == 1:
        return current
    ahead = ForecastWindow(window.start + window.step, window.length - 1, window.step)
    parts = []
    for field in ("prices", "temperatures"):
        history = _history(getattr(trace, field), window)
        # early in a run the sma averages what has been observed so far
        k = min(settings.sma_k, len(history))
        predicted = forecast(history, ahead, settings.method, k, settings.alpha, settings.beta)
        parts.append(getattr(current, field).values + predicted.values)
    prices = [max(0.0, p) for p in parts[0]]
    return GeoTrace(
        trace.location,
        TimeSeries(window.index, tuple(prices), window.step),
        TimeSeries(window.index, tuple(parts[1]), window.step),
    )


def build_forecasts(
    traces: GeoTraces,
    window: ForecastWindow,
    settings: Optional[ForecastSettings] = None,
    error: Optional[ErrorModel] = None,
    step_key: int = 0,
    keys: Optional[Iterable[str]] = None,
) -> Forecasts:
    """
    Build the controller-visible traces for one reevaluation.

    In oracle mode the ground truth over the window is perturbed with
    ``error``; every (step_key, trace) pair gets its own noise stream. In
    method mode the current step is observed and the rest is forecast from
    history.

    Args:
        traces: Ground-truth traces.
        window: Forecast window; must be covered by the traces.
        settings: Forecast settings; defaults to oracle mode.
        error: Error model for oracle mode; defaults to no error.
        step_key: Simulation step, used to derive noise streams.
        keys: Trace keys to forecast; defaults to all.

    Raises:
        TraceGapError: If a trace does not cover the window.
    """
    settings = settings or ForecastSettings()
    error = error or ErrorModel()
    wanted = list(traces) if keys is None else list(keys)

    forecasts: dict[str, GeoTrace] = {}
    for i, key in enumerate(wanted):
        trace = traces.get(key)
        if trace is None:
            raise TraceGapError(key, "no trace with this key")
        if settings.mode == FORECAST_MODE_METHOD:
            forecasts[key] = _method_forecast(trace, window, settings)
            continue
        actual = trace.window(window.start, window.length)
        price_stream, temperature_stream = seed_sequence(error.seed, step_key, i).spawn(2)
        forecasts[key] = GeoTrace(
            key,
            perturb(actual.prices, error, price_stream),
            perturb_temperatures(actual.temperatures, error, temperature_stream),
        )

    return Forecasts(window, forecasts)
