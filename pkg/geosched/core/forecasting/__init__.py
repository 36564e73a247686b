"""Forecasts of geotemporal inputs over the forecast window."""

from geosched.core.forecasting.methods import build_forecasts, forecast
from geosched.core.forecasting.models import (
    ErrorModel,
    ForecastSettings,
    Forecasts,
    ForecastWindow,
)
from geosched.core.forecasting.noise import perturb, perturb_temperatures

__all__ = [
    "ErrorModel",
    "ForecastSettings",
    "ForecastWindow",
    "Forecasts",
    "build_forecasts",
    "forecast",
    "perturb",
    "perturb_temperatures",
]
