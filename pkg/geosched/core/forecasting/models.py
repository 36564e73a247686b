"""
Data models for geotemporal forecasting.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass, field
from datetime import datetime, timedelta
from functools import cached_property
from typing import Any, Mapping, Optional

from geosched.constants import (
    DEFAULT_HOLT_ALPHA,
    DEFAULT_HOLT_BETA,
    DEFAULT_SMA_K,
    DEFAULT_STEP,
    DEFAULT_WINDOW_LENGTH,
    ERROR_LEVELS,
    FORECAST_METHODS,
    FORECAST_MODE_ORACLE,
    SUPPORTED_FORECAST_MODES,
)
from geosched.core.geotraces.models import GeoTrace
from geosched.core.model.timeseries import date_index


@dataclass(frozen=True)
class ForecastWindow:
    """
    The future steps a schedule is planned over.

    Attributes:
        start: First timestamp of the window (the current step).
        length: Number of steps.
        step: Spacing between timestamps.
    """

    start: datetime
    length: int = DEFAULT_WINDOW_LENGTH
    step: timedelta = DEFAULT_STEP

    def __post_init__(self) -> None:
        if self.length < 1:
            raise ValueError(f"Forecast window length must be >= 1, got {self.length}")
        if self.step <= timedelta(0):
            raise ValueError(f"Forecast window step must be positive, got {self.step}")

    @cached_property
    def index(self) -> tuple[datetime, ...]:
        """Timestamps of the window."""
        return date_index(self.start, self.length, self.step)

    @property
    def end(self) -> datetime:
        """Last timestamp of the window."""
        return self.start + (self.length - 1) * self.step

    def __len__(self) -> int:
        return self.length

    def shifted(self, steps: int = 1) -> ForecastWindow:
        """The window moved ``steps`` steps forward."""
        return ForecastWindow(self.start + steps * self.step, self.length, self.step)

    def clipped(self, last: datetime) -> ForecastWindow:
        """The window shortened so that it ends no later than ``last``."""
        available = int((last - self.start) / self.step) + 1
        return ForecastWindow(self.start, max(1, min(self.length, available)), self.step)

    def to_dict(self) -> dict[str, Any]:
        return {
            "start": self.start.isoformat(),
            "length": self.length,
            "step_hours": self.step / timedelta(hours=1),
        }


@dataclass(frozen=True)
class ErrorModel:
    """
    Forecast error injected into ground truth.

    Prices are multiplied by max(0, 1 + N(0, sigma)); temperatures get
    additive N(0, temperature_sigma) noise in °C.

    Attributes:
        sigma: Relative std-dev of the price noise.
        seed: Base seed of the noise streams.
        temperature_sigma: Std-dev of the temperature noise in °C.
    """

    sigma: float = 0.0
    seed: int = 0
    temperature_sigma: float = 0.0

    def __post_init__(self) -> None:
        if self.sigma < 0:
            raise ValueError(f"Error sigma must be non-negative, got {self.sigma}")
        if self.temperature_sigma < 0:
            raise ValueError(
                f"Temperature sigma must be non-negative, got {self.temperature_sigma}"
            )

    @classmethod
    def from_level(cls, level: str, seed: int = 0) -> ErrorModel:
        """
        Build an error model from a named preset.

        Raises:
            ValueError: If the level is not one of ERROR_LEVELS.
        """
        try:
            sigma, temperature_sigma = ERROR_LEVELS[level]
        except KeyError:
            raise ValueError(
                f"Unknown error level {level!r}; expected one of {', '.join(ERROR_LEVELS)}"
            ) from None
        return cls(sigma, seed, temperature_sigma)

    @property
    def is_perfect(self) -> bool:
        """True when forecasts equal ground truth."""
        return self.sigma == 0 and self.temperature_sigma == 0


@dataclass(frozen=True)
class ForecastSettings:
    """
    How controllers get their view of the future.

    Attributes:
        window: Forecast window length in steps.
        mode: "oracle" (perturbed ground truth) or "method" (forecast
            from history).
        method: persistence, sma or double_exponential (mode "method").
        sma_k: Number of values averaged by sma.
        alpha: Level smoothing of double_exponential.
        beta: Trend smoothing of double_exponential.
        sigma: Price error; None takes it from ``level``.
        temperature_sigma: Temperature error in °C; None takes it from ``level``.
        level: Optional ERROR_LEVELS preset.
    """

    window: int = DEFAULT_WINDOW_LENGTH
    mode: str = FORECAST_MODE_ORACLE
    method: str = "persistence"
    sma_k: int = DEFAULT_SMA_K
    alpha: float = DEFAULT_HOLT_ALPHA
    beta: float = DEFAULT_HOLT_BETA
    sigma: Optional[float] = None
    temperature_sigma: Optional[float] = None
    level: Optional[str] = None

    def __post_init__(self) -> None:
        if self.window < 1:
            raise ValueError(f"window must be >= 1, got {self.window}")
        if self.mode not in SUPPORTED_FORECAST_MODES:
            raise ValueError(
                f"mode must be one of {', '.join(SUPPORTED_FORECAST_MODES)}, got {self.mode!r}"
            )
        if self.method not in FORECAST_METHODS:
            raise ValueError(
                f"method must be one of {', '.join(FORECAST_METHODS)}, got {self.method!r}"
            )
        if self.sma_k < 1:
            raise ValueError(f"sma_k must be >= 1, got {self.sma_k}")
        if not (0 <= self.alpha <= 1 and 0 <= self.beta <= 1):
            raise ValueError("alpha and beta must be in [0, 1]")
        if self.level is not None and self.level not in ERROR_LEVELS:
            raise ValueError(
                f"level must be one of {', '.join(ERROR_LEVELS)}, got {self.level!r}"
            )

    def error_model(self, seed: int) -> ErrorModel:
        """Resolve the error model; explicit sigmas win over the level preset."""
        level_sigma, level_temperature = ERROR_LEVELS.get(self.level or "none", (0.0, 0.0))
        return ErrorModel(
            sigma=level_sigma if self.sigma is None else self.sigma,
            seed=seed,
            temperature_sigma=(
                level_temperature if self.temperature_sigma is None else self.temperature_sigma
            ),
        )

    def to_dict(self) -> dict[str, Any]:
        return asdict(self)


@dataclass(frozen=True)
class Forecasts:
    """
    Controller-visible traces over one forecast window.

    Attributes:
        window: The forecast window.
        traces: Trace key -> GeoTrace indexed exactly over the window.
    """

    window: ForecastWindow
    traces: Mapping[str, GeoTrace] = field(default_factory=dict)

    def __post_init__(self) -> None:
        index = self.window.index
        for key, trace in self.traces.items():
            if trace.index != index:
                raise ValueError(f"Forecast for {key} is not indexed over the window")
        object.__setattr__(self, "traces", dict(self.traces))

    @property
    def index(self) -> tuple[datetime, ...]:
        return self.window.index
