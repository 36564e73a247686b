"""Tests for forecasts and forecast error injection."""

import numpy as np
import pytest

from geosched.core.forecasting import (
    ErrorModel,
    ForecastSettings,
    ForecastWindow,
    build_forecasts,
    forecast,
    perturb,
    perturb_temperatures,
)
from geosched.core.model import TimeSeries
from geosched.exceptions import ForecastError, TraceGapError
from tests.conftest import HOUR, START, flat_trace, series_trace


def history_of(values: list[float]) -> TimeSeries[float]:
    return TimeSeries.from_values(START, values, HOUR)


def window_after(history: TimeSeries[float], length: int) -> ForecastWindow:
    return ForecastWindow(history.end + HOUR, length, HOUR)


class TestForecastWindow:
    """Tests for ForecastWindow."""

    def test_index(self) -> None:
        window = ForecastWindow(START, 3, HOUR)
        assert window.index == (START, START + HOUR, START + 2 * HOUR)
        assert window.end == START + 2 * HOUR

    def test_shifted(self) -> None:
        assert ForecastWindow(START, 3, HOUR).shifted(2).start == START + 2 * HOUR

    def test_clipped(self) -> None:
        """A window near the end of the horizon should shrink."""
        window = ForecastWindow(START, 12, HOUR).clipped(START + 4 * HOUR)
        assert window.length == 5

    def test_rejects_empty(self) -> None:
        with pytest.raises(ValueError):
            ForecastWindow(START, 0, HOUR)


class TestForecastMethods:
    """Tests for forecast."""

    def test_persistence_on_constant(self) -> None:
        """Persistence on a constant series should forecast the constant."""
        history = history_of([0.2] * 5)
        predicted = forecast(history, window_after(history, 4), "persistence")
        assert predicted.values == (0.2, 0.2, 0.2, 0.2)

    def test_sma(self) -> None:
        """sma(2) over [1, 3] should forecast 2."""
        history = history_of([1.0, 3.0])
        predicted = forecast(history, window_after(history, 1), "sma", k=2)
        assert predicted.values == (2.0,)

    def test_sma_k_too_large(self) -> None:
        history = history_of([1.0, 3.0])
        with pytest.raises(ForecastError):
            forecast(history, window_after(history, 1), "sma", k=3)

    def test_double_exponential_continues_slope(self) -> None:
        """Holt's method on an exact ramp should keep the slope."""
        slope = 0.25
        history = history_of([1.0 + slope * i for i in range(10)])
        predicted = forecast(history, window_after(history, 5), "double_exponential")
        expected = [1.0 + slope * (10 + i) for i in range(5)]
        assert np.allclose(predicted.values, expected, atol=1e-9)

    def test_double_exponential_smoothing(self) -> None:
        """Level and trend updates on [1, 2, 4] with alpha = beta = 0.5."""
        history = history_of([1.0, 2.0, 4.0])
        predicted = forecast(
            history, window_after(history, 2), "double_exponential", alpha=0.5, beta=0.5
        )
        assert np.allclose(predicted.values, [4.75, 6.0], atol=1e-9)

    def test_double_exponential_short_history(self) -> None:
        """Two values extrapolate their difference; one value persists."""
        history = history_of([1.0, 2.0])
        predicted = forecast(history, window_after(history, 2), "double_exponential")
        assert np.allclose(predicted.values, [3.0, 4.0])
        single = history_of([0.3])
        assert forecast(single, window_after(single, 2), "double_exponential").values == (0.3, 0.3)

    def test_indexed_over_window(self) -> None:
        history = history_of([1.0, 2.0])
        window = window_after(history, 3)
        assert forecast(history, window).index == window.index

    def test_empty_history(self) -> None:
        with pytest.raises(ForecastError):
            forecast(TimeSeries((), ()), ForecastWindow(START, 1, HOUR))

    def test_misaligned_window(self) -> None:
        """The window must start right after the history."""
        history = history_of([1.0, 2.0])
        with pytest.raises(ForecastError):
            forecast(history, ForecastWindow(history.end + 2 * HOUR, 1, HOUR))

    def test_unknown_method(self) -> None:
        history = history_of([1.0])
        with pytest.raises(ForecastError):
            forecast(history, window_after(history, 1), "arima")


class TestErrorModel:
    """Tests for ErrorModel and perturb."""

    def test_sigma_zero_identity(self) -> None:
        actual = history_of([0.1, 0.2, 0.3])
        assert perturb(actual, ErrorModel(0.0)) == actual

    def test_reproducible(self) -> None:
        actual = history_of([0.1] * 50)
        model = ErrorModel(0.1, seed=4)
        assert perturb(actual, model) == perturb(actual, model)

    def test_relative_std(self) -> None:
        """sigma 0.05 over 10k samples should give a relative std near 0.05."""
        actual = history_of([1.0] * 10_000)
        noisy = perturb(actual, ErrorModel(0.05, seed=1)).to_numpy()
        assert 0.045 <= noisy.std() <= 0.055

    @pytest.mark.parametrize("sigma", [0.01, 0.05, 0.1, 0.3])
    def test_mean_absolute_percentage_error(self, sigma: float) -> None:
        """Over 10k samples the MAPE should be within 10% of sigma * sqrt(2 / pi)."""
        actual = history_of([0.1] * 10_000)
        noisy = perturb(actual, ErrorModel(sigma, seed=11)).to_numpy()
        mape = np.mean(np.abs(noisy - 0.1) / 0.1)
        expected = sigma * np.sqrt(2.0 / np.pi)
        assert abs(mape - expected) <= 0.1 * expected

    def test_non_negative(self) -> None:
        """Large errors should never make prices negative."""
        actual = history_of([0.1] * 1000)
        assert perturb(actual, ErrorModel(2.0, seed=3)).to_numpy().min() >= 0.0

    def test_temperature_noise_is_additive(self) -> None:
        actual = history_of([0.0] * 1000)
        noisy = perturb_temperatures(actual, ErrorModel(temperature_sigma=1.0, seed=2)).to_numpy()
        assert noisy.std() > 0.5

    def test_from_level(self) -> None:
        assert ErrorModel.from_level("none").is_perfect
        with pytest.raises(ValueError):
            ErrorModel.from_level("bogus")

    def test_negative_sigma(self) -> None:
        with pytest.raises(ValueError):
            ErrorModel(-0.1)


class TestBuildForecasts:
    """Tests for build_forecasts."""

    @pytest.fixture
    def traces(self) -> dict:
        return {
            "a": series_trace("a", [0.1 * (i + 1) for i in range(12)]),
            "b": flat_trace("b", 12, price=0.05),
        }

    def test_oracle_without_error_is_truth(self, traces: dict) -> None:
        window = ForecastWindow(START + HOUR, 4, HOUR)
        forecasts = build_forecasts(traces, window)
        assert forecasts.traces["a"] == traces["a"].window(window.start, 4)
        assert forecasts.index == window.index

    def test_oracle_noise_reproducible(self, traces: dict) -> None:
        """The same step key should give the same noise."""
        window = ForecastWindow(START, 4, HOUR)
        settings = ForecastSettings(window=4, sigma=0.2)
        error = settings.error_model(seed=7)
        first = build_forecasts(traces, window, settings, error, step_key=3)
        second = build_forecasts(traces, window, settings, error, step_key=3)
        other = build_forecasts(traces, window, settings, error, step_key=4)
        assert first == second
        assert first != other

    def test_keys(self, traces: dict) -> None:
        forecasts = build_forecasts(traces, ForecastWindow(START, 2, HOUR), keys=["b"])
        assert list(forecasts.traces) == ["b"]

    def test_missing_key(self, traces: dict) -> None:
        with pytest.raises(TraceGapError):
            build_forecasts(traces, ForecastWindow(START, 2, HOUR), keys=["c"])

    def test_window_past_traces(self, traces: dict) -> None:
        with pytest.raises(TraceGapError):
            build_forecasts(traces, ForecastWindow(START + 10 * HOUR, 4, HOUR))

    def test_method_mode_observes_current_step(self, traces: dict) -> None:
        """In method mode the first step is observed and the rest forecast."""
        settings = ForecastSettings(window=3, mode="method", method="persistence")
        window = ForecastWindow(START + 4 * HOUR, 3, HOUR)
        forecasts = build_forecasts(traces, window, settings)
        current = traces["a"].prices.at(window.start)
        assert forecasts.traces["a"].prices.values == (current, current, current)

    def test_method_mode_at_first_step(self, traces: dict) -> None:
        """sma early in a run should average whatever was observed."""
        settings = ForecastSettings(window=3, mode="method", method="sma", sma_k=5)
        forecasts = build_forecasts(traces, ForecastWindow(START, 3, HOUR), settings)
        assert forecasts.traces["a"].prices.values == pytest.approx((0.1, 0.1, 0.1))


class TestForecastSettings:
    """Tests for ForecastSettings."""

    def test_explicit_sigma_wins(self) -> None:
        settings = ForecastSettings(level="large", sigma=0.01)
        assert settings.error_model(seed=1).sigma == 0.01

    @pytest.mark.parametrize(
        "kwargs",
        [{"window": 0}, {"mode": "psychic"}, {"method": "arima"}, {"alpha": 2.0}, {"level": "x"}],
    )
    def test_invalid(self, kwargs: dict) -> None:
        with pytest.raises(ValueError):
            ForecastSettings(**kwargs)
