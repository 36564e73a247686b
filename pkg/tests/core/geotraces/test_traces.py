"""Tests for geotemporal traces: pPUE, synthesis and CSV files."""

import hashlib
from pathlib import Path

import numpy as np
import pytest
from scipy import stats

from geosched.core.geotraces import (
    PPueModel,
    TraceParams,
    load_traces,
    synthesize_traces,
    write_traces,
)
from geosched.core.geotraces.synthetic import _ar1
from geosched.exceptions import TraceFormatError, TraceGapError, TraceOrderError
from tests.conftest import START, flat_trace

HEADER = "timestamp,location,price_usd_per_kwh,temperature_c\n"


def write_csv(path: Path, rows: list[str]) -> Path:
    path.write_text(HEADER + "".join(row + "\n" for row in rows), encoding="utf-8")
    return path


class TestPPueModel:
    """Tests for the piecewise-linear pPUE model."""

    @pytest.fixture
    def model(self) -> PPueModel:
        return PPueModel()

    @pytest.mark.parametrize(
        "temperature, expected",
        [(-3.9, 1.05), (15.6, 1.17), (5.85, 1.11), (40.0, 1.30), (-30.0, 1.05)],
    )
    def test_anchor_values(self, model: PPueModel, temperature: float, expected: float) -> None:
        """Should hit the anchors and interpolate between them."""
        assert model.ppue(temperature) == pytest.approx(expected, abs=1e-12)

    def test_monotone(self, model: PPueModel) -> None:
        """pPUE should never decrease with temperature."""
        temperatures = np.linspace(-40.0, 50.0, 10_000)
        values = model.ppue(temperatures)
        assert np.all(np.diff(values) >= 0)
        assert values.min() >= 1.0

    def test_scalar_returns_float(self, model: PPueModel) -> None:
        assert isinstance(model.ppue(10.0), float)

    def test_rejects_unsorted_anchors(self) -> None:
        with pytest.raises(ValueError):
            PPueModel(anchors=((10.0, 1.1), (0.0, 1.05)))

    def test_rejects_below_one(self) -> None:
        """pPUE below 1.0 is impossible."""
        with pytest.raises(ValueError):
            PPueModel(anchors=((0.0, 0.9),))


class TestSynthesizeTraces:
    """Tests for synthesize_traces."""

    def test_same_seed_same_traces(self) -> None:
        assert synthesize_traces(5, 3, 48) == synthesize_traces(5, 3, 48)

    def test_different_seed_differs(self) -> None:
        assert synthesize_traces(5, 2, 48) != synthesize_traces(6, 2, 48)

    def test_shape(self) -> None:
        """Should give one trace per location over the horizon."""
        traces = synthesize_traces(1, 3, 24)
        assert list(traces) == ["loc0", "loc1", "loc2"]
        assert all(len(t) == 24 for t in traces.values())
        assert traces["loc0"].index[0] == START

    def test_pure_sinusoid_without_noise(self) -> None:
        """Zero price noise should give the bare daily cycle."""
        params = TraceParams(price_noise=0.0)
        trace = synthesize_traces(1, 1, 48, params)["loc0"]
        hours = np.arange(48)
        expected = params.base_price + params.price_amplitude * np.sin(2 * np.pi * hours / 24)
        assert np.allclose(trace.prices.to_numpy(), expected, atol=1e-12)

    def test_two_locations_anti_correlated(self) -> None:
        """Prices half a period apart should be strongly negatively correlated."""
        traces = synthesize_traces(11, 2, 24 * 28)
        a = traces["loc0"].prices.to_numpy()
        b = traces["loc1"].prices.to_numpy()
        rho, _ = stats.pearsonr(a, b)
        assert rho < -0.8

    def test_ar1_follows_recursion(self) -> None:
        """Price noise should satisfy x[t] = phi * x[t-1] + shock[t]."""
        phi, sigma = 0.8, 0.5
        noise = _ar1(np.random.default_rng(5), 50, phi, sigma)
        shocks = np.random.default_rng(5).standard_normal(50) * sigma
        assert noise[0] == pytest.approx(shocks[0] / np.sqrt(1.0 - phi**2))
        assert np.allclose(noise[1:], phi * noise[:-1] + shocks[1:], atol=1e-12)

    def test_ar1_stationary_spread(self) -> None:
        phi, sigma = 0.8, 1.0
        noise = _ar1(np.random.default_rng(9), 20_000, phi, sigma)
        assert noise.std() == pytest.approx(sigma / np.sqrt(1.0 - phi**2), rel=0.05)

    def test_prices_non_negative(self) -> None:
        params = TraceParams(base_price=0.01, price_amplitude=0.05)
        traces = synthesize_traces(2, 2, 96, params)
        assert all(min(t.prices.values) >= 0 for t in traces.values())

    def test_custom_names(self) -> None:
        params = TraceParams(location_names=("north", "south"))
        assert list(synthesize_traces(0, 2, 4, params)) == ["north", "south"]

    def test_name_count_mismatch(self) -> None:
        with pytest.raises(ValueError):
            synthesize_traces(0, 3, 4, TraceParams(location_names=("north", "south")))

    def test_zero_locations_rejected(self) -> None:
        with pytest.raises(ValueError):
            synthesize_traces(0, 0, 4)


class TestTraceFiles:
    """Tests for load_traces and write_traces."""

    def test_load_two_locations(self, tmp_path: Path) -> None:
        """A 2-location file with 3 rows each should give two traces of length 3."""
        rows = [
            f"2015-01-01T0{h}:00:00,{loc},0.1{h},{h}.5"
            for h in range(3)
            for loc in ("east", "west")
        ]
        traces = load_traces(write_csv(tmp_path / "t.csv", rows))
        assert list(traces) == ["east", "west"]
        assert len(traces["east"]) == 3
        assert traces["west"].prices.values == (0.10, 0.11, 0.12)
        assert traces["west"].temperatures.values == (0.5, 1.5, 2.5)

    def test_negative_price(self, tmp_path: Path) -> None:
        """A negative price should raise TraceFormatError."""
        path = write_csv(tmp_path / "t.csv", ["2015-01-01T00:00:00,east,-0.1,5"])
        with pytest.raises(TraceFormatError):
            load_traces(path)

    def test_non_monotone_timestamps(self, tmp_path: Path) -> None:
        """Timestamps out of order should raise TraceOrderError."""
        rows = [
            "2015-01-01T00:00:00,east,0.1,5",
            "2015-01-01T02:00:00,east,0.1,5",
            "2015-01-01T01:00:00,east,0.1,5",
        ]
        with pytest.raises(TraceOrderError):
            load_traces(write_csv(tmp_path / "t.csv", rows))

    def test_gap(self, tmp_path: Path) -> None:
        """Non-uniform spacing should raise TraceGapError."""
        rows = [
            "2015-01-01T00:00:00,east,0.1,5",
            "2015-01-01T01:00:00,east,0.1,5",
            "2015-01-01T03:00:00,east,0.1,5",
        ]
        with pytest.raises(TraceGapError):
            load_traces(write_csv(tmp_path / "t.csv", rows))

    def test_missing_column(self, tmp_path: Path) -> None:
        path = tmp_path / "t.csv"
        path.write_text("timestamp,location\n2015-01-01T00:00:00,east\n", encoding="utf-8")
        with pytest.raises(TraceFormatError):
            load_traces(path)

    def test_bad_number_reports_row(self, tmp_path: Path) -> None:
        """A bad value should name the row it is on."""
        rows = ["2015-01-01T00:00:00,east,0.1,5", "2015-01-01T01:00:00,east,abc,5"]
        with pytest.raises(TraceFormatError) as exc_info:
            load_traces(write_csv(tmp_path / "t.csv", rows))
        assert exc_info.value.row == 3

    def test_missing_file(self, tmp_path: Path) -> None:
        with pytest.raises(TraceFormatError):
            load_traces(tmp_path / "nope.csv")

    def test_round_trip(self, tmp_path: Path) -> None:
        """Written traces should load back identical."""
        traces = synthesize_traces(3, 2, 30)
        path = write_traces(traces, tmp_path / "traces.csv")
        assert load_traces(path) == traces

    def test_same_seed_same_file(self, tmp_path: Path) -> None:
        """The same traces should always give the same bytes."""
        first = write_traces(synthesize_traces(9, 2, 24), tmp_path / "a.csv")
        second = write_traces(synthesize_traces(9, 2, 24), tmp_path / "b.csv")
        digest = lambda p: hashlib.sha256(p.read_bytes()).hexdigest()  # noqa: E731
        assert digest(first) == digest(second)

    def test_window_gap(self) -> None:
        """A window past the end of a trace should raise TraceGapError."""
        with pytest.raises(TraceGapError):
            flat_trace("a", 4).window(START, 5)
