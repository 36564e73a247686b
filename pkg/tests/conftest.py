"""
Pytest configuration and fixtures for geosched tests.

This module provides common fixtures used across the test suite,
including small inventories, flat traces and settings isolation.
"""

from __future__ import annotations

from datetime import datetime, timedelta
from pathlib import Path
from typing import Optional, Sequence

import pytest

import geosched.config
from geosched.config import reload_config
from geosched.core.forecasting import ForecastWindow, Forecasts
from geosched.core.geotraces import GeoTrace
from geosched.core.model import (
    CloudState,
    Inventory,
    PhysicalMachine,
    TimeSeries,
    VirtualMachine,
    date_index,
)

START = datetime(2015, 1, 1)
HOUR = timedelta(hours=1)


def make_pm(
    pm_id: str,
    location: str = "a",
    cpu: float = 8.0,
    ram: float = 16.0,
    power_idle: float = 100.0,
    power_peak: float = 200.0,
) -> PhysicalMachine:
    """A PM with (cpu, ram) capacity."""
    return PhysicalMachine(pm_id, (cpu, ram), location, power_idle, power_peak)


def make_vm(vm_id: str, cpu: float = 1.0, ram: float = 2.0) -> VirtualMachine:
    return VirtualMachine(vm_id, (cpu, ram))


def flat_trace(
    key: str,
    length: int,
    price: float = 0.10,
    temperature: float = -3.9,
    start: datetime = START,
) -> GeoTrace:
    """A trace with constant price and temperature."""
    index = date_index(start, length, HOUR)
    return GeoTrace(
        key,
        TimeSeries(index, tuple(price for _ in index), HOUR),
        TimeSeries(index, tuple(temperature for _ in index), HOUR),
    )


def series_trace(
    key: str,
    prices: Sequence[float],
    temperatures: Optional[Sequence[float]] = None,
    start: datetime = START,
) -> GeoTrace:
    """A trace with the given prices; temperatures default to free cooling."""
    index = date_index(start, len(prices), HOUR)
    temps = temperatures if temperatures is not None else [-3.9] * len(prices)
    return GeoTrace(
        key,
        TimeSeries(index, tuple(float(p) for p in prices), HOUR),
        TimeSeries(index, tuple(float(t) for t in temps), HOUR),
    )


def window_forecasts(traces: dict[str, GeoTrace], length: int, start: datetime = START) -> Forecasts:
    """Forecasts equal to the traces over a window of ``length`` steps."""
    window = ForecastWindow(start, length, HOUR)
    return Forecasts(window, {k: t.window(start, length) for k, t in traces.items()})


@pytest.fixture(autouse=True)
def isolated_settings(tmp_path: Path, monkeypatch: pytest.MonkeyPatch):
    """Keep tests away from the user's settings file and report directory."""
    monkeypatch.setenv("GEOSCHED_THREADS", "2")
    monkeypatch.setenv("GEOSCHED_OUTPUT_DIR", str(tmp_path / "reports"))
    monkeypatch.delenv("GEOSCHED_LOG_LEVEL", raising=False)
    reload_config(tmp_path / "missing-settings.json")
    yield
    geosched.config._config = None


@pytest.fixture
def two_pm_inventory() -> Inventory:
    """Two (8 cpu, 16 GB) PMs in locations a and b, with a small VM catalog."""
    pms = (make_pm("pm1", "a"), make_pm("pm2", "b"))
    vms = {vm.id: vm for vm in (make_vm("vm1"), make_vm("vm2"), make_vm("vm3", 4.0, 4.0))}
    return Inventory(pms, vms)


@pytest.fixture
def empty_state(two_pm_inventory: Inventory) -> CloudState:
    return CloudState.empty(two_pm_inventory, START)


@pytest.fixture
def flat_traces() -> dict[str, GeoTrace]:
    """Equal flat traces for locations a and b over two days."""
    return {"a": flat_trace("a", 48), "b": flat_trace("b", 48)}
