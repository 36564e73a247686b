"""
Scenario definition.

A scenario is one TOML file describing everything a run depends on:
horizon, locations and their machines, workload, forecasts, cooling,
fitness weights, controller parameters and the seed. Every table maps to
a frozen dataclass; unknown keys and bad values raise ConfigError with
the dotted key path and, when the file is known, the line number.

Example scenario::

    seed = 1
    controller = "ga"
    horizon = 168

    [[locations]]
    id = "north"
    pms = 10

    [ga]
    gen = 20
"""

from __future__ import annotations

import dataclasses
import logging
import re
import sys
import types
from dataclasses import dataclass, field, fields, replace
from datetime import datetime, timedelta
from importlib import resources
from pathlib import Path
from typing import Any, Iterable, Mapping, Optional, Union, get_args, get_origin, get_type_hints

from geosched.config import parse_scalar
from geosched.constants import (
    CONTROLLER_GA,
    DEFAULT_START,
    DEFAULT_HORIZON_HOURS,
    SUPPORTED_CONTROLLERS,
)
from geosched.core.baselines.oracle import OracleLimits
from geosched.core.fitness.models import FitnessWeights
from geosched.core.forecasting.models import ErrorModel, ForecastSettings
from geosched.core.geotraces.cooling import PPueModel
from geosched.core.geotraces.synthetic import TraceParams
from geosched.core.model.cloud import Inventory, Location, PhysicalMachine
from geosched.core.model.timeseries import date_index
from geosched.core.scheduler.models import GAConfig
from geosched.core.simulation.workload import WorkloadParams
from geosched.exceptions import ConfigError, ScenarioError

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

logger = logging.getLogger(__name__)

BUNDLED_PACKAGE = "geosched.scenarios"

# Keys that are derived at run time and cannot be set from a file
_DERIVED_KEYS: dict[type, set[str]] = {
    GAConfig: {"seed"},
    TraceParams: {"location_names"},
}


@dataclass(frozen=True)
class TraceSettings:
    """
    Where the ground-truth traces come from.

    Attributes:
        path: CSV file to load; synthetic traces are generated when unset.
        seed: Seed of the synthetic traces; defaults to the scenario seed.
        synthetic: Shape of the synthetic traces.
    """

    path: Optional[str] = None
    seed: Optional[int] = None
    synthetic: TraceParams = field(default_factory=TraceParams)


@dataclass(frozen=True)
class LocationSpec:
    """
    One data center location and its identical PMs.

    Attributes:
        id: Location id.
        pms: Number of PMs.
        cpu: CPU capacity of each PM.
        ram: RAM capacity of each PM.
        power_idle: Idle power draw in W.
        power_peak: Power draw at full utilisation in W.
        price_trace: Trace key for prices; defaults to ``id``.
        temperature_trace: Trace key for temperatures; defaults to ``id``.
    """

    id: str
    pms: int = 1
    cpu: float = 16.0
    ram: float = 32.0
    power_idle: float = 100.0
    power_peak: float = 200.0
    price_trace: Optional[str] = None
    temperature_trace: Optional[str] = None

    def __post_init__(self) -> None:
        if not self.id:
            raise ValueError("Location id must not be empty")
        if self.pms < 0:
            raise ValueError(f"pms must be >= 0, got {self.pms}")

    def location(self) -> Location:
        return Location(self.id, self.price_trace or self.id, self.temperature_trace or self.id)

    def machines(self) -> list[PhysicalMachine]:
        return [
            PhysicalMachine(
                f"{self.id}-pm{j:03d}",
                (float(self.cpu), float(self.ram)),
                self.id,
                float(self.power_idle),
                float(self.power_peak),
            )
            for j in range(self.pms)
        ]


@dataclass(frozen=True)
class Scenario:
    """
    Everything a simulation run depends on.

    Attributes:
        seed: Base seed for workload, traces, forecast noise and the GA.
        controller: ga, bfd or brute.
        horizon: Simulated hours.
        step_hours: Length of one step in hours.
        start: Timestamp of the first step.
        traces: Ground-truth trace source.
        locations: Data center locations with their PMs.
        workload: Synthetic workload parameters.
        forecast: Forecast window, mode and error.
        cooling: pPUE model.
        weights: Fitness weights.
        ga: GA parameters; the seed comes from ``seed``.
        oracle: Exhaustive search limits.
    """

    seed: int = 0
    controller: str = CONTROLLER_GA
    horizon: int = DEFAULT_HORIZON_HOURS
    step_hours: float = 1.0
    start: datetime = DEFAULT_START
    traces: TraceSettings = field(default_factory=TraceSettings)
    locations: tuple[LocationSpec, ...] = ()
    workload: WorkloadParams = field(default_factory=WorkloadParams)
    forecast: ForecastSettings = field(default_factory=ForecastSettings)
    cooling: PPueModel = field(default_factory=PPueModel)
    weights: FitnessWeights = field(default_factory=FitnessWeights)
    ga: GAConfig = field(default_factory=GAConfig)
    oracle: OracleLimits = field(default_factory=OracleLimits)

    def __post_init__(self) -> None:
        object.__setattr__(self, "locations", tuple(self.locations))
        if self.controller not in SUPPORTED_CONTROLLERS:
            raise ValueError(
                f"controller must be one of {', '.join(SUPPORTED_CONTROLLERS)}, "
                f"got {self.controller!r}"
            )
        if self.horizon <= 0:
            raise ValueError(f"horizon must be > 0, got {self.horizon}")
        if self.step_hours <= 0:
            raise ValueError(f"step_hours must be > 0, got {self.step_hours}")
        steps = self.horizon / self.step_hours
        if abs(steps - round(steps)) > 1e-9:
            raise ValueError(
                f"horizon {self.horizon} h is not a multiple of the {self.step_hours} h step"
            )
        if not self.locations or sum(loc.pms for loc in self.locations) == 0:
            raise ValueError("The inventory must contain at least one PM")
        ids = [loc.id for loc in self.locations]
        if len(set(ids)) != len(ids):
            raise ValueError(f"Duplicate location ids: {ids}")

    # ------------------------------------------------------------------
    # Derived values
    # ------------------------------------------------------------------

    @property
    def steps(self) -> int:
        return int(round(self.horizon / self.step_hours))

    @property
    def step(self) -> timedelta:
        return timedelta(hours=self.step_hours)

    @property
    def index(self) -> tuple[datetime, ...]:
        return date_index(self.start, self.steps, self.step)

    @property
    def trace_keys(self) -> tuple[str, ...]:
        """Trace keys referenced by the locations, in location order."""
        keys: dict[str, None] = {}
        for spec in self.locations:
            location = spec.location()
            keys.setdefault(location.price_trace_key)
            keys.setdefault(location.temperature_trace_key)
        return tuple(keys)

    def inventory(self) -> Inventory:
        """PMs and locations; VMs are added by the workload."""
        pms = tuple(pm for spec in self.locations for pm in spec.machines())
        locations = {spec.id: spec.location() for spec in self.locations}
        return Inventory(pms, {}, locations)

    def error_model(self) -> ErrorModel:
        return self.forecast.error_model(self.seed)

    def ga_config(self) -> GAConfig:
        return replace(self.ga, seed=self.seed)

    # ------------------------------------------------------------------
    # Loading and serialization
    # ------------------------------------------------------------------

    @classmethod
    def from_dict(cls, data: Mapping[str, Any], source: Optional[str] = None) -> Scenario:
        """
        Build a scenario from parsed TOML.

        Args:
            data: Parsed tables.
            source: TOML text the data came from, for line numbers.

        Raises:
            ConfigError: On unknown keys, type mismatches or invalid values.
        """
        return _build(cls, data, "", _Source(source))

    @classmethod
    def load(cls, path: Union[str, Path]) -> Scenario:
        """
        Load a scenario from a TOML file.

        A relative ``traces.path`` is resolved against the file's directory.

        Raises:
            ScenarioError: If the file cannot be read.
            ConfigError: If the file is not valid TOML or not a valid scenario.
        """
        path = Path(path)
        try:
            text = path.read_text(encoding="utf-8")
        except OSError as e:
            raise ScenarioError(f"Cannot read scenario {path}", str(e)) from e
        try:
            data = tomllib.loads(text)
        except tomllib.TOMLDecodeError as e:
            match = re.search(r"line (\d+)", str(e))
            raise ConfigError(str(path), str(e), int(match.group(1)) if match else None) from e

        traces = data.get("traces")
        if isinstance(traces, dict) and isinstance(traces.get("path"), str):
            trace_path = Path(traces["path"])
            if not trace_path.is_absolute():
                traces["path"] = str((path.parent / trace_path).resolve())

        scenario = cls.from_dict(data, text)
        logger.info(f"Loaded scenario {path} ({scenario.steps} steps, controller {scenario.controller})")
        return scenario

    def to_dict(self) -> dict[str, Any]:
        """The fully resolved scenario; ``from_dict`` accepts it back."""
        return _plain(self)

    def with_overrides(self, overrides: Iterable[str]) -> Scenario:
        """
        Apply ``KEY=VALUE`` overrides with dotted key paths.

        Example:
            scenario.with_overrides(["ga.gen=50", "locations.0.pms=4"])

        Raises:
            ConfigError: On malformed overrides, unknown keys or bad values.
        """
        data = self.to_dict()
        for override in overrides:
            key_path, sep, raw = override.partition("=")
            key_path = key_path.strip()
            if not sep or not key_path:
                raise ConfigError(override, "expected KEY=VALUE")
            _set_path(data, key_path, parse_scalar(raw.strip()))
        return Scenario.from_dict(data)


# ----------------------------------------------------------------------------
# Bundled scenarios
# ----------------------------------------------------------------------------


def bundled_scenarios() -> list[str]:
    """Names of the scenarios shipped with the package."""
    root = resources.files(BUNDLED_PACKAGE)
    return sorted(p.name[: -len(".toml")] for p in root.iterdir() if p.name.endswith(".toml"))


def load_scenario(name_or_path: Union[str, Path]) -> Scenario:
    """
    Load a scenario file, or a bundled scenario by name.

    Raises:
        ScenarioError: If neither a file nor a bundled scenario matches.
    """
    path = Path(name_or_path)
    if path.exists():
        return Scenario.load(path)
    name = str(name_or_path)
    if name in bundled_scenarios():
        with resources.as_file(resources.files(BUNDLED_PACKAGE) / f"{name}.toml") as bundled:
            return Scenario.load(bundled)
    raise ScenarioError(
        f"Scenario not found: {name_or_path}",
        f"bundled scenarios: {', '.join(bundled_scenarios())}",
    )


# ----------------------------------------------------------------------------
# Generic table <-> dataclass conversion
# ----------------------------------------------------------------------------


class _Source:
    """Finds the line of a dotted key path in TOML text."""

    _HEADER = re.compile(r"^\s*(\[\[?)\s*([A-Za-z0-9_.\-\"]+)\s*\]\]?")
    _KEY = re.compile(r"^\s*([A-Za-z0-9_.\-\"]+)\s*=")

    def __init__(self, text: Optional[str]):
        self.lines: dict[str, int] = {}
        if text:
            self._scan(text)

    def _scan(self, text: str) -> None:
        table: list[str] = []
        arrays: dict[str, int] = {}
        for lineno, raw in enumerate(text.splitlines(), start=1):
            header = self._HEADER.match(raw)
            if header:
                name = header.group(2).replace('"', "")
                if header.group(1) == "[[":
                    arrays[name] = arrays.get(name, -1) + 1
                    table = name.split(".") + [str(arrays[name])]
                else:
                    parent, _, leaf = name.rpartition(".")
                    table = (
                        parent.split(".") + [str(arrays[parent]), leaf]
                        if parent in arrays
                        else name.split(".")
                    )
                self.lines.setdefault(".".join(table), lineno)
                continue
            key = self._KEY.match(raw)
            if key:
                path = ".".join(table + key.group(1).replace('"', "").split("."))
                self.lines.setdefault(path, lineno)

    def line(self, key_path: str) -> Optional[int]:
        """Line of ``key_path``, or of its closest enclosing table."""
        parts = key_path.split(".") if key_path else []
        while parts:
            found = self.lines.get(".".join(parts))
            if found is not None:
                return found
            parts.pop()
        return None


def _join(path: str, key: Any) -> str:
    return f"{path}.{key}" if path else str(key)


def _settable(cls: type) -> list[str]:
    derived = _DERIVED_KEYS.get(cls, set())
    return [
        f.name for f in fields(cls) if f.init and not f.name.startswith("_") and f.name not in derived
    ]


def _build(cls: type, data: Any, path: str, source: _Source) -> Any:
    if not isinstance(data, Mapping):
        raise ConfigError(path or "<root>", "expected a table", source.line(path))
    names = _settable(cls)
    hints = get_type_hints(cls)
    for key in data:
        if key not in names:
            raise ConfigError(_join(path, key), "unknown key", source.line(_join(path, key)))
    kwargs = {
        key: _coerce(value, hints[key], _join(path, key), source) for key, value in data.items()
    }
    try:
        return cls(**kwargs)
    except (TypeError, ValueError) as e:
        raise ConfigError(path or "<root>", str(e), source.line(path)) from e


def _mismatch(path: str, expected: str, value: Any, source: _Source) -> ConfigError:
    return ConfigError(
        path, f"expected {expected}, got {type(value).__name__} {value!r}", source.line(path)
    )


def _coerce(value: Any, hint: Any, path: str, source: _Source) -> Any:
    origin = get_origin(hint)
    args = get_args(hint)

    if origin is Union or (hasattr(types, "UnionType") and origin is types.UnionType):
        inner = [a for a in args if a is not type(None)]
        return _coerce(value, inner[0], path, source)

    if dataclasses.is_dataclass(hint):
        return _build(hint, value, path, source)

    if origin is tuple:
        if not isinstance(value, (list, tuple)):
            raise _mismatch(path, "an array", value, source)
        if len(args) == 2 and args[1] is Ellipsis:
            return tuple(
                _coerce(item, args[0], _join(path, i), source) for i, item in enumerate(value)
            )
        if len(args) != len(value):
            raise ConfigError(path, f"expected {len(args)} values, got {len(value)}", source.line(path))
        return tuple(
            _coerce(item, arg, _join(path, i), source) for i, (item, arg) in enumerate(zip(value, args))
        )

    if hint is bool:
        if not isinstance(value, bool):
            raise _mismatch(path, "a boolean", value, source)
        return value
    if hint is int:
        if isinstance(value, bool) or not isinstance(value, int):
            raise _mismatch(path, "an integer", value, source)
        return value
    if hint is float:
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise _mismatch(path, "a number", value, source)
        return float(value)
    if hint is str:
        if not isinstance(value, str):
            raise _mismatch(path, "a string", value, source)
        return value
    if hint is datetime:
        if isinstance(value, datetime):
            return value
        if isinstance(value, str):
            try:
                return datetime.fromisoformat(value)
            except ValueError:
                pass
        raise _mismatch(path, "an ISO 8601 date-time", value, source)
    return value


def _plain(value: Any) -> Any:
    """Dataclass tree to TOML-compatible dicts; None values are dropped."""
    if dataclasses.is_dataclass(value) and not isinstance(value, type):
        out: dict[str, Any] = {}
        for name in _settable(type(value)):
            item = getattr(value, name)
            if item is not None:
                out[name] = _plain(item)
        return out
    if isinstance(value, (list, tuple)):
        return [_plain(item) for item in value]
    if isinstance(value, datetime):
        return value.isoformat()
    return value


def _set_path(data: dict[str, Any], key_path: str, value: Any) -> None:
    parts = key_path.split(".")
    node: Any = data
    for depth, part in enumerate(parts[:-1]):
        here = ".".join(parts[: depth + 1])
        if isinstance(node, list):
            if not part.isdigit() or int(part) >= len(node):
                raise ConfigError(here, f"no element {part} (have {len(node)})")
            node = node[int(part)]
        elif isinstance(node, dict):
            node = node.setdefault(part, {})
        else:
            raise ConfigError(here, "not a table")
    last = parts[-1]
    if isinstance(node, list):
        if not last.isdigit() or int(last) >= len(node):
            raise ConfigError(key_path, f"no element {last} (have {len(node)})")
        node[int(last)] = value
    elif isinstance(node, dict):
        node[last] = value
    else:
        raise ConfigError(key_path, "not a table")
