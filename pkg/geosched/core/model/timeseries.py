"""
Generic time series container.

A time series is a pair of an index (uniformly spaced timestamps) and one
value per timestamp. Values may be prices, temperatures, tuples of actions
or whole cloud states.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from datetime import datetime, timedelta
from typing import Any, Callable, Generic, Iterable, Iterator, Optional, Sequence, TypeVar

import numpy as np
import pandas as pd

from geosched.constants import DEFAULT_STEP

T = TypeVar("T")
U = TypeVar("U")


def date_index(start: datetime, periods: int, step: timedelta = DEFAULT_STEP) -> tuple[datetime, ...]:
    """Build ``periods`` uniformly spaced timestamps starting at ``start``."""
    if periods <= 0:
        return ()
    stamps = pd.date_range(start=start, periods=periods, freq=pd.Timedelta(step))
    return tuple(ts.to_pydatetime() for ts in stamps)


@dataclass(frozen=True)
class TimeSeries(Generic[T]):
    """
    Immutable time series ``{x_t: t in index}``.

    Attributes:
        index: Strictly increasing, uniformly spaced timestamps.
        values: One value per timestamp.
        step: Spacing between timestamps. Inferred from the index when
              omitted; defaults to one hour for series shorter than two.
    """

    index: tuple[datetime, ...]
    values: tuple[T, ...]
    step: Optional[timedelta] = None
    _positions: dict[datetime, int] = field(
        init=False, repr=False, compare=False, hash=False
    )

    def __post_init__(self) -> None:
        """Validate the index and freeze the containers."""
        index = tuple(self.index)
        values = tuple(self.values)
        if len(index) != len(values):
            raise ValueError(
                f"Index has {len(index)} timestamps but {len(values)} values"
            )

        step = self.step
        if step is None:
            step = index[1] - index[0] if len(index) >= 2 else DEFAULT_STEP
        if step <= timedelta(0):
            raise ValueError(f"Time series step must be positive, got {step}")

        for previous, current in zip(index, index[1:]):
            if current <= previous:
                raise ValueError(f"Index not strictly increasing at {current}")
            if current - previous != step:
                raise ValueError(
                    f"Index not uniformly spaced at {current}: "
                    f"expected step {step}, got {current - previous}"
                )

        object.__setattr__(self, "index", index)
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "step", step)
        object.__setattr__(self, "_positions", {ts: i for i, ts in enumerate(index)})

    @classmethod
    def from_values(
        cls,
        start: datetime,
        values: Iterable[T],
        step: timedelta = DEFAULT_STEP,
    ) -> TimeSeries[T]:
        """Create a series of ``values`` starting at ``start``."""
        values = tuple(values)
        return cls(date_index(start, len(values), step), values, step)

    @classmethod
    def constant(
        cls,
        index: Sequence[datetime],
        value: T,
        step: Optional[timedelta] = None,
    ) -> TimeSeries[T]:
        """Create a series holding ``value`` at every timestamp."""
        return cls(tuple(index), tuple(value for _ in index), step)

    def __len__(self) -> int:
        return len(self.index)

    def __iter__(self) -> Iterator[T]:
        return iter(self.values)

    def __getitem__(self, position: int) -> T:
        return self.values[position]

    @property
    def start(self) -> datetime:
        """First timestamp."""
        return self.index[0]

    @property
    def end(self) -> datetime:
        """Last timestamp."""
        return self.index[-1]

    def items(self) -> Iterator[tuple[datetime, T]]:
        """Iterate over (timestamp, value) pairs."""
        return zip(self.index, self.values)

    def position(self, timestamp: datetime) -> int:
        """Position of ``timestamp`` in the index."""
        try:
            return self._positions[timestamp]
        except KeyError:
            raise KeyError(f"{timestamp} not in time series index") from None

    def __contains__(self, timestamp: object) -> bool:
        return timestamp in self._positions

    def at(self, timestamp: datetime) -> T:
        """Value at ``timestamp``."""
        return self.values[self.position(timestamp)]

    def map(self, fn: Callable[[T], U]) -> TimeSeries[U]:
        """Apply ``fn`` to every value, keeping the index."""
        return TimeSeries(self.index, tuple(fn(v) for v in self.values), self.step)

    def with_values(self, values: Iterable[U]) -> TimeSeries[U]:
        """Replace the values, keeping the index."""
        return TimeSeries(self.index, tuple(values), self.step)

    def window(self, start: datetime, length: int) -> TimeSeries[T]:
        """Sub-series of ``length`` values starting at ``start``."""
        first = self.position(start)
        if first + length > len(self):
            raise KeyError(
                f"Window of {length} steps from {start} runs past {self.end}"
            )
        return TimeSeries(
            self.index[first:first + length],
            self.values[first:first + length],
            self.step,
        )

    def to_numpy(self, dtype: Any = float) -> np.ndarray:
        """Values as a numpy array."""
        return np.asarray(self.values, dtype=dtype)

    def to_pandas(self) -> pd.Series:
        """Values as a pandas Series with a DatetimeIndex."""
        return pd.Series(list(self.values), index=pd.DatetimeIndex(self.index))
