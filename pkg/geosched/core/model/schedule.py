"""
Migration schedules.

A schedule is a time series of zero or more actions per timestamp over a
forecast window. Actions at one timestamp are kept sorted by VM id, so two
schedules holding the same actions compare equal.
"""

from __future__ import annotations

from dataclasses import dataclass
from datetime import datetime, timedelta
from typing import Any, Iterable, Iterator, Optional, Sequence

from geosched.core.model.cloud import Action
from geosched.core.model.timeseries import TimeSeries
from geosched.exceptions import ScheduleError


def _canonical(actions: Iterable[Action]) -> tuple[Action, ...]:
    ordered = tuple(sorted(actions))
    vms = [a.vm for a in ordered]
    if len(set(vms)) != len(vms):
        duplicated = sorted({vm for vm in vms if vms.count(vm) > 1})
        raise ScheduleError(
            "Duplicate action",
            f"More than one action per VM at one timestamp: {duplicated}",
        )
    return ordered


@dataclass(frozen=True)
class Schedule:
    """
    Planned control actions ``{action_t: t in fw}``.

    Attributes:
        actions: Time series of action tuples, one tuple per timestamp.

    Example:
        schedule = Schedule.from_entries(index, [(0, Action("vm1", "pm2"))])
        len(schedule)  # 1
    """

    actions: TimeSeries[tuple[Action, ...]]

    def __post_init__(self) -> None:
        canonical = tuple(_canonical(step) for step in self.actions.values)
        if canonical != self.actions.values:
            object.__setattr__(self, "actions", self.actions.with_values(canonical))

    @classmethod
    def empty(
        cls, index: Sequence[datetime], step: Optional[timedelta] = None
    ) -> Schedule:
        """A schedule with no actions over ``index``."""
        return cls(TimeSeries.constant(index, (), step))

    @classmethod
    def from_entries(
        cls,
        index: Sequence[datetime],
        entries: Iterable[tuple[int, Action]],
        step: Optional[timedelta] = None,
    ) -> Schedule:
        """
        Build a schedule from (position, action) pairs.

        Raises:
            ScheduleError: If a position is outside the index or a VM has
                two actions at one position.
        """
        buckets: list[list[Action]] = [[] for _ in index]
        for position, action in entries:
            if not 0 <= position < len(buckets):
                raise ScheduleError(
                    "Action outside window",
                    f"Position {position} not in a window of {len(buckets)} steps",
                )
            buckets[position].append(action)
        return cls(TimeSeries(tuple(index), tuple(_canonical(b) for b in buckets), step))

    @property
    def index(self) -> tuple[datetime, ...]:
        return self.actions.index

    @property
    def step(self) -> timedelta:
        return self.actions.step  # type: ignore[return-value]

    @property
    def window_length(self) -> int:
        """Number of timestamps in the window."""
        return len(self.actions)

    def __len__(self) -> int:
        """Total number of planned actions."""
        return sum(len(step) for step in self.actions.values)

    def __iter__(self) -> Iterator[tuple[int, Action]]:
        return iter(self.entries())

    def is_empty(self) -> bool:
        return len(self) == 0

    def actions_at(self, position: int) -> tuple[Action, ...]:
        """Actions planned at window position ``position``."""
        return self.actions.values[position]

    def entries(self) -> list[tuple[int, Action]]:
        """All (position, action) pairs in time then VM order."""
        return [
            (position, action)
            for position, step in enumerate(self.actions.values)
            for action in step
        ]

    def with_entries(self, entries: Iterable[tuple[int, Action]]) -> Schedule:
        """A schedule over the same window holding ``entries``."""
        return Schedule.from_entries(self.index, entries, self.step)

    def same_window(self, other: Schedule) -> bool:
        return self.index == other.index

    def without_vms(self, vm_ids: Iterable[str]) -> Schedule:
        """Drop every action on the given VMs."""
        dropped = set(vm_ids)
        if not dropped:
            return self
        return self.with_entries((p, a) for p, a in self.entries() if a.vm not in dropped)

    def reindex(self, index: Sequence[datetime]) -> Schedule:
        """
        Move actions onto a new window by timestamp.

        Actions whose timestamps are not part of ``index`` are dropped;
        timestamps of ``index`` the schedule does not cover stay empty.
        """
        new_positions = {ts: i for i, ts in enumerate(index)}
        entries = [
            (new_positions[self.index[p]], action)
            for p, action in self.entries()
            if self.index[p] in new_positions
        ]
        return Schedule.from_entries(index, entries, self.step)

    def to_dict(self) -> dict[str, Any]:
        """Convert to dictionary for serialization."""
        return {
            "window": [ts.isoformat() for ts in self.index],
            "actions": [
                {"t": self.index[p].isoformat(), "vm": a.vm, "pm": a.pm}
                for p, a in self.entries()
            ],
        }
