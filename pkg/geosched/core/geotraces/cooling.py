"""
Temperature-dependent cooling overhead.

The pPUE factor maps outside temperature to the ratio of (IT + cooling)
power to IT power. It is piecewise linear between anchor points, flat
below the first anchor (free cooling) and at the mechanical ceiling above
the last one.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Union

import numpy as np

from geosched.constants import (
    FREE_COOLING_ANCHOR,
    MECHANICAL_PPUE,
    MECHANICAL_THRESHOLD_C,
    MIXED_COOLING_ANCHOR,
)

DEFAULT_ANCHORS: tuple[tuple[float, float], ...] = (
    FREE_COOLING_ANCHOR,
    MIXED_COOLING_ANCHOR,
    (MECHANICAL_THRESHOLD_C, MECHANICAL_PPUE),
)

Temperature = Union[float, np.ndarray]


@dataclass(frozen=True)
class PPueModel:
    """
    Piecewise-linear pPUE(temperature) model.

    Attributes:
        anchors: (temperature °C, pPUE) points sorted by temperature.
        mechanical_ceiling: pPUE above the last anchor.

    Example:
        model = PPueModel()
        model.ppue(15.6)  # 1.17
    """

    anchors: tuple[tuple[float, float], ...] = field(default=DEFAULT_ANCHORS)
    mechanical_ceiling: float = MECHANICAL_PPUE

    def __post_init__(self) -> None:
        anchors = tuple((float(t), float(p)) for t, p in self.anchors)
        if not anchors:
            raise ValueError("pPUE model needs at least one anchor")
        temps = [t for t, _ in anchors]
        values = [p for _, p in anchors]
        if any(b <= a for a, b in zip(temps, temps[1:])):
            raise ValueError(f"pPUE anchors must be sorted by temperature: {temps}")
        if any(p < 1.0 for p in values):
            raise ValueError(f"pPUE values must be >= 1.0: {values}")
        if any(b < a for a, b in zip(values, values[1:])):
            raise ValueError(f"pPUE values must be non-decreasing: {values}")
        if self.mechanical_ceiling < values[-1]:
            raise ValueError(
                f"Mechanical ceiling {self.mechanical_ceiling} is below the last anchor {values[-1]}"
            )
        object.__setattr__(self, "anchors", anchors)
        object.__setattr__(self, "mechanical_ceiling", float(self.mechanical_ceiling))

    @property
    def floor(self) -> float:
        """pPUE below the first anchor."""
        return self.anchors[0][1]

    def ppue(self, temperature: Temperature) -> Temperature:
        """Cooling factor at ``temperature``; accepts scalars or arrays."""
        temps, values = zip(*self.anchors)
        factor = np.interp(
            temperature,
            temps,
            values,
            left=values[0],
            right=self.mechanical_ceiling,
        )
        if np.ndim(factor) == 0:
            return float(factor)
        return factor

    def to_dict(self) -> dict[str, Any]:
        """Convert to dictionary for serialization."""
        return {
            "anchors": [list(anchor) for anchor in self.anchors],
            "mechanical_ceiling": self.mechanical_ceiling,
        }


def ppue(model: PPueModel, temperature: Temperature) -> Temperature:
    """Module-level shorthand for ``model.ppue(temperature)``."""
    return model.ppue(temperature)
