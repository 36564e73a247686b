"""
Data models for schedule fitness.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass
from typing import Any

from geosched.constants import (
    DEFAULT_W_CONSOLID,
    DEFAULT_W_CONSTRAINT,
    DEFAULT_W_ENERGY,
    DEFAULT_W_MIGRATION,
)


@dataclass(frozen=True)
class FitnessWeights:
    """
    Weights of the fitness components.

    Attributes:
        w_energy: Weight of the normalized energy cost.
        w_consolid: Weight of the consolidation badness.
        w_migration: Weight of the migration penalty.
        w_constraint: Weight of capacity violations and unplaced VMs.
    """

    w_energy: float = DEFAULT_W_ENERGY
    w_consolid: float = DEFAULT_W_CONSOLID
    w_migration: float = DEFAULT_W_MIGRATION
    w_constraint: float = DEFAULT_W_CONSTRAINT

    def __post_init__(self) -> None:
        values = (self.w_energy, self.w_consolid, self.w_migration, self.w_constraint)
        if any(w < 0 for w in values):
            raise ValueError(f"Fitness weights must be non-negative, got {values}")
        if not any(w > 0 for w in values):
            raise ValueError("At least one fitness weight must be positive")

    def to_dict(self) -> dict[str, Any]:
        return asdict(self)


@dataclass(frozen=True)
class FitnessBreakdown:
    """
    Fitness components of one schedule and their weighted total.

    Lower is better for every component and for the total.

    Attributes:
        energy_cost_usd: Energy cost over the window in USD.
        energy_ceiling_usd: Cost with every PM at peak power, the
            normalization constant of the energy term.
        consolid: Consolidation badness in [0, 1].
        migration_penalty: Real migrations / (VMs x window steps).
        constraint_penalty: Fraction of (pm, t) pairs over capacity.
        pending_penalty: Fraction of (vm, t) pairs with the VM unplaced.
        migrations: Number of real migrations.
        total: Weighted sum of the normalized components.
    """

    energy_cost_usd: float
    energy_ceiling_usd: float
    consolid: float
    migration_penalty: float
    constraint_penalty: float
    pending_penalty: float
    migrations: int
    total: float

    @property
    def feasible(self) -> bool:
        """True when no PM is ever over capacity."""
        return self.constraint_penalty == 0

    def to_dict(self) -> dict[str, Any]:
        """Convert to dictionary for serialization."""
        return asdict(self)


def weighted_total(
    weights: FitnessWeights,
    energy_cost_usd: float,
    energy_ceiling_usd: float,
    consolid: float,
    migration_penalty: float,
    constraint_penalty: float,
    pending_penalty: float = 0.0,
) -> float:
    """Combine normalized components into the scalar fitness."""
    energy = energy_cost_usd / energy_ceiling_usd if energy_ceiling_usd > 0 else 0.0
    return (
        weights.w_energy * energy
        + weights.w_consolid * consolid
        + weights.w_migration * migration_penalty
        + weights.w_constraint * (constraint_penalty + pending_penalty)
    )
