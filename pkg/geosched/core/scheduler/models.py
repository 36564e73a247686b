"""
Data models for the genetic scheduler.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass, field
from typing import Any, Iterable, Optional

from geosched.constants import (
    GA_ACTION_PROBABILITY,
    GA_CROSSOVER_RATE,
    GA_ELITE_COUNT,
    GA_GENERATIONS,
    GA_MUTATION_RATE,
    GA_POPULATION_SIZE,
    GA_PROPAGATE_FRACTION,
    GA_TOURNAMENT_SIZE,
)
from geosched.core.fitness.models import FitnessBreakdown
from geosched.core.forecasting.models import ForecastWindow
from geosched.core.model.schedule import Schedule


@dataclass(frozen=True)
class GAConfig:
    """
    Genetic algorithm parameters.

    Attributes:
        population_size: Members per generation (>= 2).
        gen: Generation budget.
        crossover_rate: Probability a child is produced by crossover.
        mutation_rate: Probability a child is mutated.
        elite_count: Best members copied unchanged into the next generation.
        propagate_fraction: Share of the population carried to the next
            reevaluation.
        seed: Base seed; each window derives its own stream.
        action_probability: Chance that a (vm, t) slot of a random
            schedule holds an action.
        tournament_size: Members drawn per tournament.
        local_improvement: Run the greedy best-cost-fit pass on the result.
        time_limit: Optional wall-clock cap per run in seconds.
    """

    population_size: int = GA_POPULATION_SIZE
    gen: int = GA_GENERATIONS
    crossover_rate: float = GA_CROSSOVER_RATE
    mutation_rate: float = GA_MUTATION_RATE
    elite_count: int = GA_ELITE_COUNT
    propagate_fraction: float = GA_PROPAGATE_FRACTION
    seed: int = 0
    action_probability: float = GA_ACTION_PROBABILITY
    tournament_size: int = GA_TOURNAMENT_SIZE
    local_improvement: bool = True
    time_limit: Optional[float] = None

    def __post_init__(self) -> None:
        if self.population_size < 2:
            raise ValueError(f"population_size must be >= 2, got {self.population_size}")
        if self.gen < 0:
            raise ValueError(f"gen must be >= 0, got {self.gen}")
        for name in ("crossover_rate", "mutation_rate", "propagate_fraction", "action_probability"):
            value = getattr(self, name)
            if not 0 <= value <= 1:
                raise ValueError(f"{name} must be in [0, 1], got {value}")
        if not 1 <= self.elite_count <= self.population_size:
            raise ValueError(
                f"elite_count must be in [1, population_size], got {self.elite_count}"
            )
        if self.tournament_size < 1:
            raise ValueError(f"tournament_size must be >= 1, got {self.tournament_size}")
        if self.time_limit is not None and self.time_limit <= 0:
            raise ValueError(f"time_limit must be positive, got {self.time_limit}")

    def to_dict(self) -> dict[str, Any]:
        return asdict(self)


@dataclass(frozen=True)
class Member:
    """A schedule and, once evaluated, its fitness."""

    schedule: Schedule
    fitness: Optional[FitnessBreakdown] = None

    @property
    def total(self) -> float:
        """Total fitness; unevaluated members rank last."""
        return float("inf") if self.fitness is None else self.fitness.total


@dataclass(frozen=True)
class Population:
    """
    GA population over one forecast window.

    Attributes:
        members: Members, sorted by total fitness ascending once evaluated.
        window: Window every member's schedule is indexed over.
        best_history: Best total fitness after initialisation and after
            every generation.
    """

    members: tuple[Member, ...]
    window: ForecastWindow
    best_history: tuple[float, ...] = field(default_factory=tuple)

    def __post_init__(self) -> None:
        index = self.window.index
        for member in self.members:
            if member.schedule.index != index:
                raise ValueError("Every member must be indexed over the population window")
        object.__setattr__(self, "members", tuple(self.members))
        object.__setattr__(self, "best_history", tuple(self.best_history))

    def __len__(self) -> int:
        return len(self.members)

    @property
    def best(self) -> Member:
        """Member with the lowest total fitness (first on ties)."""
        return ranked(self.members)[0]

    @property
    def schedules(self) -> list[Schedule]:
        return [m.schedule for m in self.members]


def ranked(members: Iterable[Member]) -> list[Member]:
    """Members sorted by total fitness; ties keep their order."""
    return sorted(members, key=lambda m: m.total)
