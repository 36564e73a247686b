"""Schedule fitness: energy cost, consolidation, migrations and constraints."""

from geosched.core.fitness.components import (
    consolid,
    consolid_from_utilisation,
    constraint_penalty,
    energy_cost,
    migration_penalty,
    pending_penalty,
    trajectory,
)
from geosched.core.fitness.evaluator import FitnessEvaluator, total_fitness
from geosched.core.fitness.models import FitnessBreakdown, FitnessWeights, weighted_total

__all__ = [
    "FitnessBreakdown",
    "FitnessEvaluator",
    "FitnessWeights",
    "consolid",
    "consolid_from_utilisation",
    "constraint_penalty",
    "energy_cost",
    "migration_penalty",
    "pending_penalty",
    "total_fitness",
    "trajectory",
    "weighted_total",
]
