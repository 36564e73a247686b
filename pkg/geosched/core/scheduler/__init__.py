"""Hybrid genetic scheduler over migration schedules."""

from geosched.core.scheduler.ga import run_ga, window_key
from geosched.core.scheduler.local import bcf_place, best_cost_fit, local_improvement
from geosched.core.scheduler.models import GAConfig, Member, Population, ranked
from geosched.core.scheduler.operators import (
    crossover,
    mutate,
    propagate,
    random_schedule,
)

__all__ = [
    "GAConfig",
    "Member",
    "Population",
    "bcf_place",
    "best_cost_fit",
    "crossover",
    "local_improvement",
    "mutate",
    "propagate",
    "random_schedule",
    "ranked",
    "run_ga",
    "window_key",
]
