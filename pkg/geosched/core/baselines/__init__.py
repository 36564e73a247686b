"""Comparison controllers: BFD placement and the exhaustive oracle."""

from geosched.core.baselines.bfd import bfd_place, decreasing_demand
from geosched.core.baselines.oracle import (
    OracleLimits,
    brute_force_optimum,
    check_search_space,
    search_space_log10,
)

__all__ = [
    "OracleLimits",
    "bfd_place",
    "brute_force_optimum",
    "check_search_space",
    "decreasing_demand",
    "search_space_log10",
]
