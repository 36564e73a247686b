"""
Cloud controllers driven by the simulation engine.

At every step the engine calls ``reevaluate`` with the current state and
the forecasts over the window; the controller returns a schedule whose
first-step actions are executed. Controllers see neither future requests
nor VM lifetimes.
"""

from __future__ import annotations

import logging
from typing import Optional

from geosched.constants import CONTROLLER_BFD, CONTROLLER_BRUTE, CONTROLLER_GA
from geosched.core.baselines.bfd import bfd_place
from geosched.core.baselines.oracle import OracleLimits, brute_force_optimum
from geosched.core.fitness.evaluator import FitnessEvaluator
from geosched.core.fitness.models import FitnessWeights
from geosched.core.forecasting.models import Forecasts
from geosched.core.geotraces.cooling import PPueModel
from geosched.core.model.cloud import CloudState
from geosched.core.model.schedule import Schedule
from geosched.core.scheduler.ga import run_ga
from geosched.core.scheduler.local import bcf_place
from geosched.core.scheduler.models import GAConfig, Population
from geosched.exceptions import ScenarioError

logger = logging.getLogger(__name__)


class Controller:
    """Base class of all controllers."""

    name = "controller"

    def reevaluate(self, state: CloudState, forecasts: Forecasts) -> Schedule:
        """Plan a schedule over ``forecasts.window`` starting from ``state``."""
        raise NotImplementedError


class GAController(Controller):
    """
    Hybrid GA controller.

    Pending VMs are placed with a forced best-cost-fit pass, then the GA
    plans migrations from the post-placement state. The GA population is
    kept between calls and partially propagated to the next window.
    """

    name = CONTROLLER_GA

    def __init__(
        self,
        weights: Optional[FitnessWeights] = None,
        config: Optional[GAConfig] = None,
        ppue_model: Optional[PPueModel] = None,
    ):
        self.weights = weights or FitnessWeights()
        self.config = config or GAConfig()
        self.ppue_model = ppue_model or PPueModel()
        self.population: Optional[Population] = None

    def reevaluate(self, state: CloudState, forecasts: Forecasts) -> Schedule:
        placements = Schedule.empty(forecasts.index, forecasts.window.step)
        placed = state
        if state.pending:
            evaluator = FitnessEvaluator(state, forecasts, self.weights, self.ppue_model)
            placements = bcf_place(state, sorted(state.pending), forecasts, evaluator=evaluator)
            for action in placements.actions_at(0):
                placed = placed.apply(action)
            logger.debug(
                f"Placed {len(placements)} of {len(state.pending)} pending VM(s) before the GA"
            )

        best, self.population = run_ga(
            placed,
            (),
            forecasts,
            self.weights,
            self.config,
            carried=self.population,
            ppue_model=self.ppue_model,
        )

        # A GA action at the first step redirects a fresh placement
        redirected = {a.vm for a in best.actions_at(0)}
        entries = best.entries() + [
            (0, a) for a in placements.actions_at(0) if a.vm not in redirected
        ]
        return Schedule.from_entries(forecasts.index, entries, forecasts.window.step)


class BFDController(Controller):
    """Places booted VMs with best fit decreasing and never migrates."""

    name = CONTROLLER_BFD

    def reevaluate(self, state: CloudState, forecasts: Forecasts) -> Schedule:
        return bfd_place(state, sorted(state.pending), forecasts)


class BruteForceController(Controller):
    """Plans the exact optimum of every window; tiny scenarios only."""

    name = CONTROLLER_BRUTE

    def __init__(
        self,
        weights: Optional[FitnessWeights] = None,
        limits: Optional[OracleLimits] = None,
        ppue_model: Optional[PPueModel] = None,
    ):
        self.weights = weights or FitnessWeights()
        self.limits = limits or OracleLimits()
        self.ppue_model = ppue_model or PPueModel()

    def reevaluate(self, state: CloudState, forecasts: Forecasts) -> Schedule:
        schedule, _ = brute_force_optimum(
            state, (), forecasts, self.weights, self.limits, self.ppue_model
        )
        return schedule


def make_controller(
    name: str,
    weights: Optional[FitnessWeights] = None,
    ga_config: Optional[GAConfig] = None,
    oracle_limits: Optional[OracleLimits] = None,
    ppue_model: Optional[PPueModel] = None,
) -> Controller:
    """
    Create a controller by name.

    Raises:
        ScenarioError: If the name is not a known controller.
    """
    if name == CONTROLLER_GA:
        return GAController(weights, ga_config, ppue_model)
    if name == CONTROLLER_BFD:
        return BFDController()
    if name == CONTROLLER_BRUTE:
        return BruteForceController(weights, oracle_limits, ppue_model)
    raise ScenarioError(f"Unknown controller: {name}")
