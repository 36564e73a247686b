"""
Hybrid genetic algorithm over migration schedules.

Each reevaluation evolves a population of schedules over the current
forecast window for ``gen`` generations (tournament selection, elitism,
time-cut crossover, single-action mutation), then improves the best
schedule with one greedy best-cost-fit pass. Part of the final population
is carried into the next window.
"""

from __future__ import annotations

import logging
import time
from datetime import datetime
from typing import Iterable, Optional, Sequence

from geosched.core.fitness.evaluator import FitnessEvaluator
from geosched.core.fitness.models import FitnessWeights
from geosched.core.forecasting.models import Forecasts, ForecastWindow
from geosched.core.geotraces.cooling import PPueModel
from geosched.core.model.cloud import CloudState, VMRequest
from geosched.core.model.schedule import Schedule
from geosched.core.parallel import parallel_map
from geosched.core.rng import make_rng, seed_sequence
from geosched.core.scheduler.local import best_cost_fit
from geosched.core.scheduler.models import GAConfig, Member, Population, ranked
from geosched.core.scheduler.operators import (
    crossover,
    mutate,
    propagate,
    random_schedule,
)

logger = logging.getLogger(__name__)

# Members scored per batch; fixed so results do not depend on the thread count
EVALUATION_CHUNK = 16

_EPOCH = datetime(1970, 1, 1)


def window_key(window: ForecastWindow) -> int:
    """Ordinal of the window start, used to derive its random stream."""
    start = window.start.replace(tzinfo=None)
    return int((start - _EPOCH) // window.step)


def _evaluate(evaluator: FitnessEvaluator, schedules: Sequence[Schedule]) -> list[Member]:
    chunks = [
        list(schedules[i:i + EVALUATION_CHUNK])
        for i in range(0, len(schedules), EVALUATION_CHUNK)
    ]
    scored = parallel_map(evaluator.evaluate_many, chunks)
    return [
        Member(schedule, fitness)
        for chunk, results in zip(chunks, scored)
        for schedule, fitness in zip(chunk, results)
    ]


def _vms_of(population: Population) -> set[str]:
    return {a.vm for s in population.schedules for _, a in s.entries()}


def _initial_population(
    state: CloudState,
    window: ForecastWindow,
    config: GAConfig,
    carried: Optional[Population],
    rng,
) -> list[Schedule]:
    if carried is not None and carried.window.start < window.start:
        missing = {vm for vm in _vms_of(carried) if not state.has_vm(vm)}
        propagated = propagate(carried, window, missing, state, config, rng)
        return propagated.schedules
    if carried is not None and carried.window == window and len(carried) == config.population_size:
        known = [vm for vm in _vms_of(carried) if not state.has_vm(vm)]
        return [s.without_vms(known) for s in carried.schedules]
    if carried is not None:
        logger.debug(f"Carried population for {carried.window.start} not usable, starting fresh")

    schedules = [Schedule.empty(window.index, window.step)]
    schedules += [
        random_schedule(state, window, rng, config.action_probability)
        for _ in range(config.population_size - 1)
    ]
    return schedules


def _tournament(members: Sequence[Member], size: int, rng) -> Member:
    # members are ranked, so the lowest drawn position wins
    drawn = rng.integers(0, len(members), size=size)
    return members[int(drawn.min())]


def run_ga(
    state: CloudState,
    requests: Iterable[VMRequest],
    forecasts: Forecasts,
    weights: Optional[FitnessWeights] = None,
    config: Optional[GAConfig] = None,
    carried: Optional[Population] = None,
    ppue_model: Optional[PPueModel] = None,
    evaluator: Optional[FitnessEvaluator] = None,
) -> tuple[Schedule, Population]:
    """
    Plan a migration schedule for the current forecast window.

    Args:
        state: Cloud state at the window start.
        requests: Requests known to fall inside the window.
        forecasts: Controller-visible traces over the window.
        weights: Fitness weights.
        config: GA parameters.
        carried: Population of an earlier window, partially propagated.
        ppue_model: Cooling model.
        evaluator: Prebuilt evaluator for (state, forecasts, weights).

    Returns:
        The best schedule and the final population (ranked, best first).

    Example:
        schedule, population = run_ga(state, [], forecasts, config=GAConfig(gen=20))
    """
    config = config or GAConfig()
    window = forecasts.window
    evaluator = evaluator or FitnessEvaluator(
        state, forecasts, weights, ppue_model, requests
    )
    rng = make_rng(seed_sequence(config.seed, window_key(window)))
    deadline = time.monotonic() + config.time_limit if config.time_limit else None

    members = ranked(_evaluate(evaluator, _initial_population(state, window, config, carried, rng)))
    history = [members[0].total]

    for generation in range(config.gen):
        if deadline is not None and time.monotonic() > deadline:
            logger.warning(
                f"GA stopped after {generation} of {config.gen} generations: "
                f"time limit {config.time_limit}s reached"
            )
            break
        children: list[Schedule] = []
        while len(children) < config.population_size - config.elite_count:
            first = _tournament(members, config.tournament_size, rng)
            child = first.schedule
            if rng.random() < config.crossover_rate:
                second = _tournament(members, config.tournament_size, rng)
                child = crossover(first.schedule, second.schedule, rng)
            if rng.random() < config.mutation_rate:
                child = mutate(child, state, rng)
            children.append(child)

        elites = members[: config.elite_count]
        members = ranked(elites + _evaluate(evaluator, children))
        history.append(members[0].total)
        logger.debug(f"Generation {generation + 1}: best {members[0].total:.6f}")

    best = members[0]
    if config.local_improvement:
        improved = best_cost_fit(best.schedule, evaluator)
        if improved != best.schedule:
            improved_member = Member(improved, evaluator.evaluate(improved))
            members = [improved_member] + members[:-1]
            best = improved_member
            history.append(best.total)

    population = Population(tuple(members), window, tuple(history))
    return best.schedule, population
