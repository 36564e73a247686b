"""Tests for the hybrid GA and its greedy improvement step."""

import numpy as np
import pytest

from geosched.core.baselines import bfd_place, brute_force_optimum
from geosched.core.fitness import FitnessEvaluator, FitnessWeights
from geosched.core.forecasting import Forecasts
from geosched.core.model import Action, CloudState, Inventory, Schedule
from geosched.core.scheduler import (
    GAConfig,
    bcf_place,
    best_cost_fit,
    local_improvement,
    run_ga,
)
from geosched.core.scheduler.ga import _tournament
from tests.conftest import START, flat_trace, make_pm, make_vm, series_trace, window_forecasts


@pytest.fixture
def toy() -> tuple[CloudState, dict]:
    """One VM on pm1 (location a, expensive); pm2 (location b) is cheaper."""
    inventory = Inventory((make_pm("pm1", "a"), make_pm("pm2", "b")), {"vm1": make_vm("vm1")})
    state = CloudState(inventory, {"pm1": {"vm1"}}, START)
    traces = {"a": flat_trace("a", 12, price=0.20), "b": flat_trace("b", 12, price=0.05)}
    return state, traces


@pytest.fixture
def crowded() -> tuple[CloudState, dict]:
    """Six VMs spread over four PMs in two locations."""
    vms = {f"vm{i}": make_vm(f"vm{i}", 1.0 + i % 3, 2.0) for i in range(6)}
    pms = tuple(make_pm(f"pm{j}", "a" if j < 2 else "b") for j in range(4))
    alloc = {"pm0": {"vm0", "vm1"}, "pm1": {"vm2"}, "pm2": {"vm3", "vm4"}, "pm3": {"vm5"}}
    state = CloudState(Inventory(pms, vms), alloc, START)
    traces = {
        "a": flat_trace("a", 12, price=0.12, temperature=20.0),
        "b": flat_trace("b", 12, price=0.08, temperature=0.0),
    }
    return state, traces


class TestRunGA:
    """Tests for run_ga."""

    def test_gen_zero_skips_loop(self, toy: tuple) -> None:
        """With no generations the result is the best initial member, improved."""
        state, traces = toy
        config = GAConfig(population_size=4, gen=0, local_improvement=False)
        schedule, population = run_ga(state, [], window_forecasts(traces, 4), config=config)
        assert len(population.best_history) == 1
        assert schedule == population.best.schedule

    def test_best_history_non_increasing(self, crowded: tuple) -> None:
        """Elitism should never let the best fitness get worse."""
        state, traces = crowded
        forecasts = window_forecasts(traces, 6)
        for seed in range(10):
            config = GAConfig(population_size=10, gen=15, seed=seed, action_probability=0.1)
            _, population = run_ga(state, [], forecasts, config=config)
            history = population.best_history
            assert all(b <= a for a, b in zip(history, history[1:]))

    def test_deterministic(self, crowded: tuple) -> None:
        """The same seed should give the same schedule and population."""
        state, traces = crowded
        forecasts = window_forecasts(traces, 6)
        config = GAConfig(population_size=10, gen=10, seed=3)
        first = run_ga(state, [], forecasts, config=config)
        second = run_ga(state, [], forecasts, config=config)
        assert first[0] == second[0]
        assert first[1].best_history == second[1].best_history

    def test_population_ranked(self, crowded: tuple) -> None:
        state, traces = crowded
        config = GAConfig(population_size=8, gen=5, seed=1)
        _, population = run_ga(state, [], window_forecasts(traces, 4), config=config)
        totals = [m.total for m in population.members]
        assert totals == sorted(totals)
        assert len(population) == 8

    def test_matches_oracle_on_toy(self, toy: tuple) -> None:
        """On a 9-schedule toy the GA should find the exact optimum."""
        state, traces = toy
        forecasts = window_forecasts(traces, 2)
        weights = FitnessWeights()
        _, optimum = brute_force_optimum(state, [], forecasts, weights)
        config = GAConfig(population_size=20, gen=20, seed=5, action_probability=0.2)
        schedule, population = run_ga(state, [], forecasts, weights, config)
        assert population.best.total == pytest.approx(optimum.total, abs=1e-12)
        assert schedule.actions_at(0) == (Action("vm1", "pm2"),)

    def test_carried_population_reused(self, crowded: tuple) -> None:
        """A population from the previous window should seed the next run."""
        state, traces = crowded
        config = GAConfig(population_size=6, gen=3, seed=2)
        _, population = run_ga(state, [], window_forecasts(traces, 4), config=config)
        later = window_forecasts({k: t for k, t in traces.items()}, 4, start=START.replace(hour=1))
        _, next_population = run_ga(
            state.with_epoch(later.window.start), [], later, config=config, carried=population
        )
        assert next_population.window == later.window
        assert len(next_population) == 6


class TestTournament:
    """Tests for tournament selection over a ranked population."""

    RANKED = ["best", "second", "third", "fourth", "worst"]

    def test_pressure_towards_best(self) -> None:
        """With two competitors the best wins far more often than the worst."""
        rng = np.random.default_rng(0)
        picks = [_tournament(self.RANKED, 2, rng) for _ in range(5000)]
        assert picks.count("best") > 5 * picks.count("worst")

    def test_large_tournament_picks_best(self) -> None:
        rng = np.random.default_rng(1)
        assert {_tournament(self.RANKED, 200, rng) for _ in range(100)} == {"best"}

    def test_single_competitor_is_uniform(self) -> None:
        rng = np.random.default_rng(2)
        picks = [_tournament(self.RANKED, 1, rng) for _ in range(5000)]
        assert all(800 <= picks.count(name) <= 1200 for name in self.RANKED)


class TestBestCostFit:
    """Tests for the greedy best-cost-fit pass."""

    def test_moves_to_cheap_pm(self, toy: tuple) -> None:
        """A VM on the expensive PM with the cheap PM free should move."""
        state, traces = toy
        evaluator = FitnessEvaluator(state, window_forecasts(traces, 4))
        improved = best_cost_fit(Schedule.empty(evaluator.index), evaluator)
        assert improved.actions_at(0) == (Action("vm1", "pm2"),)

    def test_optimal_unchanged(self, toy: tuple) -> None:
        """An already optimal schedule should be returned as is."""
        state, traces = toy
        forecasts = window_forecasts(traces, 4)
        optimal = Schedule.from_entries(forecasts.index, [(0, Action("vm1", "pm2"))])
        assert local_improvement(optimal, state, forecasts) == optimal

    def test_never_worse(self, crowded: tuple) -> None:
        state, traces = crowded
        evaluator = FitnessEvaluator(state, window_forecasts(traces, 6))
        schedule = Schedule.empty(evaluator.index)
        improved = best_cost_fit(schedule, evaluator)
        assert evaluator.evaluate(improved).total <= evaluator.evaluate(schedule).total

    def test_infeasible_target_not_adopted(self) -> None:
        """A cheaper PM without room should never be used."""
        inventory = Inventory(
            (make_pm("pm1", "a"), make_pm("pm2", "b", cpu=2.0, ram=2.0)),
            {"big": make_vm("big", 4.0, 4.0)},
        )
        state = CloudState(inventory, {"pm1": {"big"}}, START)
        traces = {"a": flat_trace("a", 4, price=0.30), "b": flat_trace("b", 4, price=0.01)}
        forecasts = window_forecasts(traces, 4)
        assert local_improvement(Schedule.empty(forecasts.index), state, forecasts).is_empty()

    def test_bcf_place(self, toy: tuple) -> None:
        """Pending VMs should be placed on the cheapest PM that fits."""
        state, traces = toy
        pending = CloudState.empty(state.inventory, START).boot("vm1")
        schedule = bcf_place(pending, ["vm1"], window_forecasts(traces, 4))
        assert schedule.entries() == [(0, Action("vm1", "pm2"))]

    def test_bcf_leaves_unfit_pending(self) -> None:
        inventory = Inventory((make_pm("pm1", cpu=1.0, ram=1.0),), {"big": make_vm("big", 4.0, 4.0)})
        state = CloudState.empty(inventory, START).boot("big")
        schedule = bcf_place(state, ["big"], window_forecasts({"a": flat_trace("a", 2)}, 2))
        assert schedule.is_empty()


class TestOracleEquivalence:
    """The GA against exhaustive search on random tiny instances."""

    INSTANCES = 25

    @staticmethod
    def instance(seed: int) -> tuple[CloudState, Forecasts]:
        """Up to 2 VMs and 3 PMs over a window of up to 3 steps."""
        rng = np.random.default_rng(seed)
        n_pms = int(rng.integers(1, 4))
        n_vms = int(rng.integers(1, 3))
        fw = int(rng.integers(1, 4))
        locations = [f"l{j}" for j in range(n_pms)]
        pms = tuple(make_pm(f"pm{j}", locations[j], cpu=4.0, ram=8.0) for j in range(n_pms))
        vms = {
            f"vm{i}": make_vm(f"vm{i}", float(rng.integers(1, 3)), float(rng.integers(1, 5)))
            for i in range(n_vms)
        }
        state = CloudState.empty(Inventory(pms, vms), START)
        for vm_id in vms:
            state = state.boot(vm_id)
            if rng.random() < 0.5:
                state = state.apply(Action(vm_id, pms[int(rng.integers(n_pms))].id))
        traces = {
            loc: series_trace(loc, rng.uniform(0.02, 0.3, fw), rng.uniform(-10.0, 35.0, fw))
            for loc in locations
        }
        return state, window_forecasts(traces, fw)

    def test_ga_reaches_optimum(self) -> None:
        """Within 5% of the optimum in at least 90% of instances."""
        hits = 0
        for seed in range(self.INSTANCES):
            state, forecasts = self.instance(seed)
            _, optimum = brute_force_optimum(state, [], forecasts)
            config = GAConfig(population_size=50, gen=100, seed=seed)
            _, population = run_ga(state, [], forecasts, config=config)
            if population.best.total <= optimum.total + 0.05 * abs(optimum.total) + 1e-12:
                hits += 1
        assert hits >= 0.9 * self.INSTANCES

    def test_bfd_never_beats_oracle(self) -> None:
        for seed in range(self.INSTANCES):
            state, forecasts = self.instance(seed)
            _, optimum = brute_force_optimum(state, [], forecasts)
            schedule = bfd_place(state, state.pending, forecasts)
            bfd = FitnessEvaluator(state, forecasts).evaluate(schedule)
            assert bfd.total >= optimum.total - 1e-12
