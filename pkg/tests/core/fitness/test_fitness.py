"""Tests for the fitness components and the batched evaluator."""

import numpy as np
import pytest

from geosched.core.fitness import (
    FitnessEvaluator,
    FitnessWeights,
    consolid,
    consolid_from_utilisation,
    constraint_penalty,
    energy_cost,
    migration_penalty,
    pending_penalty,
    total_fitness,
    trajectory,
)
from geosched.core.model import (
    Action,
    CloudState,
    Inventory,
    RequestKind,
    Schedule,
    VMRequest,
    date_index,
)
from tests.conftest import HOUR, START, flat_trace, make_pm, make_vm, window_forecasts

ENERGY_ONLY = FitnessWeights(w_energy=1.0, w_consolid=0.0, w_migration=0.0, w_constraint=0.0)


@pytest.fixture
def full_pm_state() -> CloudState:
    """One (4, 8) PM, 200 W peak, fully used by one VM."""
    inventory = Inventory((make_pm("pm1", "a", 4.0, 8.0),), {"vm1": make_vm("vm1", 4.0, 8.0)})
    return CloudState(inventory, {"pm1": {"vm1"}}, START)


@pytest.fixture
def asymmetric() -> tuple[CloudState, dict]:
    """A VM on pm1 in expensive location a; pm2 in cheap location b is free."""
    inventory = Inventory(
        (make_pm("pm1", "a"), make_pm("pm2", "b")),
        {"vm1": make_vm("vm1")},
    )
    state = CloudState(inventory, {"pm1": {"vm1"}}, START)
    traces = {"a": flat_trace("a", 12, price=0.20), "b": flat_trace("b", 12, price=0.05)}
    return state, traces


class TestEnergyCost:
    """Tests for energy_cost."""

    def test_all_suspended(self, empty_state: CloudState, flat_traces: dict) -> None:
        """No active PMs should cost nothing."""
        states = trajectory(empty_state, Schedule.empty(date_index(START, 4)))
        assert energy_cost(states, flat_traces) == 0.0

    def test_full_pm_one_hour(self, full_pm_state: CloudState) -> None:
        """200 W for 1 h at 0.10 USD/kWh and pPUE 1.05 should cost 0.021 USD."""
        states = trajectory(full_pm_state, Schedule.empty(date_index(START, 1)))
        traces = {"a": flat_trace("a", 1, price=0.10, temperature=-3.9)}
        assert energy_cost(states, traces) == pytest.approx(0.021, abs=1e-12)

    def test_evaluator_agrees(self, asymmetric: tuple) -> None:
        """The batched evaluator should match the reference computation."""
        state, traces = asymmetric
        schedule = Schedule.from_entries(date_index(START, 12), [(3, Action("vm1", "pm2"))])
        forecasts = window_forecasts(traces, 12)
        breakdown = FitnessEvaluator(state, forecasts).evaluate(schedule)
        expected = energy_cost(trajectory(state, schedule), traces)
        assert breakdown.energy_cost_usd == pytest.approx(expected, rel=1e-12)


class TestConsolid:
    """Tests for the consolidation component."""

    def test_worked_example(self) -> None:
        """Utilisation [0, 0.6, 0.8, 0, 0] should give exactly 0.3."""
        util = np.array([[0.0], [0.6], [0.8], [0.0], [0.0]])
        assert abs(float(consolid_from_utilisation(util)) - 0.3) <= 1e-12

    def test_full_whenever_on(self) -> None:
        util = np.array([[1.0, 0.0], [0.0, 1.0], [1.0, 1.0]])
        assert float(consolid_from_utilisation(util)) == 0.0

    def test_never_used_pm_is_consolidated(self) -> None:
        """A PM that is always suspended should add no badness."""
        util = np.array([[0.5, 0.0], [0.5, 0.0]])
        assert float(consolid_from_utilisation(util)) == pytest.approx(0.25)

    def test_bounded(self) -> None:
        rng = np.random.default_rng(0)
        util = rng.random((50, 20, 6)) * (rng.random((50, 20, 6)) > 0.4)
        values = consolid_from_utilisation(util)
        assert values.shape == (50,)
        assert np.all((values >= 0) & (values <= 1))

    def test_trajectory(self, two_pm_inventory: Inventory) -> None:
        """Half a PM used throughout, the other PM never used, should give 0.25."""
        state = CloudState(two_pm_inventory, {"pm1": {"vm3"}}, START)
        states = trajectory(state, Schedule.empty(date_index(START, 3)))
        assert consolid(states) == pytest.approx(0.25)


class TestMigrationPenalty:
    """Tests for migration_penalty."""

    @pytest.fixture
    def ten_vm_state(self) -> CloudState:
        vms = {f"vm{i}": make_vm(f"vm{i}", 1.0, 1.0) for i in range(10)}
        inventory = Inventory((make_pm("pm1", cpu=16, ram=32), make_pm("pm2", cpu=16, ram=32)), vms)
        return CloudState(inventory, {"pm1": set(vms)}, START)

    def test_empty_schedule(self, ten_vm_state: CloudState) -> None:
        assert migration_penalty(Schedule.empty(date_index(START, 12)), ten_vm_state) == 0.0

    def test_three_of_hundred_twenty(self, ten_vm_state: CloudState) -> None:
        """3 real migrations of 10 VMs over 12 steps should give 0.025."""
        entries = [
            (0, Action("vm0", "pm2")),
            (1, Action("vm1", "pm2")),
            (2, Action("vm0", "pm1")),
            (5, Action("vm2", "pm1")),
        ]
        schedule = Schedule.from_entries(date_index(START, 12), entries)
        assert migration_penalty(schedule, ten_vm_state) == pytest.approx(0.025)

    def test_every_vm_every_step(self) -> None:
        """Migrating every VM at every step should give 1."""
        inventory = Inventory((make_pm("pm1"), make_pm("pm2")), {"vm1": make_vm("vm1")})
        state = CloudState(inventory, {"pm1": {"vm1"}}, START)
        entries = [(t, Action("vm1", "pm2" if t % 2 == 0 else "pm1")) for t in range(4)]
        schedule = Schedule.from_entries(date_index(START, 4), entries)
        assert migration_penalty(schedule, state) == pytest.approx(1.0)

    def test_placement_is_not_migration(self, empty_state: CloudState) -> None:
        """Placing a pending VM should not count."""
        state = empty_state.boot("vm1")
        schedule = Schedule.from_entries(date_index(START, 2), [(0, Action("vm1", "pm1"))])
        assert migration_penalty(schedule, state) == 0.0


class TestConstraintPenalty:
    """Tests for constraint_penalty and pending_penalty."""

    @pytest.fixture
    def overfull_state(self) -> CloudState:
        inventory = Inventory(
            (make_pm("pm1", cpu=4.0, ram=8.0), make_pm("pm2", cpu=4.0, ram=8.0)),
            {"a": make_vm("a", 4.0, 4.0), "b": make_vm("b", 1.0, 1.0), "c": make_vm("c", 3.0, 8.0)},
        )
        return CloudState(inventory, {"pm1": {"a", "b"}}, START)

    def test_feasible(self, two_pm_inventory: Inventory) -> None:
        state = CloudState(two_pm_inventory, {"pm1": {"vm1"}}, START)
        assert constraint_penalty(trajectory(state, Schedule.empty(date_index(START, 12)))) == 0.0

    def test_one_pm_overfull_throughout(self, overfull_state: CloudState) -> None:
        """One of two PMs overfull for all 12 steps should give 0.5."""
        states = trajectory(overfull_state, Schedule.empty(date_index(START, 12)))
        assert constraint_penalty(states) == pytest.approx(0.5)

    def test_count_not_magnitude(self, overfull_state: CloudState) -> None:
        """A bigger overflow should not change the value."""
        worse = CloudState(overfull_state.inventory, {"pm1": {"a", "b", "c"}}, START)
        states = trajectory(worse, Schedule.empty(date_index(START, 12)))
        assert constraint_penalty(states) == pytest.approx(0.5)

    def test_evaluator_agrees(self, overfull_state: CloudState) -> None:
        traces = {"a": flat_trace("a", 12)}
        breakdown = FitnessEvaluator(overfull_state, window_forecasts(traces, 12)).evaluate(
            Schedule.empty(date_index(START, 12))
        )
        assert breakdown.constraint_penalty == pytest.approx(0.5)
        assert not breakdown.feasible

    def test_pending_penalty(self, empty_state: CloudState) -> None:
        """A VM pending for one of two steps should give 0.5."""
        state = empty_state.boot("vm1")
        schedule = Schedule.from_entries(date_index(START, 2), [(1, Action("vm1", "pm1"))])
        assert pending_penalty(trajectory(state, schedule)) == pytest.approx(0.5)


class TestTotalFitness:
    """Tests for the weighted total and the evaluator."""

    def test_constraint_only_feasible_is_zero(self, asymmetric: tuple) -> None:
        state, traces = asymmetric
        weights = FitnessWeights(w_energy=0.0, w_consolid=0.0, w_migration=0.0, w_constraint=1.0)
        breakdown = total_fitness(
            Schedule.empty(date_index(START, 12)), state, window_forecasts(traces, 12), weights
        )
        assert breakdown.total == 0.0

    def test_cheaper_pm_wins(self, asymmetric: tuple) -> None:
        """Moving to the cheap location should lower the energy-only total."""
        state, traces = asymmetric
        index = date_index(START, 12)
        forecasts = window_forecasts(traces, 12)
        stay = total_fitness(Schedule.empty(index), state, forecasts, ENERGY_ONLY)
        move = total_fitness(
            Schedule.from_entries(index, [(0, Action("vm1", "pm2"))]), state, forecasts, ENERGY_ONLY
        )
        assert move.total < stay.total
        assert move.energy_cost_usd < stay.energy_cost_usd

    def test_energy_only_ranks_like_energy(self, asymmetric: tuple) -> None:
        state, traces = asymmetric
        index = date_index(START, 12)
        evaluator = FitnessEvaluator(state, window_forecasts(traces, 12), ENERGY_ONLY)
        schedules = [
            Schedule.from_entries(index, [(t, Action("vm1", "pm2"))]) for t in range(0, 12, 3)
        ]
        results = evaluator.evaluate_many(schedules)
        by_total = sorted(range(len(results)), key=lambda i: results[i].total)
        by_energy = sorted(range(len(results)), key=lambda i: results[i].energy_cost_usd)
        assert by_total == by_energy

    def test_pure(self, asymmetric: tuple) -> None:
        """The same schedule should score identically alone and in a batch."""
        state, traces = asymmetric
        index = date_index(START, 12)
        evaluator = FitnessEvaluator(state, window_forecasts(traces, 12))
        schedule = Schedule.from_entries(index, [(2, Action("vm1", "pm2"))])
        alone = evaluator.evaluate(schedule)
        batch = evaluator.evaluate_many([Schedule.empty(index), schedule, schedule])
        assert batch[1] == alone
        assert batch[2] == alone
        assert evaluator.evaluate(schedule) == alone

    def test_requests_in_window(self, empty_state: CloudState, flat_traces: dict) -> None:
        """A VM booted mid-window and left unplaced should be pending from its boot."""
        requests = [VMRequest(START + 2 * HOUR, RequestKind.BOOT, "vm1")]
        evaluator = FitnessEvaluator(empty_state, window_forecasts(flat_traces, 4), requests=requests)
        breakdown = evaluator.evaluate(Schedule.empty(date_index(START, 4)))
        assert breakdown.pending_penalty == pytest.approx(1.0)

    def test_weights_validation(self) -> None:
        with pytest.raises(ValueError):
            FitnessWeights(w_energy=-1.0)
        with pytest.raises(ValueError):
            FitnessWeights(0.0, 0.0, 0.0, 0.0)
