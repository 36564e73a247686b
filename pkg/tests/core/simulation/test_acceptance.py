"""Desk-scale statistical runs of the controllers."""

import statistics

import pytest

from geosched.core.simulation import load_scenario, run_simulation, summarize_trend, sweep

SEEDS = [1, 2, 3, 4, 5]

pytestmark = pytest.mark.slow


def test_ga_cheaper_than_bfd() -> None:
    """The GA should spend no more on energy than BFD in 4 of 5 seeds."""
    desk = load_scenario("desk")
    wins = 0
    for seed in SEEDS:
        scenario = desk.with_overrides([f"seed={seed}"])
        ga = run_simulation(scenario)
        bfd = run_simulation(scenario.with_overrides(["controller=bfd"]))
        wins += ga.total_energy_cost_usd <= bfd.total_energy_cost_usd
    assert wins >= 4


def test_energy_cost_stable_across_seeds() -> None:
    costs = [
        run_simulation(load_scenario("desk").with_overrides([f"seed={s}"])).total_energy_cost_usd
        for s in SEEDS
    ]
    assert statistics.pstdev(costs) / statistics.mean(costs) < 0.1


def test_migration_weight_trades_off_migrations() -> None:
    """More weight on migrations should not bring more migrations."""
    grid = {"weights.w_migration": [0.0, 0.25, 0.5, 1.0], "seed": SEEDS}
    rows = sweep(load_scenario("desk"), grid)
    assert all(row.ok for row in rows)
    assert summarize_trend(rows, "weights.w_migration", "migrations") <= 0.0


def test_forecast_error_costs_energy() -> None:
    """Noisier forecasts should not make the GA cheaper, in 4 of 5 seeds per pair."""
    desk = load_scenario("desk")
    sigmas = [0.0, 0.1, 0.3]
    costs = {
        sigma: [
            run_simulation(
                desk.with_overrides([f"seed={seed}", f"forecast.sigma={sigma}"])
            ).total_energy_cost_usd
            for seed in SEEDS
        ]
        for sigma in sigmas
    }
    for low, high in zip(sigmas, sigmas[1:]):
        ordered = sum(a <= b for a, b in zip(costs[low], costs[high]))
        assert ordered >= 4
