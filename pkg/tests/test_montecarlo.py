import csv
import json

import numpy as np
import pytest

from conftest import random_net, random_strategy
from sigpower.core import SignedNetwork, utilities
from sigpower.dynamics import run_dynamics
from sigpower.metrics import gini
from sigpower.montecarlo import (
    SurvivalConfig,
    SweepConfig,
    best_response,
    estimate_survival,
    run_seed,
    survival_chain,
    sweep,
)
from sigpower.rows import BudgetExceeded, composition_count, compositions
from sigpower.static_ne import verify_equilibrium

PAIR = SignedNetwork.fully_antagonistic(2)
TRI = SignedNetwork.fully_antagonistic(3)


def enumerated_best(net, p, X, i, variant):
    support = [i, *net.neighbors[i]]
    best = -1
    for comp in compositions(int(p[i]), len(support)):
        Y = X.copy()
        Y[i] = 0
        Y[i, support] = comp
        best = max(best, int(utilities(net, Y, variant)[i]))
    return best


def test_best_response_pair():
    p = np.array([3, 2])
    X = np.array([[3, 0], [2, 0]])
    row, val = best_response(PAIR, p, X, 0, budget=0)
    assert val == enumerated_best(PAIR, p, X, 0, "survival") == 2
    Y = X.copy()
    Y[0] = row
    assert utilities(PAIR, Y, "survival")[0] == 2


def test_best_response_isolated():
    net = SignedNetwork.isolated(3)
    row, _ = best_response(net, [2, 4, 1], np.diag([2, 4, 1]), 1)
    assert row.tolist() == [0, 4, 0]


def test_best_response_hopeless_node():
    # node 0 is attacked by 5 and has 1 unit: every row leaves it dangerous
    p = np.array([1, 5])
    X = np.array([[1, 0], [5, 0]])
    _, val = best_response(PAIR, p, X, 0)
    assert val == 0


@pytest.mark.parametrize("variant", ["survival", "static", "dynamic"])
def test_knapsack_matches_enumeration(variant):
    rng = np.random.default_rng(11)
    checked = 0
    while checked < 500:
        n = int(rng.integers(1, 7))
        net = random_net(rng, n, rng.random(), rng.random())
        p = rng.integers(0, 7, size=n)
        X = random_strategy(net, p, rng)
        i = int(rng.integers(n))
        if composition_count(int(p[i]), 1 + len(net.neighbors[i])) > 10**4:
            continue
        row, val = best_response(net, p, X, i, variant, budget=0, rng=rng)
        assert row.sum() == p[i]
        Y = X.copy()
        Y[i] = row
        assert utilities(net, Y, variant)[i] == val == enumerated_best(net, p, X, i, variant)
        checked += 1


def test_all_friends_always_survive():
    rep = estimate_survival(SignedNetwork.all_friends(4), [3, 1, 4, 1], SurvivalConfig(1000, 50, seed=1))
    assert rep.likelihood.tolist() == [1.0] * 4


def test_dominant_country_always_survives():
    rep = estimate_survival(TRI, [5, 1, 1], SurvivalConfig(10_000, 200, seed=0))
    assert rep.likelihood[0] == 1.0
    assert rep.tally["safe"].tolist() == [200, 0, 0]


def test_equal_pair_regression():
    rep = estimate_survival(PAIR, [1, 1], SurvivalConfig(10_000, 200, seed=0))
    assert rep.likelihood.tolist() == [1.0, 1.0]
    assert rep.tally["precarious"].tolist() == [200, 200]


def test_likelihood_definition_and_columns(tmp_path):
    rng = np.random.default_rng(3)
    net = random_net(rng, 5, 0.8, 0.6)
    rep = estimate_survival(net, [3, 1, 2, 4, 2], SurvivalConfig(2000, 40, seed=9))
    assert np.allclose(rep.likelihood, (rep.tally["safe"] + rep.tally["precarious"]) / 40)
    assert np.all(rep.tally["safe"] + rep.tally["precarious"] + rep.tally["dangerous"] == 40)
    rep.to_csv(tmp_path / "r.csv")
    rows = list(csv.DictReader(open(tmp_path / "r.csv")))
    assert [int(r["survives"]) for r in rows] == [int(v > 0.5) for v in rep.likelihood]
    assert json.loads(json.dumps(rep.to_json()))["config"]["runs"] == 40


def test_reproducible_and_order_free():
    rng = np.random.default_rng(5)
    net = random_net(rng, 5, 0.9, 0.7)
    p = [2, 3, 1, 2, 2]
    a = estimate_survival(net, p, SurvivalConfig(500, 30, seed=2))
    b = estimate_survival(net, p, SurvivalConfig(500, 30, seed=2))
    c = estimate_survival(net, p, SurvivalConfig(500, 30, seed=2, workers=2))
    assert np.array_equal(a.likelihood, b.likelihood)
    assert np.array_equal(a.likelihood, c.likelihood)
    # tallies do not depend on which runs go first
    seqs = [run_seed(2, r) for r in range(30)]
    fwd = [survival_chain(net, p, 500, 1000, s)[1] for s in seqs]
    rev = [survival_chain(net, p, 500, 1000, s)[1] for s in reversed(seqs)]
    assert np.array_equal(np.sum(np.array(fwd) >= 0, axis=0), np.sum(np.array(rev) >= 0, axis=0))


def test_final_states_admit_no_improvement():
    rng = np.random.default_rng(8)
    checked = 0
    for run in range(200):
        n = int(rng.integers(2, 6))
        net = random_net(rng, n, 0.8, 0.6)
        p = rng.integers(0, 4, size=n)
        if run % 20:
            continue
        X, _, absorbed = survival_chain(net, p, 10_000, 1000, run_seed(0, run))
        if not absorbed:
            continue
        try:
            assert verify_equilibrium(net, p, X, "survival") is None
        except BudgetExceeded:
            continue
        checked += 1
    assert checked >= 5


def test_config_validation():
    with pytest.raises(ValueError):
        SurvivalConfig(runs=0)
    with pytest.raises(ValueError):
        SweepConfig(q_e=(0.5, 1.5))


def test_sweep_without_hostility_reaches_cap_from_diagonal_start():
    # starting from diag(p) nobody can ever be attacked, so everyone climbs to K
    cfg = SweepConfig(n=8, q_e=(0.0, 0.8), q_n=(0.0,), K=6, sims_per_cell=3, seed=1, initial="diagonal")
    assert sweep(cfg).grid("mean_power").ravel().tolist() == [6.0, 6.0]


def test_sweep_random_start_can_freeze_a_giver():
    # a country that handed all its power to a friend stays precarious: the
    # friend-support cap forbids taking it back and no power is gained
    net = SignedNetwork.all_friends(2)
    _, rep = run_dynamics(net, [2, 3], [[0, 2], [0, 3]], 6, np.random.default_rng(0))
    assert rep.converged and rep.p.tolist() == [2, 6]


def test_small_sweep(tmp_path):
    cfg = SweepConfig(n=8, q_e=(0.0, 0.8), q_n=(0.0, 1.0), K=6, sims_per_cell=3, steps_per_sim=20_000, seed=1)
    rep = sweep(cfg)
    power = rep.grid("mean_power")
    assert power.shape == (2, 2)
    # isolated countries are always safe and climb to the cap
    assert power[0].tolist() == [6.0, 6.0]
    assert rep.grid("gini")[0].tolist() == [0.0, 0.0]
    assert power[1, 1] < 6.0
    assert all(r["converged"] for r in rep.records)
    paths = rep.write(tmp_path / "grid.csv")
    assert len(paths) == 6
    rows = list(csv.DictReader(open(tmp_path / "grid.csv")))
    assert len(rows) == 12
    side = json.loads((tmp_path / "grid.json").read_text())
    assert side["config"]["n"] == 8
    again = sweep(cfg)
    assert [r["mean_power"] for r in again.records] == [r["mean_power"] for r in rep.records]


def test_sweep_records_use_gini_of_final_powers():
    cfg = SweepConfig(n=6, q_e=(1.0,), q_n=(1.0,), K=5, sims_per_cell=2, seed=3)
    for r in sweep(cfg).records:
        assert 0.0 <= r["gini"] < 1.0
        assert 0.0 <= r["mean_power"] <= 5.0
    assert gini([5] * 6) == 0.0
