import numpy as np
import pytest
from hypothesis import given, settings

from conftest import instances, random_net, random_strategy
from sigpower.core import (
    SignedNetwork,
    State,
    as_strategy,
    prefers,
    states,
    support_score,
    support_scores,
    utilities,
    utility,
)

PAIR = SignedNetwork.fully_antagonistic(2)


def naive_scores(net, X):
    """Three sums written out node by node."""
    n = net.n
    out = []
    for i in range(n):
        own_attacks = sum(X[i, j] for j in net.enemies[i])
        support = sum(X[j, i] for j in net.friends[i])
        incoming = sum(X[j, i] for j in net.enemies[i])
        out.append(own_attacks + support - incoming)
    return np.array(out)


def test_network_invariants():
    net = SignedNetwork.from_edges(4, [(0, 1, 1), (1, 2, -1)])
    for i in range(4):
        assert i in net.friends[i]
        assert i not in net.enemies[i]
        assert not (net.friends[i] & net.enemies[i])
    assert 1 in net.friends[0] and 0 in net.friends[1]
    assert 2 in net.enemies[1] and 1 in net.enemies[2]
    assert net.neighbors[3] == ()
    assert net.n_edges == 2


def test_network_rejects_bad_edges():
    with pytest.raises(ValueError):
        SignedNetwork.from_edges(2, [(0, 0, 1)])
    with pytest.raises(ValueError):
        SignedNetwork.from_edges(2, [(0, 1, 1), (1, 0, -1)])
    with pytest.raises(ValueError):
        SignedNetwork.from_edges(2, [(0, 2, 1)])


def test_strategy_must_stay_on_neighbourhood():
    net = SignedNetwork.isolated(2)
    with pytest.raises(ValueError):
        as_strategy(net, [[0, 1], [0, 1]])
    with pytest.raises(ValueError):
        as_strategy(net, [[1, 0], [0, 1]], p=[2, 1])


def test_self_allocation_makes_safe():
    s = support_scores(PAIR, [[3, 0], [0, 2]])
    assert s[0] == 3
    assert states(PAIR, [[3, 0], [0, 2]])[0] is State.SAFE


def test_mutual_attack_scores():
    s = support_scores(PAIR, [[0, 3], [2, 0]])
    assert s.tolist() == [1, -1]
    assert states(PAIR, [[0, 3], [2, 0]]) == [State.SAFE, State.DANGEROUS]


def test_zero_matrix_everyone_precarious(rng):
    net = random_net(rng, 5)
    X = np.zeros((5, 5), dtype=int)
    assert support_scores(net, X).tolist() == [0] * 5
    assert set(states(net, X)) == {State.PRECARIOUS}


def test_static_utility_hand_example():
    assert utility(PAIR, [[3, 0], [0, 2]], 0, "static") == 3


def test_dynamic_utility_all_zero_counts_every_indicator(rng):
    net = random_net(rng, 6)
    X = np.zeros((6, 6), dtype=int)
    for i in range(6):
        assert utility(net, X, i, "dynamic") == 6 + len(net.friends[i]) + len(net.enemies[i])


def test_survival_utility_zero_when_dangerous():
    assert utility(PAIR, [[0, 3], [2, 0]], 1, "survival") == 0


def test_unknown_variant_rejected():
    with pytest.raises(ValueError):
        utility(PAIR, [[0, 0], [0, 0]], 0, "bogus")


def test_static_and_dynamic_agree_on_random_instances():
    rng = np.random.default_rng(7)
    for _ in range(1000):
        n = int(rng.integers(1, 9))
        net = random_net(rng, n, rng.random(), rng.random())
        p = rng.integers(0, 7, size=n)
        X = random_strategy(net, p, rng)
        assert np.array_equal(utilities(net, X, "static"), utilities(net, X, "dynamic"))
        i = int(rng.integers(n))
        assert utility(net, X, i, "static") == utility(net, X, i, "dynamic")


@settings(max_examples=200, deadline=None)
@given(instances(max_n=7, max_p=6))
def test_scores_match_naive_sums(inst):
    net, p, seed = inst
    X = random_strategy(net, p, np.random.default_rng(seed))
    s = support_scores(net, X)
    assert np.array_equal(s, naive_scores(net, X))
    assert X.sum() == p.sum()
    for i, st in enumerate(states(net, X)):
        assert st is (State.SAFE if s[i] > 0 else State.PRECARIOUS if s[i] == 0 else State.DANGEROUS)
        assert support_score(net, X, i) == s[i]
    vec = utilities(net, X, "survival")
    assert [utility(net, X, i, "survival") for i in range(net.n)] == vec.tolist()


def test_prefers_safety_first():
    X = [[1, 0], [0, 0]]
    Y = [[0, 1], [2, 0]]
    # node 0: s=1 under X, s=-1 under Y
    assert prefers(PAIR, X, Y, 0) is True
    assert prefers(PAIR, Y, X, 0) is False


@settings(max_examples=100, deadline=None)
@given(instances(max_n=5, max_p=4))
def test_prefers_reflexive_and_complete(inst):
    net, p, seed = inst
    rng = np.random.default_rng(seed)
    X = random_strategy(net, p, rng)
    Y = random_strategy(net, p, rng)
    for i in range(net.n):
        assert prefers(net, X, X, i) is True
        assert prefers(net, X, Y, i) or prefers(net, Y, X, i)
