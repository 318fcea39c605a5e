import numpy as np
import pytest
from hypothesis import strategies as st

from sigpower.core import SignedNetwork
from sigpower.dynamics import random_initial_state
from sigpower.inference import WEIGHT_FLOOR, violation_coefficients
from sigpower.netgen import GenParams, generate
from sigpower.rows import compositions


def random_strategy(net, p, rng):
    """Uniform random composition of each p_i over i's closed neighbourhood."""
    X = np.zeros((net.n, net.n), dtype=np.int64)
    for i in range(net.n):
        support = [i, *net.neighbors[i]]
        X[i, support] = rng.multinomial(int(p[i]), np.full(len(support), 1 / len(support)))
    return X


def random_net(rng, n, q_e=0.6, q_n=0.5):
    edges = [
        (i, j, -1 if rng.random() < q_n else 1)
        for i in range(n)
        for j in range(i + 1, n)
        if rng.random() < q_e
    ]
    return SignedNetwork.from_edges(n, edges)


def planted_instance(seed, K=5):
    """Random instance where node 0 plays an exact best response under planted weights.

    Returns ``(net, p, X, w)``; ``w`` has length ``n`` and is zero off node 0's
    neighbourhood.
    """
    rng = np.random.default_rng(seed)
    while True:
        n = int(rng.integers(3, 7))
        net = generate(GenParams(n, 0.7, 0.5), rng)
        if len(net.neighbors[0]) >= 2:
            break
    p, X = random_initial_state(net, K, rng)
    nb = list(net.neighbors[0])
    w = np.zeros(n)
    w[nb] = rng.uniform(WEIGHT_FLOOR, 1.0, len(nb))
    support = [0, *nb]
    local = compositions(int(p[0]), len(support))
    rows = np.zeros((len(local), n), dtype=np.int64)
    rows[:, support] = local
    C = violation_coefficients(net, p, X, 0, rows)
    X[0] = rows[int(np.argmax(C @ w[nb]))]
    return net, p, X, w


@st.composite
def networks(draw, min_n=1, max_n=6):
    n = draw(st.integers(min_n, max_n))
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    signs = draw(st.lists(st.sampled_from([-1, 0, 1]), min_size=len(pairs), max_size=len(pairs)))
    return SignedNetwork.from_edges(n, [(i, j, s) for (i, j), s in zip(pairs, signs) if s])


@st.composite
def instances(draw, min_n=1, max_n=6, max_p=5):
    net = draw(networks(min_n, max_n))
    p = np.array(draw(st.lists(st.integers(0, max_p), min_size=net.n, max_size=net.n)), dtype=np.int64)
    seed = draw(st.integers(0, 2**31 - 1))
    return net, p, seed


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


# one line per acceptance criterion, printed at the end of the session
ACCEPTANCE: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE:
            terminalreporter.write_line(line)
