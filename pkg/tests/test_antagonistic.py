import numpy as np
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from sigpower.antagonistic import (
    NoDominantCountry,
    NotFullyAntagonistic,
    PreconditionError,
    all_precarious_equilibrium,
    dominant_country,
    dominant_equilibrium,
    max_safe_check,
)
from sigpower.core import SignedNetwork, State, states, support_scores
from sigpower.static_ne import verify_equilibrium

TRI = SignedNetwork.fully_antagonistic(3)


def test_max_safe_examples():
    assert max_safe_check(TRI, [1, 1, 2], all_precarious_equilibrium(TRI, [1, 1, 2]))
    assert max_safe_check(TRI, [5, 1, 1], dominant_equilibrium(TRI, [5, 1, 1]))
    assert max_safe_check(TRI, [0, 0, 0], np.zeros((3, 3), dtype=int))


def test_dominant_triangle():
    X = dominant_equilibrium(TRI, [5, 1, 1])
    assert X.tolist() == [[3, 1, 1], [1, 0, 0], [1, 0, 0]]
    # the weaker two end exactly matched, hence precarious rather than dangerous
    assert support_scores(TRI, X).tolist() == [3, 0, 0]
    assert verify_equilibrium(TRI, [5, 1, 1], X) is None


def test_dominant_other_example():
    X = dominant_equilibrium(TRI, [10, 2, 3])
    assert X[0].tolist() == [5, 2, 3]
    assert [s is State.SAFE for s in states(TRI, X)] == [True, False, False]


def test_dominant_boundary():
    assert dominant_country([4, 1, 1]) == 0
    assert dominant_country([2, 1, 1]) is None
    with pytest.raises(NoDominantCountry):
        dominant_equilibrium(TRI, [2, 1, 1])


def test_requires_antagonistic_network():
    net = SignedNetwork.from_edges(3, [(0, 1, -1), (1, 2, -1)])
    with pytest.raises(NotFullyAntagonistic):
        all_precarious_equilibrium(net, [1, 1, 2])


def test_precarious_preconditions():
    with pytest.raises(PreconditionError):
        all_precarious_equilibrium(TRI, [5, 1, 1])
    with pytest.raises(PreconditionError):
        all_precarious_equilibrium(SignedNetwork.fully_antagonistic(2), [1, 1])
    with pytest.raises(PreconditionError):
        # odd total with only two positive countries cannot host the cycle
        all_precarious_equilibrium(SignedNetwork.fully_antagonistic(4), [0, 0, 1, 2])


def test_three_node_construction():
    X = all_precarious_equilibrium(TRI, [1, 1, 2])
    assert X.tolist() == [[0, 0, 1], [0, 0, 1], [1, 1, 0]]


def test_odd_total_cycle():
    X = all_precarious_equilibrium(TRI, [1, 1, 1])
    assert X.tolist() == [[0, 1, 0], [0, 0, 1], [1, 0, 0]]
    assert support_scores(TRI, X).tolist() == [0, 0, 0]


def test_four_ones():
    net = SignedNetwork.fully_antagonistic(4)
    X = all_precarious_equilibrium(net, [1, 1, 1, 1])
    assert support_scores(net, X).tolist() == [0] * 4
    assert verify_equilibrium(net, [1] * 4, X) is None


def test_case_one_fills_every_row():
    # sorted powers where the strongest plus twice the third strongest covers the rest
    net = SignedNetwork.fully_antagonistic(4)
    X = all_precarious_equilibrium(net, [1, 2, 2, 3])
    assert X.sum(axis=1).tolist() == [1, 2, 2, 3]
    assert support_scores(net, X).tolist() == [0] * 4


@st.composite
def precarious_inputs(draw):
    n = draw(st.integers(3, 8))
    p = draw(st.lists(st.integers(0, 6), min_size=n, max_size=n))
    total = sum(p)
    assume(all(2 * v <= total for v in p))
    assume(total % 2 == 0 or sum(v > 0 for v in p) >= 3)
    return np.array(p)


@settings(max_examples=300, deadline=None)
@given(precarious_inputs())
def test_all_precarious_properties(p):
    net = SignedNetwork.fully_antagonistic(len(p))
    X = all_precarious_equilibrium(net, p)
    assert X.dtype.kind == "i" and np.all(X >= 0)
    assert np.array_equal(X.sum(axis=1), p)
    assert X.sum() == p.sum()
    assert np.all(support_scores(net, X) == 0)
    if p.sum() % 2 == 0:
        assert np.array_equal(X, X.T)
        assert not np.diag(X).any()
    if len(p) <= 6:
        assert verify_equilibrium(net, p, X) is None


@settings(max_examples=200, deadline=None)
@given(st.integers(2, 7).flatmap(lambda n: st.lists(st.integers(0, 6), min_size=n, max_size=n)))
def test_dominant_properties(p):
    p = np.array(p)
    assume(dominant_country(p) is not None)
    net = SignedNetwork.fully_antagonistic(len(p))
    X = dominant_equilibrium(net, p)
    assert np.array_equal(X.sum(axis=1), p)
    assert sum(s is State.SAFE for s in states(net, X)) == 1
    assert verify_equilibrium(net, p, X) is None
