"""Signed networks, strategy matrices, country states and utilities.

Nodes are dense 0-based integers. Powers are plain integer numpy vectors and
strategy matrices are dense ``n x n`` integer arrays; the helpers
:func:`as_powers` and :func:`as_strategy` validate them.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Iterator

import numpy as np

__all__ = [
    "SignedNetwork",
    "State",
    "as_powers",
    "as_strategy",
    "support_scores",
    "support_score",
    "states",
    "state",
    "utilities",
    "utility",
    "prefers",
    "UTILITY_VARIANTS",
]

UTILITY_VARIANTS = ("static", "dynamic", "survival")


class State(enum.IntEnum):
    """Country state; the value is the sign of the support score."""

    DANGEROUS = -1
    PRECARIOUS = 0
    SAFE = 1

    @property
    def letter(self) -> str:
        return self.name[0]


@dataclass(frozen=True, eq=False)
class SignedNetwork:
    """Undirected signed graph of ``n`` countries.

    ``friends[i]`` always contains ``i`` itself; ``enemies[i]`` never does.
    Pairs that are in neither set have no relation.
    """

    n: int
    friends: tuple[frozenset[int], ...]
    enemies: tuple[frozenset[int], ...]

    def __post_init__(self):
        if self.n < 0:
            raise ValueError("n must be non-negative")
        if len(self.friends) != self.n or len(self.enemies) != self.n:
            raise ValueError("friends/enemies must have one entry per node")
        for i in range(self.n):
            f, e = self.friends[i], self.enemies[i]
            if i not in f:
                raise ValueError(f"node {i} must be its own friend")
            if i in e:
                raise ValueError(f"node {i} cannot be its own enemy")
            if f & e:
                raise ValueError(f"node {i} has nodes that are both friend and enemy")
            for j in f | e:
                if not 0 <= j < self.n:
                    raise ValueError(f"node id {j} out of range")
            for j in f:
                if i not in self.friends[j]:
                    raise ValueError(f"friendship {i}-{j} is not symmetric")
            for j in e:
                if i not in self.enemies[j]:
                    raise ValueError(f"enmity {i}-{j} is not symmetric")

    # -- construction -----------------------------------------------------

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int, int]]) -> "SignedNetwork":
        """Build from ``(i, j, sign)`` triples with sign in {+1, -1}."""
        friends = [{i} for i in range(n)]
        enemies: list[set[int]] = [set() for _ in range(n)]
        for i, j, sign in edges:
            i, j, sign = int(i), int(j), int(sign)
            if i == j:
                raise ValueError(f"self-loop on node {i}")
            if not (0 <= i < n and 0 <= j < n):
                raise ValueError(f"edge ({i}, {j}) out of range for n={n}")
            if sign == 1:
                target = friends
            elif sign == -1:
                target = enemies
            else:
                raise ValueError(f"edge sign must be +1 or -1, got {sign}")
            if j in friends[i] or j in enemies[i]:
                raise ValueError(f"duplicate edge ({i}, {j})")
            target[i].add(j)
            target[j].add(i)
        return cls(n, tuple(map(frozenset, friends)), tuple(map(frozenset, enemies)))

    @classmethod
    def from_sign_matrix(cls, signs) -> "SignedNetwork":
        """Build from a symmetric matrix with entries in {-1, 0, +1}; the diagonal is ignored."""
        a = np.asarray(signs)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise ValueError("sign matrix must be square")
        if not np.array_equal(a, a.T):
            raise ValueError("sign matrix must be symmetric")
        iu, ju = np.triu_indices(a.shape[0], 1)
        edges = [(i, j, a[i, j]) for i, j in zip(iu, ju) if a[i, j] != 0]
        return cls.from_edges(a.shape[0], edges)

    @classmethod
    def fully_antagonistic(cls, n: int) -> "SignedNetwork":
        return cls.from_edges(n, [(i, j, -1) for i in range(n) for j in range(i + 1, n)])

    @classmethod
    def all_friends(cls, n: int) -> "SignedNetwork":
        return cls.from_edges(n, [(i, j, 1) for i in range(n) for j in range(i + 1, n)])

    @classmethod
    def isolated(cls, n: int) -> "SignedNetwork":
        return cls.from_edges(n, [])

    # -- views ------------------------------------------------------------

    def edges(self) -> Iterator[tuple[int, int, int]]:
        """Yield ``(i, j, sign)`` for every edge with ``i < j``."""
        for i in range(self.n):
            for j in sorted(self.friends[i]):
                if j > i:
                    yield i, j, 1
            for j in sorted(self.enemies[i]):
                if j > i:
                    yield i, j, -1

    @property
    def n_edges(self) -> int:
        return sum(len(f) - 1 + len(e) for f, e in zip(self.friends, self.enemies)) // 2

    @cached_property
    def friend_mask(self) -> np.ndarray:
        """Boolean adjacency of friendship, diagonal included."""
        m = np.zeros((self.n, self.n), dtype=bool)
        for i, f in enumerate(self.friends):
            m[i, list(f)] = True
        m.setflags(write=False)
        return m

    @cached_property
    def enemy_mask(self) -> np.ndarray:
        m = np.zeros((self.n, self.n), dtype=bool)
        for i, e in enumerate(self.enemies):
            if e:
                m[i, list(e)] = True
        m.setflags(write=False)
        return m

    @cached_property
    def sign_matrix(self) -> np.ndarray:
        """+1 friend, -1 enemy, 0 otherwise (zero diagonal)."""
        s = self.friend_mask.astype(np.int64) - self.enemy_mask.astype(np.int64)
        np.fill_diagonal(s, 0)
        s.setflags(write=False)
        return s

    @cached_property
    def neighbors(self) -> tuple[tuple[int, ...], ...]:
        """Sorted neighbours of each node, excluding the node itself."""
        return tuple(
            tuple(sorted((self.friends[i] | self.enemies[i]) - {i})) for i in range(self.n)
        )

    def is_fully_antagonistic(self) -> bool:
        return all(len(self.enemies[i]) == self.n - 1 for i in range(self.n))

    def __eq__(self, other):
        if not isinstance(other, SignedNetwork):
            return NotImplemented
        return (self.n, self.friends, self.enemies) == (other.n, other.friends, other.enemies)

    def __hash__(self):
        return hash((self.n, self.friends, self.enemies))

    def __repr__(self):
        return f"SignedNetwork(n={self.n}, edges={list(self.edges())})"


def as_powers(p, cap: int | None = None) -> np.ndarray:
    """Validate a power vector and return it as an int64 array."""
    arr = np.asarray(p)
    if arr.ndim != 1:
        raise ValueError("power vector must be one-dimensional")
    if arr.size and not np.all(np.equal(np.mod(arr, 1), 0)):
        raise ValueError("powers must be integers")
    arr = arr.astype(np.int64)
    if np.any(arr < 0):
        raise ValueError("powers must be non-negative")
    if cap is not None:
        if cap <= 0:
            raise ValueError("power cap K must be positive")
        if np.any(arr > cap):
            raise ValueError(f"powers must not exceed the cap K={cap}")
    return arr


def as_strategy(net: SignedNetwork, X, p=None, cap: int | None = None) -> np.ndarray:
    """Validate a strategy matrix.

    Checks shape, integrality, non-negativity and that only related pairs
    carry power. With ``p`` the row sums must equal ``p``; with ``cap`` they
    must not exceed it.
    """
    arr = np.asarray(X)
    if arr.shape != (net.n, net.n):
        raise ValueError(f"strategy matrix must have shape ({net.n}, {net.n}), got {arr.shape}")
    if arr.size and not np.all(np.equal(np.mod(arr, 1), 0)):
        raise ValueError("strategy entries must be integers")
    arr = arr.astype(np.int64)
    if np.any(arr < 0):
        raise ValueError("strategy entries must be non-negative")
    related = net.friend_mask | net.enemy_mask
    if np.any(arr[~related] != 0):
        i, j = np.argwhere((arr != 0) & ~related)[0]
        raise ValueError(f"x[{i},{j}] is non-zero but {i} and {j} are unrelated")
    rows = arr.sum(axis=1)
    if p is not None:
        p = as_powers(p)
        if p.shape != (net.n,):
            raise ValueError("power vector length does not match the network")
        bad = np.flatnonzero(rows != p)
        if bad.size:
            i = bad[0]
            raise ValueError(f"row {i} sums to {rows[i]} but p[{i}] = {p[i]}")
    if cap is not None and np.any(rows > cap):
        raise ValueError(f"row sums must not exceed K={cap}")
    return arr


def _check_node(net: SignedNetwork, i: int) -> int:
    if not 0 <= i < net.n:
        raise IndexError(f"node {i} out of range for n={net.n}")
    return int(i)


def support_scores(net: SignedNetwork, X) -> np.ndarray:
    """Support score of every country: own attacks + incoming support - incoming attacks."""
    X = np.asarray(X, dtype=np.int64)
    E = net.enemy_mask
    attacks_made = (X * E).sum(axis=1)
    support_in = (X * net.friend_mask).sum(axis=0)
    attacks_in = (X * E).sum(axis=0)
    return attacks_made + support_in - attacks_in


def support_score(net: SignedNetwork, X, i: int) -> int:
    i = _check_node(net, i)
    X = np.asarray(X)
    s = sum(X[i, j] for j in net.enemies[i])
    s += sum(X[j, i] for j in net.friends[i])
    s -= sum(X[j, i] for j in net.enemies[i])
    return int(s)


def states(net: SignedNetwork, X) -> list[State]:
    return [State(int(v)) for v in np.sign(support_scores(net, X))]


def state(net: SignedNetwork, X, i: int) -> State:
    return State(int(np.sign(support_score(net, X, i))))


def _indicator_counts(net: SignedNetwork, s: np.ndarray) -> np.ndarray:
    """Per node: friends (self included) with s >= 0 plus enemies with s <= 0."""
    good_friend = (s >= 0).astype(np.int64)
    good_enemy = (s <= 0).astype(np.int64)
    return net.friend_mask.astype(np.int64) @ good_friend + net.enemy_mask.astype(np.int64) @ good_enemy


def utilities(net: SignedNetwork, X, variant: str = "static") -> np.ndarray:
    """Utility of every node under the chosen variant.

    ``static`` and ``dynamic`` are both ``n*[s_i >= 0]`` plus the number of
    friends (self included) that are not dangerous and enemies that are not
    safe. ``survival`` drops the ``n*[s_i >= 0]`` bonus and is zero for a
    dangerous node.
    """
    if variant not in UTILITY_VARIANTS:
        raise ValueError(f"unknown utility variant {variant!r}")
    s = support_scores(net, X)
    counts = _indicator_counts(net, s)
    alive = s >= 0
    if variant == "survival":
        return np.where(alive, counts, 0)
    return net.n * alive.astype(np.int64) + counts


def utility(net: SignedNetwork, X, i: int, variant: str = "static") -> int:
    if variant not in UTILITY_VARIANTS:
        raise ValueError(f"unknown utility variant {variant!r}")
    i = _check_node(net, i)
    s = support_scores(net, X)
    if variant == "dynamic":
        # sum over all j of u_ji, with u_ji = 0 for unrelated j
        total = 0
        for j in range(net.n):
            if (j in net.friends[i] and s[j] >= 0) or (j in net.enemies[i] and s[j] <= 0):
                total += 1
        return total + net.n * int(s[i] >= 0)
    count = sum(int(s[j] >= 0) for j in net.friends[i]) + sum(int(s[j] <= 0) for j in net.enemies[i])
    if variant == "survival":
        return count if s[i] >= 0 else 0
    return net.n * int(s[i] >= 0) + count


def prefers(net: SignedNetwork, X, Y, i: int) -> bool | None:
    """Whether country ``i`` weakly prefers ``X`` to ``Y``.

    Returns True when ``X >=_i Y`` holds, False when only ``Y >=_i X`` holds
    and None if neither holds. With the two defining conditions the relation
    is complete, so None is reserved and not produced in practice.
    """
    i = _check_node(net, i)
    sx, sy = support_scores(net, X), support_scores(net, Y)

    def geq(sa, sb):
        if sa[i] >= 0 and sb[i] < 0:
            return True
        if (sa[i] >= 0) == (sb[i] >= 0):
            ca = sum(int(sa[j] <= 0) for j in net.enemies[i]) + sum(int(sa[j] >= 0) for j in net.friends[i])
            cb = sum(int(sb[j] <= 0) for j in net.enemies[i]) + sum(int(sb[j] >= 0) for j in net.friends[i])
            return ca >= cb
        return False

    if geq(sx, sy):
        return True
    if geq(sy, sx):
        return False
    return None
