"""Constructing and checking pure Nash equilibria of the static game.

The construction starts from ``diag(p)`` and repeatedly applies the
preferable adjustment, which keeps the matrix symmetric with power only on
the diagonal and on enemy pairs (an NSND matrix). Each accepted step adds at
least one zero to the diagonal, so at most ``n`` steps are taken.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import SignedNetwork, as_powers, as_strategy, support_scores
from .rows import BudgetExceeded, composition_count, compositions, row_view

__all__ = [
    "is_nsnd",
    "preferable_adjustment",
    "find_equilibrium",
    "potential",
    "Deviation",
    "verify_equilibrium",
    "is_equilibrium",
    "BudgetExceeded",
    "DEFAULT_BUDGET",
]

DEFAULT_BUDGET = 2_000_000


def is_nsnd(net: SignedNetwork, X) -> bool:
    """Symmetric, and non-zero only on the diagonal and between enemies."""
    X = np.asarray(X)
    if not np.array_equal(X, X.T):
        return False
    allowed = net.enemy_mask | np.eye(net.n, dtype=bool)
    return not np.any(X[~allowed])


def potential(X) -> int:
    """Number of zero diagonal entries."""
    return int(np.count_nonzero(np.diag(np.asarray(X)) == 0))


def preferable_adjustment(net: SignedNetwork, X, p, i: int, rng: np.random.Generator | None = None) -> np.ndarray:
    """Best-response rewrite of row ``i`` (and the mirrored column) of an NSND matrix.

    Each enemy ``j`` holds ``x_jj + x_ji`` units it can split between itself
    and ``i``; ``i`` matches as many of those stakes as its power allows,
    cheapest first, so those enemies end up with a zero diagonal. ``rng``
    breaks the tie when ``i`` cannot match any stake; with None the lowest id
    wins.
    """
    X = np.array(X, dtype=np.int64)
    p = as_powers(p)
    i = int(i)
    pi = int(p[i])
    enemies = sorted(net.enemies[i])
    Y = X.copy()
    if not enemies:
        Y[i, i] = pi
        return Y
    stake = {j: int(X[j, j] + X[j, i]) for j in enemies}
    total = sum(stake.values())
    low = min(stake.values())

    def give(j, amount):
        Y[i, j] = Y[j, i] = amount
        Y[j, j] = stake[j] - amount

    if pi >= total:
        Y[i, i] = pi - total
        for j in enemies:
            give(j, stake[j])
    elif pi < low:
        cands = [j for j in enemies if stake[j] == low]
        r = cands[0] if rng is None else cands[int(rng.integers(len(cands)))]
        Y[i, i] = 0
        for j in enemies:
            give(j, pi if j == r else 0)
    else:
        Y[i, i] = 0
        order = sorted(enemies, key=lambda j: (stake[j], j))
        left = pi
        for j in order:
            amount = min(stake[j], left)
            give(j, amount)
            left -= amount
    return Y


def _enemy_zero_diag(net: SignedNetwork, X: np.ndarray, i: int) -> int:
    return sum(1 for j in net.enemies[i] if X[j, j] == 0)


def find_equilibrium(
    net: SignedNetwork, p, rng: np.random.Generator | None = None, trace: list | None = None
) -> tuple[np.ndarray, int]:
    """Build a pure Nash equilibrium from ``diag(p)``.

    First a random enemy pair ``(i, j)`` with both diagonals non-zero is
    adjusted until no such pair is left. Then a random zero-diagonal node
    whose adjustment strictly increases its number of zero-diagonal enemies
    is adjusted, and pair adjustments resume. When neither
    fires the matrix is an equilibrium.

    Returns the matrix and the number of adjustments. If ``trace`` is a list,
    the potential after each adjustment is appended to it.
    """
    p = as_powers(p)
    if p.shape != (net.n,):
        raise ValueError("power vector length does not match the network")
    rng = np.random.default_rng() if rng is None else rng
    X = np.diag(p).astype(np.int64)
    pairs = [(i, j) for i in range(net.n) for j in sorted(net.enemies[i])]
    steps = 0
    if trace is not None:
        trace.append(potential(X))
    while True:
        live = [(i, j) for i, j in pairs if X[i, i] != 0 and X[j, j] != 0]
        if live:
            i, _ = live[int(rng.integers(len(live)))]
            X = preferable_adjustment(net, X, p, i, rng)
        else:
            moved = False
            for i in rng.permutation(np.flatnonzero(np.diag(X) == 0)):
                Y = preferable_adjustment(net, X, p, int(i), rng)
                if _enemy_zero_diag(net, Y, i) >= _enemy_zero_diag(net, X, i) + 1:
                    X, moved = Y, True
                    break
            if not moved:
                return X, steps
        steps += 1
        if trace is not None:
            trace.append(potential(X))


@dataclass(frozen=True)
class Deviation:
    """A unilateral row change that strictly raises ``node``'s utility."""

    node: int
    row: tuple[int, ...]
    utility_before: int
    utility_after: int

    @property
    def gain(self) -> int:
        return self.utility_after - self.utility_before


def verify_equilibrium(
    net: SignedNetwork, p, X, variant: str = "static", budget: int = DEFAULT_BUDGET
) -> Deviation | None:
    """Exhaustively look for a profitable unilateral deviation.

    Every way of splitting ``p_i`` over ``i``'s closed neighbourhood is tried
    for every node. Returns None when ``X`` is an equilibrium, otherwise the
    deviation of the first offending node with the highest utility (ties go
    to the row closest to the current one in L1 distance).
    Raises :class:`BudgetExceeded` if a node has more than ``budget`` rows.
    """
    p = as_powers(p)
    X = as_strategy(net, X, p)
    for i in range(net.n):
        parts = 1 + len(net.neighbors[i])
        if composition_count(int(p[i]), parts) > budget:
            raise BudgetExceeded(
                f"node {i}: {composition_count(int(p[i]), parts)} rows exceed budget {budget}"
            )
    s = support_scores(net, X)
    for i in range(net.n):
        view = row_view(net, X, i, s)
        rows = compositions(int(p[i]), 1 + view.degree)
        util = view.utilities(rows, variant)
        current_row = view.from_full(X[i])
        current = int(view.utilities(current_row[None, :], variant)[0])
        top = int(util.max())
        if top > current:
            best = np.flatnonzero(util == top)
            dist = np.abs(rows[best] - current_row).sum(axis=1)
            pick = rows[best[int(np.argmin(dist))]]
            return Deviation(i, tuple(int(v) for v in view.to_full(pick)), current, top)
    return None


def is_equilibrium(net: SignedNetwork, p, X, variant: str = "static", budget: int = DEFAULT_BUDGET) -> bool:
    return verify_equilibrium(net, p, X, variant, budget) is None
