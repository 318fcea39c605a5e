"""Single-row machinery: what happens to everyone's state when one country
rewrites its allocation while all other rows stay fixed.

Changing row ``i`` moves ``s_j`` for a neighbour ``j`` by ``+x_ij`` (friend) or
``-x_ij`` (enemy), and moves ``s_i`` by ``x_ii + sum of attacks``. Hence each
neighbour is "good" for ``i`` (friend not dangerous, enemy not safe) exactly
when ``x_ij`` reaches a per-neighbour threshold, which turns best responses
into a small two-budget knapsack.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations
from math import comb

import numpy as np

from .core import SignedNetwork, UTILITY_VARIANTS

__all__ = [
    "RowView",
    "row_view",
    "compositions",
    "bounded_compositions",
    "count_bounded",
    "sample_bounded",
    "composition_count",
    "BudgetExceeded",
    "best_row",
]


class BudgetExceeded(RuntimeError):
    """Raised when exhaustive row enumeration would exceed the allowed budget."""


@dataclass(frozen=True)
class RowView:
    """State of play around node ``i`` with row ``i`` removed.

    ``nbrs`` lists the neighbours (excluding ``i``); ``sign`` is +1 for a friend
    and -1 for an enemy; ``base`` holds their support scores without ``i``'s
    contribution and ``base_self`` the same for ``i``.
    """

    node: int
    n: int
    nbrs: np.ndarray
    sign: np.ndarray
    base: np.ndarray
    base_self: int

    @property
    def degree(self) -> int:
        return len(self.nbrs)

    @property
    def thresholds(self) -> np.ndarray:
        """Minimum ``x_ij`` making neighbour ``j`` good for ``i``."""
        return np.maximum(0, -self.sign * self.base)

    def scores(self, rows: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """Support scores of ``i`` and of its neighbours for each candidate row.

        ``rows`` has shape ``(m, 1 + degree)``: column 0 is ``x_ii`` and the
        rest follow ``nbrs``.
        """
        rows = np.atleast_2d(rows)
        attack = (rows[:, 1:] * (self.sign < 0)).sum(axis=1)
        s_self = self.base_self + rows[:, 0] + attack
        s_nbr = self.base + rows[:, 1:] * self.sign
        return s_self, s_nbr

    def utilities(self, rows: np.ndarray, variant: str = "static") -> np.ndarray:
        if variant not in UTILITY_VARIANTS:
            raise ValueError(f"unknown utility variant {variant!r}")
        s_self, s_nbr = self.scores(rows)
        good = np.where(self.sign > 0, s_nbr >= 0, s_nbr <= 0).sum(axis=1)
        alive = s_self >= 0
        if variant == "survival":
            return np.where(alive, 1 + good, 0)
        return (self.n + 1) * alive + good

    def to_full(self, row: np.ndarray) -> np.ndarray:
        full = np.zeros(self.n, dtype=np.int64)
        full[self.node] = row[0]
        full[self.nbrs] = row[1:]
        return full

    def from_full(self, full_row) -> np.ndarray:
        full_row = np.asarray(full_row, dtype=np.int64)
        return np.concatenate(([full_row[self.node]], full_row[self.nbrs]))


def row_view(net: SignedNetwork, X: np.ndarray, i: int, s: np.ndarray | None = None) -> RowView:
    """Build the :class:`RowView` of node ``i``; ``s`` may pass precomputed support scores."""
    from .core import support_scores

    if s is None:
        s = support_scores(net, X)
    nbrs = np.asarray(net.neighbors[i], dtype=np.int64)
    sign = net.sign_matrix[i, nbrs] if len(nbrs) else np.zeros(0, dtype=np.int64)
    row_nbr = X[i, nbrs]
    base = s[nbrs] - sign * row_nbr
    attack = int((row_nbr * (sign < 0)).sum())
    base_self = int(s[i] - X[i, i] - attack)
    return RowView(int(i), net.n, nbrs, np.asarray(sign, dtype=np.int64), np.asarray(base, dtype=np.int64), base_self)


# -- compositions ------------------------------------------------------------


def composition_count(total: int, parts: int) -> int:
    """Number of weak compositions of ``total`` into ``parts`` parts."""
    if parts == 0:
        return int(total == 0)
    return comb(total + parts - 1, parts - 1)


@lru_cache(maxsize=256)
def _compositions(total: int, parts: int) -> np.ndarray:
    if parts == 0:
        out = np.zeros((1 if total == 0 else 0, 0), dtype=np.int64)
    elif parts == 1:
        out = np.array([[total]], dtype=np.int64)
    else:
        # stars and bars: bar positions among total + parts - 1 slots
        slots = total + parts - 1
        bars = np.array(list(combinations(range(slots), parts - 1)), dtype=np.int64).reshape(-1, parts - 1)
        padded = np.hstack([np.full((len(bars), 1), -1), bars, np.full((len(bars), 1), slots)])
        out = np.diff(padded, axis=1) - 1
    out.setflags(write=False)
    return out


def compositions(total: int, parts: int, budget: int | None = None) -> np.ndarray:
    """All weak compositions of ``total`` into ``parts`` non-negative parts.

    Rows are in lexicographically descending order of the first part.
    Raises :class:`BudgetExceeded` if there are more than ``budget`` of them.
    """
    count = composition_count(total, parts)
    if budget is not None and count > budget:
        raise BudgetExceeded(f"{count} compositions of {total} into {parts} parts exceed budget {budget}")
    return _compositions(int(total), int(parts))


def _count_dtype(parts: int, total: int):
    # every count is at most the number of weak compositions with sum <= total
    return np.int64 if composition_count(max(total, 0), parts + 1) < 2**62 else object


def count_bounded(caps, total: int) -> np.ndarray:
    """``out[r]`` = number of vectors ``0 <= x <= caps`` with ``sum(x) == r``, for ``r <= total``."""
    ways = np.zeros(total + 1, dtype=_count_dtype(len(caps), total))
    ways[0] = 1
    for c in caps:
        c = int(min(c, total))
        if c <= 0:
            continue
        csum = np.concatenate(([0], np.cumsum(ways)))
        idx = np.arange(total + 1)
        ways = csum[idx + 1] - csum[np.maximum(idx - c, 0)]
    return ways


def bounded_compositions(caps, lo: int, hi: int) -> np.ndarray:
    """All integer vectors ``0 <= x <= caps`` with ``lo <= sum(x) <= hi``."""
    caps = [int(c) for c in caps]
    rows = np.zeros((1, 0), dtype=np.int64)
    sums = np.zeros(1, dtype=np.int64)
    for c in caps:
        c = max(0, min(c, hi))
        vals = np.arange(c + 1, dtype=np.int64)
        new_sums = (sums[:, None] + vals[None, :]).ravel()
        keep = new_sums <= hi
        rows = np.hstack([np.repeat(rows, c + 1, axis=0), np.tile(vals, len(rows))[:, None]])[keep]
        sums = new_sums[keep]
    keep = sums >= lo
    return rows[keep]


def sample_bounded(caps, lo: int, hi: int, rng: np.random.Generator) -> np.ndarray | None:
    """Uniform sample of ``0 <= x <= caps`` with ``lo <= sum(x) <= hi``; None if the set is empty."""
    lo = max(0, int(lo))
    if hi < lo:
        return None
    caps = [max(0, min(int(c), hi)) for c in caps]
    d = len(caps)
    # suffix[k][r]: ways for entries k.. to sum to exactly r
    suffix = [None] * (d + 1)
    suffix[d] = np.zeros(hi + 1, dtype=_count_dtype(d, hi))
    suffix[d][0] = 1
    for k in range(d - 1, -1, -1):
        nxt = suffix[k + 1]
        csum = np.concatenate(([0], np.cumsum(nxt)))
        idx = np.arange(hi + 1)
        suffix[k] = csum[idx + 1] - csum[np.maximum(idx - caps[k], 0)]
    weights = suffix[0][lo : hi + 1]
    total_ways = int(weights.sum())
    if total_ways == 0:
        return None
    target = lo + _pick(weights, total_ways, rng)
    out = np.zeros(d, dtype=np.int64)
    rem = target
    for k in range(d):
        top = min(caps[k], rem)
        w = suffix[k + 1][rem - np.arange(top + 1)]
        x = _pick(w, int(w.sum()), rng)
        out[k] = x
        rem -= x
    return out


def _pick(weights, total: int, rng: np.random.Generator) -> int:
    # exact integer weights may exceed float range; draw an integer uniformly
    u = int(rng.integers(0, 2**62)) * total // 2**62 if total > 2**53 else int(rng.integers(0, total))
    return int(np.searchsorted(np.cumsum(weights), u, side="right"))


# -- best responses ----------------------------------------------------------


def best_row(
    view: RowView,
    total: int,
    variant: str = "static",
    caps=None,
    rng: np.random.Generator | None = None,
    spread: bool = False,
) -> tuple[np.ndarray, int]:
    """A utility-maximising row for ``view.node`` and its utility.

    The row allocates exactly ``total``: neighbour entries obey ``caps`` (no
    bound if None) and ``x_ii`` takes whatever is left. Each good neighbour
    costs its threshold; friends' support additionally counts against the
    slack that keeps ``i`` itself non-dangerous. The maximum is found by
    trying every number of cheapest friends and filling with cheapest
    enemies. Ties among equally cheap neighbours and among optimal
    friend/enemy splits are broken with ``rng`` (by id when None). With
    ``spread`` the leftover power is scattered at random over spare enemy
    capacity instead of all going to ``x_ii``; attacks never lower ``i``'s
    own score, so the utility is unchanged or higher.
    """
    if variant not in UTILITY_VARIANTS:
        raise ValueError(f"unknown utility variant {variant!r}")
    d = view.degree
    caps = np.full(d, total, dtype=np.int64) if caps is None else np.minimum(np.asarray(caps, dtype=np.int64), total)
    theta = view.thresholds
    ok = theta <= caps
    order = np.arange(d)
    if rng is not None:
        order = rng.permutation(d)
    order = order[np.argsort(theta[order], kind="stable")]
    friends = [k for k in order if ok[k] and view.sign[k] > 0]
    enemies = [k for k in order if ok[k] and view.sign[k] < 0]
    f_cost = np.concatenate(([0], np.cumsum(theta[friends]))) if friends else np.array([0])
    e_cost = np.concatenate(([0], np.cumsum(theta[enemies]))) if enemies else np.array([0])

    # budget beyond which friend support makes i dangerous
    slack = view.base_self + total
    alive_possible = slack >= 0
    best_val, options = -1, []
    for f in range(len(f_cost)):
        fc = int(f_cost[f])
        if fc > total or (alive_possible and fc > slack):
            break
        a = int(np.searchsorted(e_cost, total - fc, side="right")) - 1
        good = f + a
        if alive_possible:
            val = (view.n + 1) + good if variant != "survival" else 1 + good
        else:
            val = good if variant != "survival" else 0
        if val > best_val:
            best_val, options = val, [(f, a)]
        elif val == best_val:
            options.append((f, a))
    f, a = options[0] if rng is None else options[int(rng.integers(len(options)))]
    row = np.zeros(1 + d, dtype=np.int64)
    chosen = friends[:f] + enemies[:a]
    row[1 + np.asarray(chosen, dtype=np.int64)] = theta[chosen]
    left = total - int(row[1:].sum())
    if spread and rng is not None and left > 0:
        for k in rng.permutation([k for k in range(d) if view.sign[k] < 0]):
            room = int(caps[k] - row[1 + k])
            if room <= 0:
                continue
            give = int(rng.integers(0, min(room, left) + 1))
            row[1 + k] += give
            left -= give
            if left == 0:
                break
    row[0] = left
    return row, int(best_val)
