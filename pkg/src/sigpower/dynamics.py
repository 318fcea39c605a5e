"""Co-evolution of powers and strategies under random sequential activation.

At each step one country ``i`` is drawn uniformly. Its power moves one unit
toward ``K`` if it is safe, toward 0 if it is dangerous, and stays put if it
is precarious. It then redraws its row uniformly from the first non-empty of

* rows that raise its utility,
* rows that keep its utility while only retracting attacks,
* rows that keep its utility,
* all feasible rows,

where feasibility caps each entry ``x_ij`` at its previous value when ``j``
already counts in ``i``'s favour and at the previous value plus ``|s_j|``
otherwise. By default ``x_ii`` is uncapped and absorbs whatever power is
left, so every row allocates the country's full current power. With
``cap_self=True`` the self entry is capped like the others and the row
allocates ``min(p_i, sum of caps)``.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .core import SignedNetwork, State, as_powers, as_strategy, support_scores
from .rows import RowView, best_row, bounded_compositions, count_bounded, row_view, sample_bounded

__all__ = [
    "update_power",
    "FeasibleRows",
    "feasible_rows",
    "sample_update",
    "aid",
    "precarious_count",
    "is_steady_state",
    "StepRecord",
    "Trajectory",
    "ConvergenceReport",
    "run_dynamics",
    "random_initial_state",
    "ENUM_LIMIT",
]

ENUM_LIMIT = 100_000
SAMPLE_TRIES = 32


def update_power(p, s_i: int, i: int, K: int) -> np.ndarray:
    """Power after activating ``i`` whose support score is ``s_i``."""
    p = np.array(p, dtype=np.int64)
    if s_i > 0:
        p[i] = min(K, p[i] + 1)
    elif s_i < 0:
        p[i] = max(0, p[i] - 1)
    return p


def aid(net: SignedNetwork, X) -> int:
    """Total support sent between distinct friends."""
    X = np.asarray(X)
    off = net.friend_mask & ~np.eye(net.n, dtype=bool)
    return int(X[off].sum())


def precarious_count(s, nodes=None) -> int:
    s = np.asarray(s)
    if nodes is not None:
        s = s[list(nodes)]
    return int(np.count_nonzero(s == 0))


@dataclass(frozen=True)
class FeasibleRows:
    """Rows node ``i`` may move to.

    Entries follow ``view`` order: ``x_ii`` first, then ``view.nbrs``. Each
    neighbour entry lies in ``[0, caps]``, the row sums to ``total`` and the
    self entry lies in ``[0, self_cap]``.
    """

    view: RowView
    current: np.ndarray
    caps: np.ndarray
    self_cap: int
    total: int

    @property
    def sum_range(self) -> tuple[int, int]:
        """Allowed range for the sum of the neighbour entries."""
        return max(0, self.total - self.self_cap), self.total

    def contains(self, row) -> bool:
        row = np.asarray(row)
        return bool(
            row.sum() == self.total
            and 0 <= row[0] <= self.self_cap
            and np.all(row[1:] >= 0)
            and np.all(row[1:] <= self.caps)
        )

    def full_row_contains(self, full_row) -> bool:
        full_row = np.asarray(full_row)
        others = np.ones(len(full_row), dtype=bool)
        others[self.view.node] = False
        others[self.view.nbrs] = False
        return not np.any(full_row[others]) and self.contains(self.view.from_full(full_row))

    def count(self) -> int:
        lo, hi = self.sum_range
        if lo > hi:
            return 0
        return int(sum(count_bounded(self.caps, hi)[lo : hi + 1]))

    def enumerate(self) -> np.ndarray:
        lo, hi = self.sum_range
        nb = bounded_compositions(self.caps, lo, hi)
        return np.hstack([(self.total - nb.sum(axis=1))[:, None], nb]).astype(np.int64)

    def sample(self, rng: np.random.Generator) -> np.ndarray | None:
        lo, hi = self.sum_range
        nb = sample_bounded(self.caps, lo, hi, rng)
        if nb is None:
            return None
        return np.concatenate(([self.total - nb.sum()], nb))

    def retract_mask(self, rows: np.ndarray) -> np.ndarray:
        """Rows that never raise an attack and leave friend support untouched."""
        enemy = self.view.sign < 0
        r0 = self.current[1:]
        nb = rows[:, 1:]
        return np.all(np.where(enemy, nb <= r0, nb == r0), axis=1)


def feasible_rows(
    net: SignedNetwork, X, s, i: int, power: int, cap_self: bool = False
) -> FeasibleRows:
    """Feasible rows for node ``i`` given the previous matrix ``X``, its
    support scores ``s`` and the freshly updated power of ``i``."""
    X = np.asarray(X)
    view = row_view(net, X, i, s)
    r0 = view.from_full(X[i])
    s_nbr = s[view.nbrs]
    in_favour = np.where(view.sign > 0, s_nbr >= 0, s_nbr <= 0)
    caps = np.where(in_favour, r0[1:], r0[1:] + np.abs(s_nbr)).astype(np.int64)
    if cap_self:
        self_cap = int(r0[0] if s[i] >= 0 else r0[0] + abs(int(s[i])))
        total = min(int(power), self_cap + int(caps.sum()))
    else:
        self_cap = int(power)
        total = int(power)
    return FeasibleRows(view, r0, caps, self_cap, total)


def _retraction_box(fs: FeasibleRows, u0: int, rng: np.random.Generator) -> np.ndarray | None:
    """Uniform draw from rows that only retract attacks and keep utility; None if none exist."""
    view, r0 = fs.view, fs.current
    enemy = view.sign < 0
    theta = view.thresholds
    good0 = enemy & (r0[1:] >= theta)
    lo = np.where(good0, theta, 0)
    lo = np.where(enemy, lo, r0[1:])
    hi = r0[1:].copy()
    # utility of the box's best corner must reach u0 for the box to be admissible
    corner = np.concatenate(([0], hi))
    corner[0] = fs.total - hi.sum()
    fixed_ok = view.utilities(corner[None, :], "dynamic")[0] >= u0
    if not fixed_ok:
        return None
    s_lo, s_hi = fs.sum_range
    base = int(lo.sum())
    y = sample_bounded(hi - lo, max(0, s_lo - base), s_hi - base, rng)
    if y is None:
        return None
    nb = lo + y
    row = np.concatenate(([fs.total - nb.sum()], nb))
    if view.utilities(row[None, :], "dynamic")[0] < u0:
        return None
    return row


def sample_update(
    fs: FeasibleRows,
    u0: int,
    rng: np.random.Generator,
    enum_limit: int = ENUM_LIMIT,
    tries: int = SAMPLE_TRIES,
) -> tuple[np.ndarray, str]:
    """Draw node ``i``'s next row (in view order) and name the set it came from.

    Small sets are enumerated and sampled exactly. Larger ones use exact
    draws for the retraction set and for the full set, and rejection
    sampling with a constructive fallback for the two utility-level sets.
    """
    view = fs.view
    if fs.count() <= enum_limit:
        rows = fs.enumerate()
        u = view.utilities(rows, "dynamic")
        for label, mask in (
            ("improve", u > u0),
            ("retract", (u >= u0) & fs.retract_mask(rows)),
            ("keep", u == u0),
        ):
            idx = np.flatnonzero(mask)
            if idx.size:
                return rows[idx[int(rng.integers(idx.size))]], label
        return rows[int(rng.integers(len(rows)))], "any"

    constructive = None
    u_star = None
    if fs.self_cap >= fs.total:
        constructive, u_star = best_row(view, fs.total, "dynamic", fs.caps, rng, spread=True)
    if u_star is None or u_star > u0:
        for _ in range(tries):
            r = fs.sample(rng)
            if r is not None and view.utilities(r[None, :], "dynamic")[0] > u0:
                return r, "improve"
        if u_star is not None:
            return constructive, "improve"
    r = _retraction_box(fs, u0, rng)
    if r is not None:
        return r, "retract"
    if u_star is None or u_star == u0:
        for _ in range(tries):
            r = fs.sample(rng)
            if r is not None and view.utilities(r[None, :], "dynamic")[0] == u0:
                return r, "keep"
        if u_star is not None:
            return constructive, "keep"
    r = fs.sample(rng)
    if r is None:
        # unreachable: shrinking the current row onto the caps is always feasible
        r = fs.current.copy()
    return r, "any"


def _is_singleton_at_current(fs: FeasibleRows, u0: int, enum_limit: int) -> bool:
    if not fs.contains(fs.current):
        return False
    if fs.count() <= enum_limit:
        rows = fs.enumerate()
        u = fs.view.utilities(rows, "dynamic")
        for mask in (u > u0, (u >= u0) & fs.retract_mask(rows), u == u0):
            idx = np.flatnonzero(mask)
            if idx.size:
                return idx.size == 1 and np.array_equal(rows[idx[0]], fs.current)
        return len(rows) == 1
    if fs.self_cap < fs.total:
        return False
    _, u_star = best_row(fs.view, fs.total, "dynamic", fs.caps)
    if u_star > u0:
        return False
    view = fs.view
    theta = view.thresholds
    r0 = fs.current[1:]
    enemy = view.sign < 0
    # the retraction set is a box; it is a single point iff every enemy entry is pinned
    pinned = np.where(r0 >= theta, r0 == theta, r0 == 0)
    return bool(np.all(pinned[enemy]))


def is_steady_state(
    net: SignedNetwork, p, X, K: int, cap_self: bool = False, enum_limit: int = ENUM_LIMIT
) -> bool:
    """True iff activating any node leaves both powers and matrix unchanged."""
    p = as_powers(p, K)
    X = np.asarray(X, dtype=np.int64)
    s = support_scores(net, X)
    for i in range(net.n):
        if update_power(p, int(s[i]), i, K)[i] != p[i]:
            return False
        fs = feasible_rows(net, X, s, i, int(p[i]), cap_self)
        u0 = int(fs.view.utilities(fs.current[None, :], "dynamic")[0])
        if not _is_singleton_at_current(fs, u0, enum_limit):
            return False
    return True


@dataclass
class StepRecord:
    t: int
    node: int
    p: np.ndarray
    X: np.ndarray | None
    states: str
    u_before: int
    u_after: int
    aid: int
    rule: str
    lemma_ok: bool


@dataclass
class Trajectory:
    records: list[StepRecord] = field(default_factory=list)

    def __len__(self):
        return len(self.records)

    def to_csv(self, path) -> None:
        with open(path, "w", newline="", encoding="utf-8") as fh:
            w = csv.writer(fh)
            w.writerow(["t", "node", "states", "p", "u_before", "u_after", "aid", "rule"])
            for r in self.records:
                w.writerow([r.t, r.node, r.states, " ".join(map(str, r.p)), r.u_before, r.u_after, r.aid, r.rule])

    def dump_matrices(self, path, every: int = 1) -> None:
        """Write the recorded matrices of every ``every``-th step as JSON."""
        out = [
            {"t": r.t, "p": r.p.tolist(), "X": r.X.tolist()}
            for r in self.records
            if r.X is not None and r.t % every == 0
        ]
        Path(path).write_text(json.dumps(out))


@dataclass
class ConvergenceReport:
    converged: bool
    steps: int
    p: np.ndarray
    X: np.ndarray
    states: list[State]
    lemma_violations: int

    @property
    def status(self) -> str:
        return "converged" if self.converged else "max_steps"

    @property
    def dangerous(self) -> list[int]:
        return [i for i, st in enumerate(self.states) if st is State.DANGEROUS]


def _state_string(s: np.ndarray) -> str:
    return "".join("S" if v > 0 else "P" if v == 0 else "D" for v in s)


def run_dynamics(
    net: SignedNetwork,
    p0,
    X0,
    K: int,
    rng: np.random.Generator,
    max_steps: int = 100_000,
    stall_window: int | None = None,
    cap_self: bool = False,
    enum_limit: int = ENUM_LIMIT,
    record: bool = True,
    keep_matrices: bool = True,
) -> tuple[Trajectory, ConvergenceReport]:
    """Simulate until a steady state is certified or ``max_steps`` is hit.

    A steady-state check runs once ``stall_window`` (default ``3n``)
    consecutive activations changed nothing and every node was among them.
    """
    p = as_powers(p0, K).copy()
    X = as_strategy(net, X0, p, K).copy()
    n = net.n
    stall_window = 3 * n if stall_window is None else stall_window
    s = support_scores(net, X)
    traj = Trajectory()
    if record:
        traj.records.append(
            StepRecord(0, -1, p.copy(), X.copy() if keep_matrices else None, _state_string(s), 0, 0, aid(net, X), "init", True)
        )
    quiet = 0
    quiet_nodes: set[int] = set()
    violations = 0
    converged = False
    t = 0
    while t < max_steps:
        t += 1
        i = int(rng.integers(n))
        s_i = int(s[i])
        new_pi = int(update_power(p, s_i, i, K)[i])
        fs = feasible_rows(net, X, s, i, new_pi, cap_self)
        u0 = int(fs.view.utilities(fs.current[None, :], "dynamic")[0])
        row, rule = sample_update(fs, u0, rng, enum_limit)
        u1 = int(fs.view.utilities(row[None, :], "dynamic")[0])
        changed = new_pi != p[i] or not np.array_equal(row, fs.current)
        lemma_ok = True
        if changed:
            s_prev = s
            full = fs.view.to_full(row)
            delta = full - X[i]
            X[i] = full
            p[i] = new_pi
            s = s.copy()
            nb = fs.view.nbrs
            s[nb] += fs.view.sign * delta[nb]
            s[i] += delta[i] + int((delta[nb] * (fs.view.sign < 0)).sum())
            if s_i >= 0:
                others = np.ones(n, dtype=bool)
                others[i] = False
                gain_p = int(np.count_nonzero(s[others] == 0)) - int(np.count_nonzero(s_prev[others] == 0))
                lemma_ok = gain_p >= u1 - u0
                violations += not lemma_ok
            quiet, quiet_nodes = 0, set()
        else:
            quiet += 1
            quiet_nodes.add(i)
        if record:
            traj.records.append(
                StepRecord(
                    t, i, p.copy(), X.copy() if keep_matrices else None, _state_string(s), u0, u1, aid(net, X), rule, lemma_ok
                )
            )
        if quiet >= stall_window and len(quiet_nodes) == n:
            if is_steady_state(net, p, X, K, cap_self, enum_limit):
                converged = True
                break
            quiet, quiet_nodes = 0, set()
    report = ConvergenceReport(
        converged, t, p.copy(), X.copy(), [State(int(v)) for v in np.sign(s)], violations
    )
    return traj, report


def random_initial_state(
    net: SignedNetwork, K: int, rng: np.random.Generator, min_power: int = 1
) -> tuple[np.ndarray, np.ndarray]:
    """Powers uniform on ``[min_power, K]`` and each row a uniform random
    weak composition of the node's power over its closed neighbourhood."""
    p = rng.integers(min_power, K + 1, size=net.n).astype(np.int64)
    X = np.zeros((net.n, net.n), dtype=np.int64)
    for i in range(net.n):
        support = [i, *net.neighbors[i]]
        k = len(support)
        # uniform weak composition via sorted bar positions
        bars = np.sort(rng.choice(int(p[i]) + k - 1, size=k - 1, replace=False)) if k > 1 else np.array([], dtype=np.int64)
        parts = np.diff(np.concatenate(([-1], bars, [p[i] + k - 1]))) - 1
        X[i, support] = parts
    return p, X
