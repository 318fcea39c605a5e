"""Equilibria of fully antagonistic networks (every pair are enemies).

Three facts are covered: no equilibrium has every country safe; a country
stronger than all others combined is the unique safe country; and when no
such country exists there is an equilibrium where everyone is precarious,
built here by induction on ``n``.
"""

from __future__ import annotations

import numpy as np

from .core import SignedNetwork, State, as_powers, states

__all__ = [
    "NotFullyAntagonistic",
    "NoDominantCountry",
    "PreconditionError",
    "max_safe_check",
    "dominant_country",
    "dominant_equilibrium",
    "all_precarious_equilibrium",
]


class NotFullyAntagonistic(ValueError):
    pass


class NoDominantCountry(ValueError):
    pass


class PreconditionError(ValueError):
    pass


def _require_antagonistic(net: SignedNetwork, min_n: int = 1) -> None:
    if not net.is_fully_antagonistic():
        raise NotFullyAntagonistic("every pair of countries must be enemies")
    if net.n < min_n:
        raise NotFullyAntagonistic(f"need at least {min_n} countries, got {net.n}")


def max_safe_check(net: SignedNetwork, p, X) -> bool:
    """True iff at most ``n - 1`` countries are safe under ``X``."""
    _require_antagonistic(net, 3)
    safe = sum(1 for st in states(net, X) if st is State.SAFE)
    return safe <= net.n - 1


def dominant_country(p) -> int | None:
    """Index of the country whose power exceeds everyone else's combined, if any."""
    p = as_powers(p)
    total = int(p.sum())
    for i, pi in enumerate(p):
        if 2 * int(pi) > total:
            return i
    return None


def dominant_equilibrium(net: SignedNetwork, p) -> np.ndarray:
    """Equilibrium where the dominant country matches every other country's
    full power with an attack and keeps the rest; the others put everything
    into attacking it."""
    _require_antagonistic(net)
    p = as_powers(p)
    d = dominant_country(p)
    if d is None:
        raise NoDominantCountry("no country has more power than all the others combined")
    X = np.zeros((net.n, net.n), dtype=np.int64)
    for j in range(net.n):
        if j != d:
            X[d, j] = p[j]
            X[j, d] = p[j]
    X[d, d] = p[d] - (p.sum() - p[d])
    return X


def _check_precarious_preconditions(p: np.ndarray) -> None:
    n = len(p)
    if n < 3:
        raise PreconditionError(f"need at least 3 countries, got {n}")
    total = int(p.sum())
    for i, pi in enumerate(p):
        if 2 * int(pi) > total:
            raise PreconditionError(
                f"p[{i}] = {pi} exceeds the combined power {total - pi} of the others"
            )
    if total % 2 and np.count_nonzero(p) < 3:
        raise PreconditionError("odd total power needs at least three countries with positive power")


def _even_symmetric(q: list[int]) -> np.ndarray:
    """Symmetric zero-diagonal matrix with row sums ``q`` (even total, no
    entry above half the total). Works on the sorted powers and maps back."""
    n = len(q)
    order = sorted(range(n), key=lambda k: (q[k], k))
    s = [q[k] for k in order]
    Y = _even_sorted(s)
    X = np.zeros((n, n), dtype=np.int64)
    X[np.ix_(order, order)] = Y
    return X


def _even_sorted(p: list[int]) -> np.ndarray:
    N = len(p)
    Y = np.zeros((N, N), dtype=np.int64)
    if N == 3:
        a, b, c = p
        Y[0, 1] = Y[1, 0] = (a + b - c) // 2
        Y[0, 2] = Y[2, 0] = (a + c - b) // 2
        Y[1, 2] = Y[2, 1] = (b + c - a) // 2
        return Y
    # 0-based: top = N-1 is the strongest, hi = N-2 and mid = N-3 the next two
    top, hi, mid = N - 1, N - 2, N - 3
    below = sum(p[:top])
    if p[top] + 2 * p[mid] >= below:
        for k in range(mid):
            Y[k, top] = Y[top, k] = p[k]
        Y[mid, hi] = Y[hi, mid] = (below - p[top]) // 2
        excess = (p[top] + 2 * p[mid] - below) // 2
        # mid's remaining power goes to the strongest country
        Y[mid, top] = Y[top, mid] = excess
        Y[hi, top] = Y[top, hi] = excess + p[hi] - p[mid]
        return Y
    need = p[top] - (p[hi] - p[mid])
    acc, k = 0, 0
    while acc + p[k] < need:
        acc += p[k]
        k += 1
    aux = [0] * k + [acc + p[k] - need] + p[k + 1 : mid + 1] + [p[mid]]
    Y[:top, :top] = _even_symmetric(aux)
    for i in range(top):
        Y[i, top] = Y[top, i] = p[i] - aux[i]
    return Y


def all_precarious_equilibrium(
    net: SignedNetwork, p, rng: np.random.Generator | None = None
) -> np.ndarray:
    """Equilibrium with every country precarious.

    Requires ``n >= 3`` and ``p_i`` at most the sum of the others. With an
    even total the result is symmetric with zero diagonal. With an odd total
    the three strongest positive-power countries (ties by id) are lowered by
    one, the even case is solved and a unit 3-cycle of attacks is added back,
    which leaves every score at zero but breaks symmetry.
    ``rng`` is accepted for interface symmetry; the construction is deterministic.
    """
    _require_antagonistic(net)
    p = as_powers(p)
    if p.shape != (net.n,):
        raise ValueError("power vector length does not match the network")
    _check_precarious_preconditions(p)
    q = [int(v) for v in p]
    cycle = None
    if sum(q) % 2:
        positive = sorted((k for k in range(len(q)) if q[k] > 0), key=lambda k: (-q[k], k))
        cycle = positive[:3]
        for k in cycle:
            q[k] -= 1
    X = _even_symmetric(q)
    if cycle is not None:
        a, b, c = cycle
        X[a, b] += 1
        X[b, c] += 1
        X[c, a] += 1
    return X
