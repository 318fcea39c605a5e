"""Structural balance and inequality metrics.

The frustration index is the smallest number of edges that violate balance
over all two-way splits of the nodes: a friendly edge across the split or a
hostile edge inside one side.
"""

from __future__ import annotations

from collections import deque

import numpy as np

from .core import SignedNetwork

__all__ = ["frustration", "frustration_exact", "frustration_heuristic", "is_balanced", "gini", "EXACT_LIMIT"]

EXACT_LIMIT = 20
_CHUNK = 1 << 15


def _edge_arrays(net: SignedNetwork) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    e = list(net.edges())
    if not e:
        z = np.zeros(0, dtype=np.int64)
        return z, z, z
    a = np.array(e, dtype=np.int64)
    return a[:, 0], a[:, 1], a[:, 2]


def _violations(sides: np.ndarray, I, J, sign) -> np.ndarray:
    # sides holds +-1 labels, one split per row
    return ((1 - sign * sides[:, I] * sides[:, J]) // 2).sum(axis=1)


def frustration_exact(net: SignedNetwork) -> int:
    """Minimum over all ``2**(n-1)`` splits (node 0 fixed on one side)."""
    I, J, sign = _edge_arrays(net)
    if sign.size == 0:
        return 0
    n = net.n
    best = sign.size
    bits = np.arange(n - 1, dtype=np.int64)
    for start in range(0, 1 << (n - 1), _CHUNK):
        codes = np.arange(start, min(start + _CHUNK, 1 << (n - 1)), dtype=np.int64)
        sides = np.ones((codes.size, n), dtype=np.int64)
        sides[:, 1:] = 1 - 2 * ((codes[:, None] >> bits) & 1)
        best = min(best, int(_violations(sides, I, J, sign).min()))
        if best == 0:
            break
    return best


def frustration_heuristic(net: SignedNetwork, restarts: int = 50, rng: np.random.Generator | None = None) -> int:
    """Best of ``restarts`` greedy descents, each flipping the node with the
    largest gain until no single flip helps. An upper bound on the index."""
    rng = np.random.default_rng(0) if rng is None else rng
    I, J, sign = _edge_arrays(net)
    if sign.size == 0:
        return 0
    n = net.n
    A = np.zeros((n, n), dtype=np.int64)
    A[I, J] = sign
    A[J, I] = sign
    best = sign.size
    for _ in range(restarts):
        x = rng.choice(np.array([-1, 1]), size=n)
        while True:
            # flipping k changes violations by x_k * (A x)_k
            gain = x * (A @ x)
            k = int(np.argmin(gain))
            if gain[k] >= 0:
                break
            x[k] = -x[k]
        best = min(best, int(_violations(x[None, :], I, J, sign)[0]))
    return best


def frustration(
    net: SignedNetwork, exact_limit: int = EXACT_LIMIT, restarts: int = 50, rng: np.random.Generator | None = None
) -> tuple[int, str]:
    """Frustration index and ``"exact"`` or ``"approximate"``."""
    if net.n <= exact_limit:
        return frustration_exact(net), "exact"
    return frustration_heuristic(net, restarts, rng), "approximate"


def is_balanced(net: SignedNetwork) -> bool:
    """Two-colour the graph by BFS so friends share a side and enemies do not."""
    side = [0] * net.n
    sm = net.sign_matrix
    for root in range(net.n):
        if side[root]:
            continue
        side[root] = 1
        queue = deque([root])
        while queue:
            u = queue.popleft()
            for v in net.neighbors[u]:
                want = side[u] * int(sm[u, v])
                if side[v] == 0:
                    side[v] = want
                    queue.append(v)
                elif side[v] != want:
                    return False
    return True


def gini(p) -> float:
    """Population Gini coefficient; 0 when every value is 0."""
    p = np.asarray(p, dtype=float)
    if p.size == 0:
        return 0.0
    mu = p.mean()
    if mu == 0:
        return 0.0
    return float(np.abs(p[:, None] - p[None, :]).sum() / (2 * p.size**2 * mu))
