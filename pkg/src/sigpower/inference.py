"""Inverse inference of how much each neighbour matters to a country.

Under weights ``w_i`` node ``i`` values a matrix as

    V_i = (sum_j w_ij) * 1{s_i >= 0}
          + sum_{friends j} w_ij * 1{s_j >= 0}
          + sum_{enemies j} w_ij * 1{s_j <= 0},

so the gain ``e_i`` of switching from the observed row to a candidate row is
linear in ``w_i``. Given an observed matrix, the weights are estimated by
minimising ``sum_k max(0, e_i(x_k, w))**2 + lam * ||w||**2`` over a finite set
of candidate rows ``x_k``, subject to ``w_ij >= 0.01`` on every neighbour.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .core import SignedNetwork, as_powers, as_strategy
from .rows import compositions, composition_count, row_view, sample_bounded

__all__ = [
    "WEIGHT_FLOOR",
    "violation",
    "violation_coefficients",
    "discretize_strategies",
    "Objective",
    "InferenceResult",
    "InferenceNotConverged",
    "infer_weights",
]

WEIGHT_FLOOR = 0.01


def _indicator_vectors(net: SignedNetwork, X: np.ndarray, i: int, rows: np.ndarray) -> np.ndarray:
    """Coefficient of each neighbour weight in ``V_i`` for each full candidate row."""
    rows = np.atleast_2d(np.asarray(rows, dtype=np.int64))
    view = row_view(net, X, i)
    local = np.hstack([rows[:, [i]], rows[:, view.nbrs]])
    s_self, s_nbr = view.scores(local)
    good = np.where(view.sign > 0, s_nbr >= 0, s_nbr <= 0)
    return (s_self >= 0)[:, None].astype(float) + good


def _check_rows(net: SignedNetwork, p: np.ndarray, i: int, rows: np.ndarray) -> None:
    support = np.zeros(net.n, dtype=bool)
    support[i] = True
    support[list(net.neighbors[i])] = True
    if np.any(rows < 0) or np.any(rows[:, ~support]) or np.any(rows.sum(axis=1) != p[i]):
        raise ValueError(f"candidate rows for node {i} must be non-negative, sum to {p[i]} and stay on its neighbourhood")


def violation_coefficients(net: SignedNetwork, p, X_obs, i: int, candidates) -> np.ndarray:
    """Matrix ``C`` with ``e_i(x_k, w) = C[k] @ w`` (``w`` over ``net.neighbors[i]``)."""
    p = as_powers(p)
    X_obs = as_strategy(net, X_obs, p)
    cand = np.atleast_2d(np.asarray(candidates, dtype=np.int64))
    _check_rows(net, p, i, cand)
    c_obs = _indicator_vectors(net, X_obs, i, X_obs[i][None, :])[0]
    return _indicator_vectors(net, X_obs, i, cand) - c_obs


def violation(net: SignedNetwork, p, X_obs, i: int, x_candidate, w_i) -> float:
    """Utility gain ``e_i`` of the candidate row over the observed one.

    ``w_i`` is either a length-``n`` vector (entries off the neighbourhood are
    ignored) or one weight per neighbour.
    """
    w_i = np.asarray(w_i, dtype=float)
    if w_i.shape == (net.n,):
        w_i = w_i[list(net.neighbors[i])]
    return float(violation_coefficients(net, p, X_obs, i, x_candidate)[0] @ w_i)


def discretize_strategies(
    net: SignedNetwork, p, i: int, n_samples: int, rng: np.random.Generator
) -> np.ndarray:
    """Distinct feasible full rows for node ``i``.

    Every row is listed when there are at most ``n_samples``. Otherwise the
    rows putting all power on a single target come first and uniform random
    rows fill the rest.
    """
    p = as_powers(p)
    support = np.array([i, *net.neighbors[i]], dtype=np.int64)
    total = int(p[i])
    parts = len(support)
    count = composition_count(total, parts)
    if count <= n_samples:
        local = np.asarray(compositions(total, parts))
    else:
        chosen = {tuple(total * np.eye(parts, dtype=np.int64)[k]) for k in range(parts)}
        ordered = list(sorted(chosen, reverse=True))
        target = max(n_samples, len(ordered))
        misses = 0
        while len(ordered) < target and misses < 50 * target:
            r = tuple(int(v) for v in sample_bounded([total] * parts, total, total, rng))
            if r in chosen:
                misses += 1
                continue
            chosen.add(r)
            ordered.append(r)
        local = np.array(ordered, dtype=np.int64)
    out = np.zeros((len(local), net.n), dtype=np.int64)
    out[:, support] = local
    return out


@dataclass(frozen=True)
class Objective:
    """``f(w) = sum_k max(0, C[k] @ w)**2 + lam * ||w||**2`` and its gradient."""

    C: np.ndarray
    lam: float = 1.0

    def value(self, w) -> float:
        e = np.maximum(0.0, self.C @ w)
        return float(e @ e + self.lam * (w @ w))

    def gradient(self, w) -> np.ndarray:
        e = np.maximum(0.0, self.C @ w)
        return 2.0 * (self.C.T @ e) + 2.0 * self.lam * w

    def residual(self, w) -> float:
        e = np.maximum(0.0, self.C @ w)
        return float(e @ e)


def _project(w: np.ndarray) -> np.ndarray:
    return np.maximum(w, WEIGHT_FLOOR)


def projected_gradient_norm(obj: Objective, w) -> float:
    return float(np.max(np.abs(w - _project(w - obj.gradient(w))), initial=0.0))


@dataclass
class InferenceResult:
    node: int
    weights: np.ndarray
    objective: float
    residual: float
    violations: np.ndarray
    iterations: int
    gradient_norm: float
    candidates: np.ndarray = field(repr=False)

    def to_json(self) -> dict:
        return {
            "node": self.node,
            "objective": self.objective,
            "residual": self.residual,
            "iterations": self.iterations,
            "gradient_norm": self.gradient_norm,
            "n_candidates": int(len(self.candidates)),
            "max_violation": float(self.violations.max(initial=0.0)),
        }


class InferenceNotConverged(RuntimeError):
    def __init__(self, weights: np.ndarray, gradient_norm: float, iterations: int):
        super().__init__(f"no convergence after {iterations} iterations (projected gradient norm {gradient_norm:.3e})")
        self.weights = weights
        self.gradient_norm = gradient_norm
        self.iterations = iterations


def minimize(
    obj: Objective, w0, tol: float = 1e-8, max_iters: int = 100_000, armijo: float = 1e-4
) -> tuple[np.ndarray, int, float]:
    """Projected gradient descent on ``w >= WEIGHT_FLOOR``.

    Each trial step starts from the Barzilai-Borwein length and is halved
    until the Armijo condition holds, so the objective never increases.
    Returns ``(w, iterations, projected gradient norm)``.
    """
    w = _project(np.asarray(w0, dtype=float))
    if w.size == 0:
        return w, 0, 0.0
    f, g = obj.value(w), obj.gradient(w)
    step = 1.0 / (2.0 * (obj.lam + np.linalg.norm(obj.C, 2) ** 2))
    for it in range(max_iters):
        pg = float(np.max(np.abs(w - _project(w - g))))
        if pg <= tol:
            return w, it, pg
        t = step
        while True:
            w_new = _project(w - t * g)
            d = w_new - w
            f_new = obj.value(w_new)
            if f_new <= f + armijo * (g @ d) or t < 1e-20:
                break
            t *= 0.5
        g_new = obj.gradient(w_new)
        s, y = w_new - w, g_new - g
        sy = float(s @ y)
        step = float(s @ s) / sy if sy > 0 else t * 2.0
        w, f, g = w_new, f_new, g_new
    pg = float(np.max(np.abs(w - _project(w - g))))
    if pg <= tol:
        return w, max_iters, pg
    raise InferenceNotConverged(w, pg, max_iters)


def infer_weights(
    net: SignedNetwork,
    p,
    X_obs,
    i: int,
    n_samples: int = 200,
    lam: float = 1.0,
    tol: float = 1e-8,
    max_iters: int = 100_000,
    rng: np.random.Generator | None = None,
    w0=None,
    candidates=None,
) -> InferenceResult:
    """Estimate node ``i``'s neighbour weights from the observed matrix.

    Candidate rows come from :func:`discretize_strategies` unless given.
    The returned weight vector has length ``n`` with zeros off the
    neighbourhood. Raises :class:`InferenceNotConverged` when the projected
    gradient norm stays above ``tol``.
    """
    p = as_powers(p)
    X_obs = as_strategy(net, X_obs, p)
    rng = np.random.default_rng(0) if rng is None else rng
    if candidates is None:
        candidates = discretize_strategies(net, p, i, n_samples, rng)
    candidates = np.atleast_2d(np.asarray(candidates, dtype=np.int64))
    C = violation_coefficients(net, p, X_obs, i, candidates)
    obj = Objective(C, lam)
    nbrs = list(net.neighbors[i])
    start = np.full(len(nbrs), 1.0) if w0 is None else np.asarray(w0, dtype=float)
    if start.shape == (net.n,):
        start = start[nbrs]
    w, iters, pg = minimize(obj, start, tol, max_iters)
    full = np.zeros(net.n)
    full[nbrs] = w
    return InferenceResult(
        node=int(i),
        weights=full,
        objective=obj.value(w),
        residual=obj.residual(w),
        violations=np.maximum(0.0, C @ w),
        iterations=iters,
        gradient_norm=pg,
        candidates=candidates,
    )

