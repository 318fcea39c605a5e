"""Random signed networks: each pair is linked with probability ``q_e`` and
each link is hostile with probability ``q_n``."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import SignedNetwork

__all__ = ["GenParams", "generate"]


@dataclass(frozen=True)
class GenParams:
    n: int
    q_e: float
    q_n: float
    seed: int | None = None

    def __post_init__(self):
        if self.n < 0:
            raise ValueError("n must be non-negative")
        for name in ("q_e", "q_n"):
            q = getattr(self, name)
            if not 0 <= q <= 1:
                raise ValueError(f"{name} must lie in [0, 1], got {q}")


def generate(params: GenParams, rng: np.random.Generator | None = None) -> SignedNetwork:
    """Draw a network; ``rng`` overrides ``params.seed`` when given."""
    rng = np.random.default_rng(params.seed) if rng is None else rng
    n = params.n
    iu, ju = np.triu_indices(n, k=1)
    linked = rng.random(iu.size) < params.q_e
    hostile = rng.random(iu.size) < params.q_n
    edges = [(int(i), int(j), -1 if h else 1) for i, j, h in zip(iu[linked], ju[linked], hostile[linked])]
    return SignedNetwork.from_edges(n, edges)
