"""Monte-Carlo survival likelihoods and random-network sweeps.

Survival chains start from ``diag(p)``; at each iteration a uniformly drawn
country switches to a best response under the survival utility (0 when
dangerous, otherwise one plus the number of neighbours in its favour) if
that strictly improves on its current row. The likelihood of a country is
the share of chains whose final state leaves it not dangerous.

Sweeps generate random signed networks over a ``(q_e, q_n)`` grid, draw
powers uniformly from ``[1, K]``, run the power/strategy dynamics from a
uniformly random allocation (or from ``diag(p)``) and average the final mean power,
Gini coefficient and frustration per cell.
"""

from __future__ import annotations

import csv
import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from .core import SignedNetwork, as_powers, support_scores
from .dynamics import random_initial_state, run_dynamics
from .metrics import frustration, gini
from .netgen import GenParams, generate
from .rows import best_row, composition_count, compositions, row_view

__all__ = [
    "best_response",
    "SurvivalConfig",
    "SurvivalReport",
    "estimate_survival",
    "SweepConfig",
    "SweepReport",
    "sweep",
    "run_seed",
    "survival_chain",
]


def run_seed(seed: int, run: int) -> np.random.SeedSequence:
    """Independent, order-free seed for run ``run`` of a batch seeded with ``seed``."""
    return np.random.SeedSequence([int(seed), int(run)])


def best_response(
    net: SignedNetwork,
    p,
    X,
    i: int,
    variant: str = "survival",
    budget: int = 1000,
    rng: np.random.Generator | None = None,
    s=None,
) -> tuple[np.ndarray, int]:
    """A utility-maximising full row for ``i`` with other rows fixed, and its utility.

    Rows are enumerated when there are at most ``budget`` of them (a uniform
    choice among the maximisers when ``rng`` is given); otherwise the
    threshold knapsack in :func:`sigpower.rows.best_row` is used. Both are
    exact.
    """
    p = as_powers(p)
    X = np.asarray(X, dtype=np.int64)
    view = row_view(net, X, i, s)
    total = int(p[i])
    if composition_count(total, 1 + view.degree) <= budget:
        rows = compositions(total, 1 + view.degree)
        util = view.utilities(rows, variant)
        top = int(util.max())
        idx = np.flatnonzero(util == top)
        pick = idx[0] if rng is None else idx[int(rng.integers(idx.size))]
        return view.to_full(rows[pick]), top
    row, val = best_row(view, total, variant, rng=rng)
    return view.to_full(row), val


@dataclass(frozen=True)
class SurvivalConfig:
    iterations_per_run: int = 10_000
    runs: int = 200
    seed: int = 0
    best_response_budget: int = 1000
    workers: int = 1

    def __post_init__(self):
        for name in ("iterations_per_run", "runs", "best_response_budget", "workers"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")


@dataclass
class SurvivalReport:
    likelihood: np.ndarray
    tally: dict[str, np.ndarray]
    absorbed: int
    config: SurvivalConfig
    labels: list[str] | None = None

    @property
    def survives(self) -> np.ndarray:
        """Whether each country's likelihood exceeds one half."""
        return self.likelihood > 0.5

    def to_csv(self, path) -> None:
        with open(path, "w", newline="", encoding="utf-8") as fh:
            w = csv.writer(fh)
            w.writerow(["node", "label", "likelihood", "survives", "safe", "precarious", "dangerous"])
            for k, lk in enumerate(self.likelihood):
                label = self.labels[k] if self.labels else ""
                w.writerow(
                    [k, label, f"{lk:.6f}", int(lk > 0.5), *(int(self.tally[key][k]) for key in ("safe", "precarious", "dangerous"))]
                )

    def to_json(self) -> dict:
        return {
            "config": asdict(self.config),
            "likelihood": self.likelihood.tolist(),
            "tally": {k: v.tolist() for k, v in self.tally.items()},
            "absorbed_runs": self.absorbed,
        }


def survival_chain(
    net: SignedNetwork, p, iterations: int, budget: int, seq
) -> tuple[np.ndarray, np.ndarray, bool]:
    """Run one chain from ``diag(p)``; returns the final matrix, its support
    scores and whether the chain reached a state nobody can improve on."""
    p = as_powers(p)
    rng = np.random.default_rng(seq)
    n = net.n
    X = np.diag(p).astype(np.int64)
    s = support_scores(net, X)
    settled: set[int] = set()
    for _ in range(iterations):
        i = int(rng.integers(n))
        view = row_view(net, X, i, s)
        current = int(view.utilities(view.from_full(X[i])[None, :], "survival")[0])
        row, val = best_response(net, p, X, i, "survival", budget, rng, s)
        if val > current:
            X[i] = row
            s = support_scores(net, X)
            settled = set()
        else:
            settled.add(i)
            if len(settled) == n:
                # nobody can improve: the chain would stay here for the rest of its budget
                return X, s, True
    return X, s, False


def _survival_batch(args):
    net, p, iterations, budget, seqs = args
    return [survival_chain(net, p, iterations, budget, sq)[1:] for sq in seqs]


def estimate_survival(
    net: SignedNetwork, p, cfg: SurvivalConfig = SurvivalConfig(), labels: list[str] | None = None
) -> SurvivalReport:
    p = as_powers(p)
    if p.shape != (net.n,):
        raise ValueError("power vector length does not match the network")
    seqs = [run_seed(cfg.seed, r) for r in range(cfg.runs)]
    if cfg.workers > 1:
        chunks = [seqs[k :: cfg.workers] for k in range(cfg.workers)]
        with ProcessPoolExecutor(cfg.workers) as ex:
            results = [r for part in ex.map(_survival_batch, [(net, p, cfg.iterations_per_run, cfg.best_response_budget, c) for c in chunks]) for r in part]
    else:
        results = _survival_batch((net, p, cfg.iterations_per_run, cfg.best_response_budget, seqs))
    finals = np.array([s for s, _ in results]).reshape(cfg.runs, net.n)
    tally = {
        "safe": (finals > 0).sum(axis=0),
        "precarious": (finals == 0).sum(axis=0),
        "dangerous": (finals < 0).sum(axis=0),
    }
    likelihood = (finals >= 0).sum(axis=0) / cfg.runs
    return SurvivalReport(likelihood, tally, sum(a for _, a in results), cfg, labels)


# -- sweeps ------------------------------------------------------------------


@dataclass(frozen=True)
class SweepConfig:
    n: int = 30
    q_e: tuple[float, ...] = tuple(np.round(np.linspace(0, 1, 11), 10))
    q_n: tuple[float, ...] = tuple(np.round(np.linspace(0, 1, 11), 10))
    K: int = 20
    sims_per_cell: int = 20
    steps_per_sim: int = 20_000
    seed: int = 0
    enum_limit: int = 2_000
    initial: str = "random"
    workers: int = 1

    def __post_init__(self):
        if self.initial not in ("diagonal", "random"):
            raise ValueError("initial must be 'diagonal' or 'random'")
        for q in (*self.q_e, *self.q_n):
            if not 0 <= q <= 1:
                raise ValueError("grid probabilities must lie in [0, 1]")


@dataclass
class SweepReport:
    config: SweepConfig
    records: list[dict] = field(default_factory=list)

    def grid(self, metric: str) -> np.ndarray:
        """Cell means of ``metric``; rows follow ``q_e`` and columns ``q_n``."""
        out = np.zeros((len(self.config.q_e), len(self.config.q_n)))
        cnt = np.zeros_like(out)
        for r in self.records:
            out[r["ie"], r["in"]] += r[metric]
            cnt[r["ie"], r["in"]] += 1
        return out / np.maximum(cnt, 1)

    def write(self, path) -> list[Path]:
        """Write the long-format CSV at ``path``, one matrix CSV per metric and a JSON sidecar."""
        path = Path(path)
        cols = ["q_e", "q_n", "sim", "mean_power", "gini", "frustration", "frustration_norm", "converged", "steps"]
        with open(path, "w", newline="", encoding="utf-8") as fh:
            w = csv.DictWriter(fh, cols, extrasaction="ignore")
            w.writeheader()
            w.writerows(self.records)
        written = [path]
        for metric in ("mean_power", "gini", "frustration", "frustration_norm"):
            mp = path.with_name(f"{path.stem}_{metric}.csv")
            g = self.grid(metric)
            with open(mp, "w", newline="", encoding="utf-8") as fh:
                w = csv.writer(fh)
                w.writerow(["q_e\\q_n", *self.config.q_n])
                for qe, row in zip(self.config.q_e, g):
                    w.writerow([qe, *(f"{v:.6f}" for v in row)])
            written.append(mp)
        side = path.with_suffix(".json")
        side.write_text(
            json.dumps({"config": asdict(self.config), **{m: self.grid(m).tolist() for m in ("mean_power", "gini", "frustration", "frustration_norm")}}, indent=2)
        )
        written.append(side)
        return written


def _sweep_sim(args) -> dict:
    cfg, ie, in_, sim = args
    q_e, q_n = cfg.q_e[ie], cfg.q_n[in_]
    seq = np.random.SeedSequence([cfg.seed, ie, in_, sim])
    net_seed, dyn_seq = seq.spawn(2)
    net = generate(GenParams(cfg.n, q_e, q_n, int(net_seed.generate_state(1)[0])))
    rng = np.random.default_rng(dyn_seq)
    p0, X0 = random_initial_state(net, cfg.K, rng)
    if cfg.initial == "diagonal":
        X0 = np.diag(p0)
    _, rep = run_dynamics(net, p0, X0, cfg.K, rng, max_steps=cfg.steps_per_sim, enum_limit=cfg.enum_limit, record=False)
    fr, _ = frustration(net)
    return {
        "ie": ie,
        "in": in_,
        "q_e": q_e,
        "q_n": q_n,
        "sim": sim,
        "mean_power": float(rep.p.mean()),
        "gini": gini(rep.p),
        "frustration": fr,
        "frustration_norm": fr / net.n_edges if net.n_edges else 0.0,
        "converged": int(rep.converged),
        "steps": rep.steps,
    }


def sweep(cfg: SweepConfig = SweepConfig()) -> SweepReport:
    tasks = [
        (cfg, ie, in_, sim)
        for ie in range(len(cfg.q_e))
        for in_ in range(len(cfg.q_n))
        for sim in range(cfg.sims_per_cell)
    ]
    if cfg.workers > 1:
        with ProcessPoolExecutor(cfg.workers) as ex:
            records = list(ex.map(_sweep_sim, tasks, chunksize=8))
    else:
        records = [_sweep_sim(t) for t in tasks]
    return SweepReport(cfg, records)

