"""Command line interface.

Every subcommand reads its options from flags, from a JSON config file given
with ``--config``, or both (flags win). The config file may hold shared keys
at the top level and per-subcommand keys in an object named after the
subcommand, using the long flag names with dashes turned into underscores::

    {"seed": 7, "simulate": {"K": 10, "steps": 50000}}

Exit codes: 0 success, 1 verification failure, 2 bad input.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .antagonistic import all_precarious_equilibrium, dominant_equilibrium
from .core import SignedNetwork, states
from .dynamics import run_dynamics
from .inference import InferenceNotConverged, infer_weights
from .ingest import load_powers, load_relations
from .io import InputError, read_matrix, read_network, read_powers, write_matrix, write_network, write_powers
from .montecarlo import SurvivalConfig, SweepConfig, estimate_survival, sweep
from .netgen import GenParams, generate
from .rows import BudgetExceeded
from .static_ne import DEFAULT_BUDGET, find_equilibrium, verify_equilibrium

__all__ = ["main", "build_parser"]

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2


def _grid(text: str) -> tuple[float, ...]:
    """``"0:1:11"`` (start:stop:count) or a comma list ``"0,0.5,1"``."""
    if isinstance(text, (list, tuple)):
        return tuple(float(v) for v in text)
    if ":" in text:
        a, b, k = text.split(":")
        return tuple(float(v) for v in np.round(np.linspace(float(a), float(b), int(k)), 10))
    return tuple(float(v) for v in text.split(","))


def _states_text(net, X) -> str:
    return "".join(st.letter for st in states(net, X))


def _echo(args) -> dict:
    skip = {"func", "config"}
    return {k: v for k, v in vars(args).items() if k not in skip}


def _need(args, *names):
    missing = [n for n in names if getattr(args, n, None) is None]
    if missing:
        raise InputError("missing required option(s): " + ", ".join("--" + m.replace("_", "-") for m in missing))


def _load_net_powers(args) -> tuple[SignedNetwork, np.ndarray, list[str] | None]:
    _need(args, "net", "powers")
    net, labels = read_network(args.net)
    p, plabels = read_powers(args.powers)
    if len(p) != net.n:
        raise InputError(f"{args.powers} has {len(p)} powers but the network has {net.n} nodes")
    return net, p, labels or plabels


def _workers(args) -> int:
    return max(1, args.threads if args.threads else (os.cpu_count() or 1))


# -- subcommands -------------------------------------------------------------


def cmd_gen_net(args) -> int:
    _need(args, "n", "qe", "qn", "out")
    net = generate(GenParams(args.n, args.qe, args.qn, args.seed))
    write_network(args.out, net)
    print(f"wrote {net.n} nodes, {net.n_edges} edges to {args.out}")
    return EXIT_OK


def cmd_static_ne(args) -> int:
    net, p, _ = _load_net_powers(args)
    _need(args, "out")
    trace: list[int] = []
    X, steps = find_equilibrium(net, p, np.random.default_rng(args.seed), trace)
    st = _states_text(net, X)
    write_matrix(args.out, X, config=_echo(args), steps=steps, potential_trace=trace, states=st)
    print(f"adjustments: {steps}")
    print(f"states: {st}")
    print(f"potential trace: {' '.join(map(str, trace))}")
    return EXIT_OK


def cmd_verify_ne(args) -> int:
    net, p, _ = _load_net_powers(args)
    _need(args, "matrix")
    X = read_matrix(args.matrix)
    dev = verify_equilibrium(net, p, X, args.variant, args.budget)
    if dev is None:
        print("equilibrium")
        return EXIT_OK
    print(
        f"deviation: node {dev.node} switches to row {list(dev.row)} "
        f"(utility {dev.utility_before} -> {dev.utility_after})"
    )
    return EXIT_FAIL


def cmd_antagonistic(args) -> int:
    _need(args, "powers", "out")
    p, labels = read_powers(args.powers)
    net = SignedNetwork.fully_antagonistic(len(p))
    if args.mode == "dominant":
        X = dominant_equilibrium(net, p)
    else:
        X = all_precarious_equilibrium(net, p)
    st = _states_text(net, X)
    write_matrix(args.out, X, config=_echo(args), states=st)
    print(f"states: {st}")
    return EXIT_OK


def cmd_simulate(args) -> int:
    net, p, _ = _load_net_powers(args)
    _need(args, "K")
    X0 = read_matrix(args.initial) if args.initial else np.diag(p)
    traj, rep = run_dynamics(
        net, p, X0, args.K, np.random.default_rng(args.seed), max_steps=args.steps,
        cap_self=args.cap_self, keep_matrices=bool(args.matrices),
    )
    summary = {
        "config": _echo(args),
        "status": rep.status,
        "steps": rep.steps,
        "p": rep.p.tolist(),
        "X": rep.X.tolist(),
        "states": "".join(s.letter for s in rep.states),
        "lemma_violations": rep.lemma_violations,
    }
    if args.traj:
        traj.to_csv(args.traj)
        Path(args.traj).with_suffix(".json").write_text(json.dumps(summary, indent=1))
    if args.matrices:
        traj.dump_matrices(args.matrices, args.every)
    print(f"{rep.status} after {rep.steps} steps")
    print(f"powers: {' '.join(map(str, rep.p))}")
    print(f"states: {summary['states']}")
    return EXIT_OK


def cmd_survival(args) -> int:
    net, p, labels = _load_net_powers(args)
    cfg = SurvivalConfig(args.iters, args.runs, args.seed, args.budget, _workers(args))
    rep = estimate_survival(net, p, cfg, labels)
    if args.out:
        rep.to_csv(args.out)
        Path(args.out).with_suffix(".json").write_text(json.dumps({"cli": _echo(args), **rep.to_json()}, indent=1))
    for k, lk in enumerate(rep.likelihood):
        name = labels[k] if labels else str(k)
        print(f"{name}\t{lk:.4f}\t{'survives' if lk > 0.5 else 'falls'}")
    return EXIT_OK


def cmd_sweep(args) -> int:
    _need(args, "out")
    cfg = SweepConfig(
        n=args.n, q_e=_grid(args.qe_grid), q_n=_grid(args.qn_grid), K=args.K, sims_per_cell=args.sims,
        steps_per_sim=args.steps, seed=args.seed, enum_limit=args.enum_limit, workers=_workers(args),
    )
    rep = sweep(cfg)
    for path in rep.write(args.out):
        print(f"wrote {path}")
    return EXIT_OK


def cmd_infer(args) -> int:
    net, p, labels = _load_net_powers(args)
    _need(args, "observed", "out")
    X = read_matrix(args.observed)
    nodes = range(net.n) if args.nodes is None else [int(v) for v in str(args.nodes).split(",")]
    W = np.zeros((net.n, net.n))
    diags = []
    status = EXIT_OK
    for i in nodes:
        rng = np.random.default_rng(np.random.SeedSequence([args.seed, i]))
        try:
            res = infer_weights(net, p, X, i, args.samples, args.lam, args.tol, args.max_iters, rng)
        except InferenceNotConverged as exc:
            W[i] = 0.0
            W[i, list(net.neighbors[i])] = exc.weights
            diags.append({"node": i, "converged": False, "gradient_norm": exc.gradient_norm, "iterations": exc.iterations})
            status = EXIT_FAIL
            continue
        W[i] = res.weights
        diags.append({"converged": True, **res.to_json()})
    with open(args.out, "w", encoding="utf-8") as fh:
        header = labels if labels else [str(k) for k in range(net.n)]
        fh.write("node," + ",".join(header) + "\n")
        for i in range(net.n):
            fh.write(f"{header[i]}," + ",".join(f"{v:.10g}" for v in W[i]) + "\n")
    Path(args.out).with_suffix(".json").write_text(json.dumps({"config": _echo(args), "nodes": diags}, indent=1))
    print(f"wrote {args.out}")
    return status


def cmd_ingest(args) -> int:
    _need(args, "relations", "year", "out")
    net, labels = load_relations(args.relations, args.year, args.tie)
    write_network(args.out, net, labels)
    print(f"{net.n} countries, {net.n_edges} relations")
    if args.capabilities:
        _need(args, "powers_out")
        p = load_powers(args.capabilities, args.year, labels, args.scale, args.min_power)
        write_powers(args.powers_out, p, labels)
    return EXIT_OK


# -- parser ------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="sigpower", description="Power-allocation games on signed networks.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("--config", help="JSON config file; flags override its values")
    parser.add_argument("--threads", type=int, default=None, help="worker processes (default: all cores)")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, func, help_):
        sp = sub.add_parser(name, help=help_)
        sp.set_defaults(func=func)
        return sp

    def net_powers(sp):
        sp.add_argument("--net", help="network JSON or edge-list CSV")
        sp.add_argument("--powers", help="powers CSV (node,power[,label])")

    def threads(sp):
        sp.add_argument("--threads", type=int, default=argparse.SUPPRESS, help="worker processes (default: all cores)")

    sp = add("gen-net", cmd_gen_net, "draw a random signed network")
    sp.add_argument("--n", type=int)
    sp.add_argument("--qe", type=float, help="edge probability")
    sp.add_argument("--qn", type=float, help="probability that an edge is hostile")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--out")

    sp = add("static-ne", cmd_static_ne, "construct a pure Nash equilibrium")
    net_powers(sp)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--out")

    sp = add("verify-ne", cmd_verify_ne, "check a matrix for profitable deviations")
    net_powers(sp)
    sp.add_argument("--matrix")
    sp.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    sp.add_argument("--variant", choices=["static", "dynamic", "survival"], default="static")

    sp = add("antagonistic", cmd_antagonistic, "equilibria of fully antagonistic networks")
    sp.add_argument("--powers")
    sp.add_argument("--mode", choices=["all-precarious", "dominant"], default="all-precarious")
    sp.add_argument("--out")

    sp = add("simulate", cmd_simulate, "run the power/strategy dynamics")
    net_powers(sp)
    sp.add_argument("--K", type=int)
    sp.add_argument("--steps", type=int, default=100_000)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--initial", help="initial matrix JSON (default: everyone keeps its power)")
    sp.add_argument("--traj", help="trajectory CSV; a JSON summary is written next to it")
    sp.add_argument("--matrices", help="JSON file for recorded matrices")
    sp.add_argument("--every", type=int, default=1, help="matrix checkpoint interval")
    sp.add_argument("--cap-self", action="store_true", help="cap the self allocation like the other entries")

    sp = add("survival", cmd_survival, "Monte-Carlo survival likelihoods")
    net_powers(sp)
    threads(sp)
    sp.add_argument("--runs", type=int, default=200)
    sp.add_argument("--iters", type=int, default=10_000)
    sp.add_argument("--budget", type=int, default=1000, help="largest row count solved by enumeration")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--out")

    sp = add("sweep", cmd_sweep, "random-network sweep over (q_e, q_n)")
    threads(sp)
    sp.add_argument("--n", type=int, default=30)
    sp.add_argument("--qe-grid", default="0:1:11", help="start:stop:count or comma list")
    sp.add_argument("--qn-grid", default="0:1:11")
    sp.add_argument("--K", type=int, default=20)
    sp.add_argument("--sims", type=int, default=20)
    sp.add_argument("--steps", type=int, default=20_000)
    sp.add_argument("--enum-limit", type=int, default=2_000)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--out")

    sp = add("infer", cmd_infer, "infer neighbour weights from an observed matrix")
    net_powers(sp)
    sp.add_argument("--observed")
    sp.add_argument("--samples", type=int, default=200)
    sp.add_argument("--lambda", dest="lam", type=float, default=1.0)
    sp.add_argument("--tol", type=float, default=1e-8)
    sp.add_argument("--max-iters", type=int, default=100_000)
    sp.add_argument("--nodes", help="comma-separated node ids (default: all)")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--out")

    sp = add("ingest", cmd_ingest, "build inputs from relation and capability tables")
    sp.add_argument("--relations")
    sp.add_argument("--capabilities")
    sp.add_argument("--year", type=int)
    sp.add_argument("--scale", type=int, default=1000)
    sp.add_argument("--min-power", type=int, default=1)
    sp.add_argument("--tie", type=int, choices=[-1, 0, 1], default=0, help="sign for tied counts (0: no edge)")
    sp.add_argument("--out")
    sp.add_argument("--powers-out")
    return parser


def _apply_config(parser: argparse.ArgumentParser, argv) -> argparse.Namespace:
    pre, _ = parser.parse_known_args(argv)
    if not pre.config:
        return parser.parse_args(argv)
    try:
        cfg = json.loads(Path(pre.config).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"cannot read config {pre.config}: {exc}") from exc
    if not isinstance(cfg, dict):
        raise InputError("config file must hold a JSON object")
    subparsers = next(a for a in parser._actions if isinstance(a, argparse._SubParsersAction))
    sp = subparsers.choices[pre.command]
    known = {a.dest for a in sp._actions}
    values = {k: v for k, v in cfg.items() if not isinstance(v, dict) and k in known}
    section = cfg.get(pre.command, {})
    unknown = set(section) - known
    if unknown:
        raise InputError(f"unknown {pre.command} option(s) in config: {', '.join(sorted(unknown))}")
    values.update(section)
    sp.set_defaults(**values)
    if "threads" in cfg and pre.threads is None:
        parser.set_defaults(threads=cfg["threads"])
    return parser.parse_args(argv)


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = _apply_config(parser, argv)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s: %(message)s")
    try:
        return args.func(args)
    except (InputError, BudgetExceeded, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
