"""Power growth under the allocation dynamics on a random network.

Prints the state string every few steps, then the steady state and the
trajectory statistics. Run: python demos/dynamics.py
"""

import numpy as np

from sigpower.dynamics import random_initial_state, run_dynamics
from sigpower.metrics import gini
from sigpower.netgen import GenParams, generate
from sigpower.static_ne import verify_equilibrium


def main(seed=3, n=6, K=12):
    rng = np.random.default_rng(seed)
    net = generate(GenParams(n, q_e=0.6, q_n=0.4), rng)
    print("edges:", list(net.edges()))
    p, X = random_initial_state(net, K, rng)
    print("initial powers:", p.tolist(), "Gini", round(gini(p), 3))

    traj, rep = run_dynamics(net, p, X, K, rng)
    every = max(1, len(traj) // 10)
    for rec in traj.records[::every]:
        print(f"t={rec.t:4d}  states {rec.states}  powers {rec.p.tolist()}")
    print(f"{rep.status} after {rep.steps} steps; powers {rep.p.tolist()}, Gini {gini(rep.p):.3f}")
    print("steady state is an equilibrium:", verify_equilibrium(net, rep.p, rep.X) is None)
    rules = {}
    for rec in traj.records[1:]:
        rules[rec.rule] = rules.get(rec.rule, 0) + 1
    print("update kinds:", rules)


if __name__ == "__main__":
    main()
