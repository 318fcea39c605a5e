"""Recover how much a country cares about each neighbour from one observed matrix.

Plants random weights, lets node 0 play its best response under them, then
infers the weights back and reports how close the observed row is to optimal
under the estimate. Run: python demos/inference.py
"""

import numpy as np

from sigpower.dynamics import random_initial_state
from sigpower.inference import WEIGHT_FLOOR, infer_weights, violation_coefficients
from sigpower.netgen import GenParams, generate
from sigpower.rows import compositions


def main(seed=5):
    rng = np.random.default_rng(seed)
    net = generate(GenParams(5, q_e=1.0, q_n=0.5), rng)
    p, X = random_initial_state(net, 6, rng)
    nb = list(net.neighbors[0])
    planted = np.zeros(net.n)
    planted[nb] = rng.uniform(WEIGHT_FLOOR, 1.0, len(nb))

    support = [0, *nb]
    local = compositions(int(p[0]), len(support))
    rows = np.zeros((len(local), net.n), dtype=np.int64)
    rows[:, support] = local
    X[0] = rows[int(np.argmax(violation_coefficients(net, p, X, 0, rows) @ planted[nb]))]

    res = infer_weights(net, p, X, 0, n_samples=200, rng=rng)
    print("neighbours:      ", nb)
    print("planted weights: ", np.round(planted[nb], 3))
    print("inferred weights:", np.round(res.weights[nb], 3))
    print(f"objective {res.objective:.4g}, residual {res.residual:.2e}, {res.iterations} iterations")
    # the estimate is the smallest weight vector that rationalises the observed row,
    # so it is pulled towards the lower bound rather than towards the planted values
    print("candidate rows the estimate says beat the observed one:", int((res.violations > 1e-9).sum()))


if __name__ == "__main__":
    main()
