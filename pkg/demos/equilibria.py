"""Equilibria on a small signed network, built three ways and checked by brute force.

Run: python demos/equilibria.py
"""

import numpy as np

from sigpower import SignedNetwork, states
from sigpower.antagonistic import all_precarious_equilibrium, dominant_equilibrium
from sigpower.static_ne import find_equilibrium, verify_equilibrium


def show(title, net, p, X):
    letters = "".join(s.letter for s in states(net, X))
    verdict = "equilibrium" if verify_equilibrium(net, p, X) is None else "has a profitable deviation"
    print(f"{title}: states {letters}, {verdict}")
    print(np.asarray(X))


def main():
    tri = SignedNetwork.fully_antagonistic(3)

    # everyone holds back its own power: the strongest country gains by attacking
    show("hold everything", tri, [1, 1, 2], np.diag([1, 1, 2]))

    X, steps = find_equilibrium(tri, [1, 1, 2], np.random.default_rng(0))
    show(f"adjustment sequence ({steps} steps)", tri, [1, 1, 2], X)

    show("balanced attacks", tri, [1, 1, 2], all_precarious_equilibrium(tri, [1, 1, 2]))
    show("one dominant country", tri, [5, 1, 1], dominant_equilibrium(tri, [5, 1, 1]))

    # mixed network: 0 and 1 are allies facing 2 and 3
    net = SignedNetwork.from_edges(4, [(0, 1, 1), (2, 3, 1), (0, 2, -1), (0, 3, -1), (1, 2, -1), (1, 3, -1)])
    p = [3, 1, 2, 2]
    X, steps = find_equilibrium(net, p, np.random.default_rng(1))
    show(f"two blocs ({steps} steps)", net, p, X)


if __name__ == "__main__":
    main()
