"""Rebuild the bundled 115-node stand-in for the college football network.

The original game schedule is not shipped with this package. This script
draws a graph with the same headline statistics (115 nodes, 613 links, so a
mean degree of 10.661, smallest degree 7) and a conference-like community
structure: 12 groups, about two thirds of every team's games inside its
group. The output is deterministic.

    python demos/make_football_standin.py > src/hyperemb/data/football_standin.txt
"""
import sys

import numpy as np

from hyperemb.graph import Graph, is_connected, write_edge_list

N_NODES, N_EDGES, MIN_DEGREE = 115, 613, 7
GROUP_SIZES = [12, 12, 11, 10, 10, 10, 10, 9, 9, 8, 8, 6]
P_INSIDE = 0.65


def target_degrees(rng):
    # mostly 11 or 12 games, a few teams with fewer; exact stub total 2 * N_EDGES
    while True:
        d = rng.choice([7, 8, 9, 10, 11, 12], size=N_NODES, p=[.03, .04, .06, .12, .45, .30])
        if d.sum() == 2 * N_EDGES and d.min() == MIN_DEGREE:
            return d


def attempt(rng):
    group = np.repeat(np.arange(len(GROUP_SIZES)), GROUP_SIZES)
    stubs = target_degrees(rng)
    adj = np.zeros((N_NODES, N_NODES), dtype=bool)
    while stubs.sum() > 0:
        u = int(np.argmax(stubs + rng.random(N_NODES)))  # most open stubs, random ties
        free = (stubs > 0) & ~adj[u]
        free[u] = False
        if not free.any():
            return None
        same = free & (group == group[u])
        pool = same if same.any() and rng.random() < P_INSIDE else free
        v = int(rng.choice(np.flatnonzero(pool)))
        adj[u, v] = adj[v, u] = True
        stubs[u] -= 1
        stubs[v] -= 1
    iu = np.transpose(np.nonzero(np.triu(adj)))
    g = Graph.from_edges(N_NODES, iu.tolist())
    return g if is_connected(g) else None


def build(seed=20240601):
    rng = np.random.default_rng(seed)
    while True:
        g = attempt(rng)
        if g is not None:
            return g


if __name__ == "__main__":
    g = build()
    assert g.n_nodes == N_NODES and g.n_edges == N_EDGES and g.degree.min() == MIN_DEGREE
    sys.stdout.write("# synthetic stand-in with the college football network's size, "
                     "mean degree 10.661 and minimum degree 7\n")
    write_edge_list(g, sys.stdout)
