"""HyperMap-style baseline: insert nodes by decreasing degree, pick each angle greedily."""
from __future__ import annotations

import numpy as np

from .errors import ParameterError
from .geometry import TWO_PI, cosh_distance
from .graph import Graph, require_connected
from .likelihood import Embedding, assign_radial_coordinates, pair_terms
from .models import birth_radius, cutoff_radius, expected_internal_links
from .params import EpsoParams


def insertion_cutoff(i: int, p: EpsoParams) -> float:
    """Cutoff at step ``i`` using the E-PSO link count ``m + L_i`` (``m`` when that is not positive)."""
    m_i = p.m + expected_internal_links(i, p)
    return cutoff_radius(i, p, m_i if m_i > 0 else p.m)


def local_loss_grid(g: Graph, placed, theta_placed, node: int, i: int, p: EpsoParams,
                    grid: np.ndarray) -> np.ndarray:
    """Loss of the pairs between the ``i``-th inserted node and the earlier ones, per grid angle."""
    r_new = birth_radius(i, p.zeta)
    r_old = p.beta * birth_radius(np.arange(1, i), p.zeta) + (1.0 - p.beta) * r_new
    c = cosh_distance(r_new, grid[:, None], r_old[None, :], theta_placed[None, :], p.zeta)
    linked = g.adjacency[node, placed][None, :]
    return pair_terms(c, linked, insertion_cutoff(i, p), p).sum(axis=1)


def hypermap_embed(g: Graph, p: EpsoParams, kind: str = "total", tie_seed=None,
                   angle_grid: int = 360) -> Embedding:
    """Greedy insertion embedding.

    Node ``i`` in the degree ranking gets the first grid angle that minimises
    its loss against the ``i - 1`` nodes already placed, evaluated with their
    radii at step ``i`` and the step-``i`` cutoff. Final radii come from the
    same ranking.
    """
    if p.temperature <= 0:
        raise ParameterError("HyperMap needs T > 0")
    if angle_grid < 1:
        raise ParameterError("angle_grid must be >= 1")
    require_connected(g)
    emb = assign_radial_coordinates(g, p, kind, tie_seed)
    p = emb.params
    order = emb.radial_order
    n = g.n_nodes
    grid = TWO_PI * np.arange(angle_grid) / angle_grid
    theta = np.zeros(n)
    for i in range(2, n + 1):
        node = int(order[i - 1])
        placed = order[:i - 1]
        loss = local_loss_grid(g, placed, theta[placed], node, i, p, grid)
        theta[node] = grid[int(np.argmin(loss))]
    return emb.with_theta(theta, method="hypermap")
