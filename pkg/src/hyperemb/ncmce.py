"""Coalescent embedding: RA pre-weighting, minimum-curvilinear distances, SVD.

Pipeline: weight every link by repulsion-attraction, take the minimum spanning
tree of the weighted graph, use tree path lengths as a dissimilarity matrix,
factorise it with a rank-2 SVD and read the angular order of the nodes off the
second coordinate. Angles are then spread evenly around the circle.
"""
from __future__ import annotations

import numpy as np
import scipy.linalg

from .errors import DataError, ParameterError
from .geometry import TWO_PI
from .graph import Graph, WeightedGraph, minimum_spanning_tree, require_connected
from .likelihood import Embedding, assign_radial_coordinates
from .params import EpsoParams


def ra_preweight(g: Graph) -> WeightedGraph:
    """``(k_i + k_j + k_i k_j) / (1 + CN_ij)`` on every link."""
    e = g.edge_array
    k = g.degree.astype(float)
    a = g.csr.astype(np.int32)
    # common neighbours of each linked pair: row-wise dot products of A
    cn = np.asarray(a[e[:, 0]].multiply(a[e[:, 1]]).sum(axis=1)).ravel() if len(e) else np.zeros(0)
    ki, kj = k[e[:, 0]], k[e[:, 1]]
    return WeightedGraph(g, (ki + kj + ki * kj) / (1.0 + cn))


def tree_distance_matrix(tree: WeightedGraph) -> np.ndarray:
    """Path lengths between all node pairs of a weighted tree."""
    n = tree.n_nodes
    adj = [[] for _ in range(n)]
    for (u, v), w in zip(tree.edges, tree.weights.tolist()):
        adj[u].append((v, w))
        adj[v].append((u, w))
    # preorder traversal from node 0: subtrees are contiguous blocks
    pre = np.empty(n, dtype=np.int64)
    parent = np.full(n, -1)
    pw = np.zeros(n)
    size = np.ones(n, dtype=np.int64)
    seen = np.zeros(n, dtype=bool)
    stack, k = [0], 0
    seen[0] = True
    while stack:
        u = stack.pop()
        pre[k] = u
        k += 1
        for v, w in reversed(adj[u]):
            if not seen[v]:
                seen[v] = True
                parent[v], pw[v] = u, w
                stack.append(v)
    if k != n:
        raise DataError("input is not a spanning tree")
    for u in pre[::-1]:
        if parent[u] >= 0:
            size[parent[u]] += size[u]
    pos = np.empty(n, dtype=np.int64)
    pos[pre] = np.arange(n)

    # rows indexed by preorder position; a child's row is its parent's row
    # plus the edge weight, minus twice the weight inside its own subtree
    depth = np.zeros(n)
    for u in pre[1:]:
        depth[u] = depth[parent[u]] + pw[u]
    dp = np.empty((n, n))
    dp[0] = depth[pre]
    for idx in range(1, n):
        u = pre[idx]
        row = dp[pos[parent[u]]] + pw[u]
        row[idx:idx + size[u]] -= 2.0 * pw[u]
        dp[idx] = row
    d = np.empty((n, n))
    d[np.ix_(pre, pre)] = dp
    # the recurrence accumulates rounding differently along each direction
    d = 0.5 * (d + d.T)
    np.fill_diagonal(d, 0.0)
    return d


def curvilinear_distance_matrix(wg: WeightedGraph) -> np.ndarray:
    """Minimum-curvilinear distances: path sums over the minimum spanning tree."""
    require_connected(wg.graph)
    return tree_distance_matrix(minimum_spanning_tree(wg))


def _fix_signs(u: np.ndarray, vt: np.ndarray):
    for k in range(vt.shape[0]):
        if vt[k, np.argmax(np.abs(vt[k]))] < 0:
            vt[k] *= -1.0
            u[:, k] *= -1.0
    return u, vt


def truncated_svd_rank2(D: np.ndarray):
    """Top two singular triplets ``(U2, s2, V2)``; ``V2`` has shape ``(N, 2)``.

    Each right singular vector is flipped so that its largest-magnitude entry
    is positive.
    """
    D = np.asarray(D, dtype=float)
    if D.ndim != 2 or min(D.shape) < 2:
        raise ParameterError("rank-2 SVD needs at least a 2x2 matrix")
    u, s, vt = scipy.linalg.svd(D, full_matrices=False, lapack_driver="gesdd")
    u, vt = _fix_signs(u[:, :2].copy(), vt[:2].copy())
    return u, s[:2].copy(), vt.T.copy()


def extract_raw_angular(sigma2, v2) -> np.ndarray:
    """Second column of ``(sqrt(Sigma) V^T)^T``: one score per node."""
    sigma2 = np.asarray(sigma2, dtype=float)
    if sigma2[1] < 0:
        raise ParameterError("singular values must be non-negative")
    return np.sqrt(sigma2[1]) * np.asarray(v2)[:, 1]


def equidistant_adjust(scores) -> np.ndarray:
    """Angle ``2 pi k / N`` for the node of rank ``k`` in ascending score order.

    Equal scores are ranked by node id.
    """
    scores = np.asarray(scores, dtype=float)
    if not np.all(np.isfinite(scores)):
        raise DataError("angular scores must be finite")
    n = scores.size
    rank = np.empty(n, dtype=np.int64)
    rank[np.argsort(scores, kind="stable")] = np.arange(n)
    return TWO_PI * rank / n


def ncmce_angles(g: Graph) -> np.ndarray:
    D = curvilinear_distance_matrix(ra_preweight(g))
    _, s2, v2 = truncated_svd_rank2(D)
    return equidistant_adjust(extract_raw_angular(s2, v2))


def ncmce_embed(g: Graph, p: EpsoParams, kind: str = "total", tie_seed=None) -> Embedding:
    """Coalescent embedding: ncMCE angles plus degree-ranked radii."""
    if g.n_nodes < 2:
        raise ParameterError("ncMCE needs at least two nodes")
    require_connected(g)
    emb = assign_radial_coordinates(g, p, kind, tie_seed)
    return emb.with_theta(ncmce_angles(g), method="ncmce")
