"""Simple undirected graphs with an optional record of edge direction.

Nodes are the integers ``0..n_nodes-1``. Every algorithm in the package works
on the undirected edge set; the directed record only matters when ranking
nodes by in- or out-degree.
"""
from __future__ import annotations

import io
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Optional, Sequence

import numpy as np
import scipy.sparse as sp
from scipy.sparse import csgraph

from .errors import (
    ConnectivityError,
    NodeRangeError,
    ParameterError,
    ParseError,
    UnsupportedDegreeKind,
)

DEGREE_KINDS = ("total", "in", "out")


NODE_DIRECTIVE = "# node"


def _canonical(pairs) -> tuple:
    return tuple(sorted({(min(u, v), max(u, v)) for u, v in pairs}))


@dataclass(frozen=True, eq=False)
class Graph:
    """Immutable simple graph.

    Parameters
    ----------
    n_nodes : int
    edges : tuple of (u, v)
        Unordered pairs stored with ``u < v`` in lexicographic order.
    directed_edges : tuple of (u, v), optional
        Ordered pairs as they appeared in the input. Only used for
        in/out degree.
    labels : tuple of str, optional
        Original node labels, ``labels[i]`` belongs to node ``i``.
    """

    n_nodes: int
    edges: tuple
    directed_edges: Optional[tuple] = None
    labels: Optional[tuple] = field(default=None)

    def __post_init__(self):
        if self.n_nodes < 0:
            raise ParameterError("n_nodes must be non-negative")
        seen = set()
        for u, v in self.edges:
            if u == v:
                raise ParameterError(f"self-loop on node {u}")
            if not (0 <= u < self.n_nodes and 0 <= v < self.n_nodes):
                raise NodeRangeError(f"edge ({u}, {v}) outside 0..{self.n_nodes - 1}")
            if u > v or (u, v) in seen:
                raise ParameterError("edges must be unique pairs with u < v")
            seen.add((u, v))
        if self.directed_edges is not None and _canonical(self.directed_edges) != self.edges:
            raise ParameterError("directed_edges do not symmetrize to edges")
        if self.labels is not None and len(self.labels) != self.n_nodes:
            raise ParameterError("labels must have one entry per node")

    @classmethod
    def from_edges(cls, n_nodes: int, pairs: Iterable, directed: bool = False, labels=None) -> "Graph":
        """Build a graph from arbitrary pairs; duplicates collapse."""
        pairs = [(int(u), int(v)) for u, v in pairs]
        for u, v in pairs:
            if u == v:
                raise ParameterError(f"self-loop on node {u}")
        directed_edges = None
        if directed:
            directed_edges = tuple(dict.fromkeys(pairs))
        return cls(
            n_nodes=int(n_nodes),
            edges=_canonical(pairs),
            directed_edges=directed_edges,
            labels=None if labels is None else tuple(str(x) for x in labels),
        )

    def __eq__(self, other):
        if not isinstance(other, Graph):
            return NotImplemented
        return (
            self.n_nodes == other.n_nodes
            and self.edges == other.edges
            and self.directed_edges == other.directed_edges
            and self._all_labels() == other._all_labels()
        )

    def _all_labels(self) -> tuple:
        # unlabelled graphs compare equal to graphs labelled "0", "1", ...
        return tuple(self.label(u) for u in range(self.n_nodes))

    def __hash__(self):
        return hash((self.n_nodes, self.edges))

    def __repr__(self):
        kind = "directed record" if self.is_directed else "undirected"
        return f"Graph(n_nodes={self.n_nodes}, n_edges={self.n_edges}, {kind})"

    @property
    def n_edges(self) -> int:
        return len(self.edges)

    @property
    def is_directed(self) -> bool:
        return self.directed_edges is not None

    @cached_property
    def edge_array(self) -> np.ndarray:
        return np.array(self.edges, dtype=np.int64).reshape(-1, 2)

    @cached_property
    def csr(self) -> sp.csr_matrix:
        """Symmetric 0/1 adjacency, column indices sorted within each row."""
        e = self.edge_array
        rows = np.concatenate([e[:, 0], e[:, 1]])
        cols = np.concatenate([e[:, 1], e[:, 0]])
        data = np.ones(rows.size, dtype=np.int8)
        a = sp.csr_matrix((data, (rows, cols)), shape=(self.n_nodes, self.n_nodes))
        a.sort_indices()
        return a

    @cached_property
    def adjacency(self) -> np.ndarray:
        """Dense boolean adjacency matrix."""
        a = np.zeros((self.n_nodes, self.n_nodes), dtype=bool)
        e = self.edge_array
        a[e[:, 0], e[:, 1]] = True
        a[e[:, 1], e[:, 0]] = True
        return a

    @cached_property
    def neighbors(self) -> tuple:
        a = self.csr
        return tuple(
            a.indices[a.indptr[i]:a.indptr[i + 1]].copy() for i in range(self.n_nodes)
        )

    @cached_property
    def degree(self) -> np.ndarray:
        """Undirected degree of every node."""
        return np.diff(self.csr.indptr).astype(np.int64)

    def check_node(self, u) -> int:
        if not (0 <= int(u) < self.n_nodes):
            raise NodeRangeError(f"node {u} outside 0..{self.n_nodes - 1}")
        return int(u)

    def label(self, u: int) -> str:
        return str(u) if self.labels is None else self.labels[u]


@dataclass(frozen=True, eq=False)
class WeightedGraph:
    """A graph plus one non-negative weight per edge (aligned with ``graph.edges``)."""

    graph: Graph
    weights: np.ndarray

    def __post_init__(self):
        w = np.asarray(self.weights, dtype=float)
        if w.shape != (self.graph.n_edges,):
            raise ParameterError("need exactly one weight per edge")
        if np.any(w < 0) or not np.all(np.isfinite(w)):
            raise ParameterError("weights must be finite and non-negative")
        object.__setattr__(self, "weights", w)

    @property
    def n_nodes(self) -> int:
        return self.graph.n_nodes

    @property
    def edges(self) -> tuple:
        return self.graph.edges

    def weight_map(self) -> dict:
        return dict(zip(self.graph.edges, self.weights.tolist()))

    def total_weight(self) -> float:
        return float(self.weights.sum())


def load_edge_list(text, directed: bool = False) -> Graph:
    """Parse a whitespace separated edge list.

    ``text`` may be ``bytes``, ``str`` or a readable file object. Lines starting
    with ``#`` and blank lines are skipped. Node tokens get dense ids in order of
    first appearance. A comment of the form ``# node a b ...`` declares nodes
    ahead of the edges, which preserves isolated nodes and the id order.
    """
    if hasattr(text, "read"):
        text = text.read()
    if isinstance(text, bytes):
        text = text.decode("utf-8")
    ids: dict = {}
    pairs = []
    for lineno, line in enumerate(io.StringIO(text), start=1):
        stripped = line.strip()
        if stripped.startswith(NODE_DIRECTIVE):
            # declares a node (keeps isolated nodes and the id order)
            for tok in stripped[len(NODE_DIRECTIVE):].split():
                ids.setdefault(tok, len(ids))
            continue
        if not stripped or stripped.startswith("#"):
            continue
        tokens = stripped.split()
        if len(tokens) != 2:
            raise ParseError(f"expected 2 node tokens, got {len(tokens)}", lineno)
        a, b = tokens
        if a == b:
            raise ParseError(f"self-loop on {a!r}", lineno)
        u = ids.setdefault(a, len(ids))
        v = ids.setdefault(b, len(ids))
        pairs.append((u, v))
    return Graph.from_edges(len(ids), pairs, directed=directed, labels=list(ids))


def write_edge_list(g: Graph, fh) -> None:
    """Emit ``g`` in the same format :func:`load_edge_list` reads.

    Node declarations come first so the file reloads into an identical graph.
    """
    labels = [g.label(u) for u in range(g.n_nodes)]
    for k in range(0, len(labels), 20):
        fh.write(NODE_DIRECTIVE + " " + " ".join(labels[k:k + 20]) + "\n")
    pairs = g.directed_edges if g.is_directed else g.edges
    for u, v in pairs:
        fh.write(f"{g.label(u)} {g.label(v)}\n")


def degrees(g: Graph, kind: str = "total") -> np.ndarray:
    """Per-node degree of the requested kind.

    For a graph carrying a directed record ``total`` is ``in + out``, which
    counts a reciprocated pair twice.
    """
    if kind not in DEGREE_KINDS:
        raise UnsupportedDegreeKind(f"unknown degree kind {kind!r}")
    if not g.is_directed:
        if kind != "total":
            raise UnsupportedDegreeKind(f"{kind}-degree needs a directed edge record")
        return g.degree.copy()
    d = np.array(g.directed_edges, dtype=np.int64).reshape(-1, 2)
    out_deg = np.bincount(d[:, 0], minlength=g.n_nodes)
    in_deg = np.bincount(d[:, 1], minlength=g.n_nodes)
    return {"in": in_deg, "out": out_deg, "total": in_deg + out_deg}[kind]


def common_neighbors(g: Graph, u: int, v: int) -> int:
    u, v = g.check_node(u), g.check_node(v)
    if u == v:
        raise ParameterError("common_neighbors needs two distinct nodes")
    return int(np.intersect1d(g.neighbors[u], g.neighbors[v], assume_unique=True).size)


def shortest_path_lengths(g: Graph, source: int) -> np.ndarray:
    """Breadth-first hop counts from ``source``; ``inf`` marks unreachable nodes."""
    source = g.check_node(source)
    dist = np.full(g.n_nodes, np.inf)
    dist[source] = 0
    queue = deque([source])
    nbrs = g.neighbors
    while queue:
        u = queue.popleft()
        du = dist[u] + 1
        for v in nbrs[u]:
            if dist[v] == np.inf:
                dist[v] = du
                queue.append(v)
    return dist


def all_pairs_hops(g: Graph) -> np.ndarray:
    """Dense matrix of hop distances (``inf`` across components)."""
    return csgraph.shortest_path(g.csr, method="D", unweighted=True, directed=False)


def connected_components(g: Graph) -> tuple[int, np.ndarray]:
    if g.n_nodes == 0:
        return 0, np.zeros(0, dtype=np.int64)
    return csgraph.connected_components(g.csr, directed=False)


def is_connected(g: Graph) -> bool:
    return connected_components(g)[0] <= 1


def require_connected(g: Graph) -> None:
    n_comp, _ = connected_components(g)
    if n_comp > 1:
        raise ConnectivityError(f"graph is disconnected ({n_comp} components)")


def minimum_spanning_tree(wg: WeightedGraph) -> WeightedGraph:
    """Kruskal's algorithm with ties broken by the lexicographic edge order."""
    g = wg.graph
    require_connected(g)
    e = g.edge_array
    # primary key weight, then u, then v
    order = np.lexsort((e[:, 1], e[:, 0], wg.weights)) if len(e) else np.zeros(0, int)
    parent = list(range(g.n_nodes))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    kept = []
    for k in order:
        u, v = int(e[k, 0]), int(e[k, 1])
        ru, rv = find(u), find(v)
        if ru != rv:
            parent[ru] = rv
            kept.append(k)
            if len(kept) == g.n_nodes - 1:
                break
    kept.sort()
    tree = Graph(g.n_nodes, tuple(g.edges[k] for k in kept), labels=g.labels)
    return WeightedGraph(tree, wg.weights[kept])


def induced_subgraph(g: Graph, nodes: Sequence[int]) -> Graph:
    """Subgraph on ``nodes`` relabelled to ``0..len(nodes)-1`` in the given order."""
    index = {int(u): k for k, u in enumerate(nodes)}
    pairs = [(index[u], index[v]) for u, v in g.edges if u in index and v in index]
    labels = tuple(g.label(int(u)) for u in nodes)
    return Graph(len(index), _canonical(pairs), labels=labels)


def largest_component(g: Graph) -> tuple[Graph, np.ndarray]:
    """Largest connected component (lowest-labelled on ties) and its original node ids."""
    n_comp, lab = connected_components(g)
    if n_comp <= 1:
        return g, np.arange(g.n_nodes)
    keep = np.flatnonzero(lab == np.argmax(np.bincount(lab)))
    return induced_subgraph(g, keep), keep
