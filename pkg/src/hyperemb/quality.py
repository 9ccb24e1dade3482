"""Embedding quality: greedy routing, densification curves, best-of-n statistics."""
from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field
from typing import Optional

import numpy as np

from .errors import ConnectivityError, ParameterError
from .geometry import distance_matrix, hyperbolic_distance
from .graph import Graph, all_pairs_hops, degrees, require_connected
from .likelihood import Embedding, logarithmic_loss

EULER_GAMMA = 0.5772156649015329


@dataclass(frozen=True)
class QualityReport:
    method: str
    seed: Optional[int]
    rounds: int
    logloss: float
    gr_score: float
    success_ratio: float

    def to_json(self) -> str:
        return json.dumps(asdict(self), sort_keys=False)

    @classmethod
    def from_json(cls, text: str) -> "QualityReport":
        return cls(**json.loads(text))


@dataclass(frozen=True)
class ExtremeValueFit:
    mu: float
    sigma: float
    r_squared: float
    direction: str = "min"

    def predict(self, n_s):
        sign = -1.0 if self.direction == "min" else 1.0
        return self.mu + sign * self.sigma * gumbel_correction(n_s)


# --- greedy routing -------------------------------------------------------


def greedy_route(g: Graph, emb: Embedding, source: int, dest: int) -> Optional[int]:
    """Hop count of the greedy path from ``source`` to ``dest``, ``None`` on failure.

    Each step goes to the neighbour hyperbolically closest to ``dest`` (lowest
    id on ties) and must get strictly closer than the current node.
    """
    source, dest = g.check_node(source), g.check_node(dest)
    if source == dest:
        raise ParameterError("source and destination must differ")
    zeta = emb.params.zeta
    target = (emb.r[dest], emb.theta[dest])
    cur, hops = source, 0
    while cur != dest:
        if hops >= g.n_nodes:
            return None
        nbrs = g.neighbors[cur]
        if nbrs.size == 0:
            return None
        d = hyperbolic_distance((emb.r[nbrs], emb.theta[nbrs]), target, zeta)
        k = int(np.argmin(d))
        if not d[k] < hyperbolic_distance((emb.r[cur], emb.theta[cur]), target, zeta):
            return None
        cur = int(nbrs[k])
        hops += 1
    return hops


def greedy_hops_matrix(g: Graph, emb: Embedding) -> np.ndarray:
    """Greedy path lengths for all ordered pairs, ``inf`` where routing fails.

    Row index is the source, column the destination.
    """
    n = g.n_nodes
    dist = distance_matrix(emb.r, emb.theta, emb.params.zeta)
    a = g.csr
    indptr, indices = a.indptr, a.indices
    owner = np.repeat(np.arange(n), np.diff(indptr))
    has_nbr = np.diff(indptr) > 0
    starts = indptr[:-1][has_nbr]
    hops = np.full((n, n), np.inf)
    nodes = np.arange(n)
    for t in range(n):
        to_t = dist[:, t]
        nd = to_t[indices]
        nxt = np.full(n, -1)
        if starts.size:
            best = np.minimum.reduceat(nd, starts)
            best_full = np.full(n, np.inf)
            best_full[has_nbr] = best
            # first (lowest id) neighbour attaining the minimum
            hit = np.flatnonzero(nd == best_full[owner])
            first = hit[np.r_[True, owner[hit[1:]] != owner[hit[:-1]]]]
            cand = np.full(n, -1)
            cand[owner[first]] = indices[first]
            ok = (cand >= 0) & (best_full < to_t)
            nxt[ok] = cand[ok]
        nxt[t] = t
        cur = nodes.copy()
        count = np.zeros(n)
        active = cur != t
        for _ in range(n):
            if not active.any():
                break
            cur[active] = nxt[cur[active]]
            count[active] += 1
            stuck = cur < 0
            active &= ~stuck & (cur != t)
            cur[stuck] = t  # parked; excluded below
            count[stuck] = np.inf
        count[active] = np.inf  # loop guard: still walking after n hops
        reached = np.isfinite(count)
        hops[reached, t] = count[reached]
        hops[t, t] = 0
    return hops


def greedy_routing_score(g: Graph, emb: Embedding) -> tuple[float, float]:
    """``(GR, success ratio)`` over all ordered pairs; failed routes count 0 in GR."""
    n = g.n_nodes
    if n < 2:
        raise ParameterError("greedy routing needs at least two nodes")
    require_connected(g)
    sp_hops = all_pairs_hops(g)
    gr_hops = greedy_hops_matrix(g, emb)
    off = ~np.eye(n, dtype=bool)
    ok = off & np.isfinite(gr_hops)
    ratio = np.zeros((n, n))
    ratio[ok] = sp_hops[ok] / gr_hops[ok]
    pairs = n * (n - 1)
    return float(ratio.sum() / pairs), float(ok.sum() / pairs)


def evaluate(g: Graph, emb: Embedding, method: Optional[str] = None, seed=None,
             rounds: Optional[int] = None) -> QualityReport:
    gr, success = greedy_routing_score(g, emb)
    return QualityReport(
        method=method or emb.meta.get("method", "unknown"),
        seed=seed if seed is not None else emb.meta.get("tie_seed"),
        rounds=int(rounds if rounds is not None else emb.meta.get("rounds", 0)),
        logloss=logarithmic_loss(g, emb).total,
        gr_score=gr,
        success_ratio=success,
    )


# --- densification ----------------------------------------------------------


def internal_degree_curve(g: Graph, thresholds) -> list:
    """Mean degree inside the subgraph of nodes with degree ``> k_min``.

    Thresholds leaving no node are omitted from the result.
    """
    deg = g.degree
    e = g.edge_array
    out = []
    for k_min in thresholds:
        keep = deg > k_min
        n_keep = int(keep.sum())
        if n_keep == 0:
            continue
        inner = int(np.count_nonzero(keep[e[:, 0]] & keep[e[:, 1]])) if len(e) else 0
        out.append((k_min, 2.0 * inner / n_keep))
    return out


# --- extreme value statistics -------------------------------------------------


def gumbel_correction(n_s):
    """Expected maximum of ``n_s`` standard normal samples (leading terms)."""
    n_s = np.asarray(n_s, dtype=float)
    if np.any(n_s < 2):
        raise ParameterError("g(n_s) needs n_s >= 2")
    root = np.sqrt(2.0 * np.log(n_s))
    out = root - (np.log(np.log(n_s)) + math.log(4.0 * math.pi) - 2.0 * EULER_GAMMA) / (2.0 * root)
    return float(out) if out.ndim == 0 else out


def fit_best_of_n(series, direction: str = "min") -> ExtremeValueFit:
    """Least-squares fit of ``mu -/+ sigma g(n_s)`` to a best-so-far curve.

    ``series`` holds ``(n_s, score)`` rows with ``n_s >= 2``; ``direction`` is
    ``"min"`` for losses and ``"max"`` for scores. ``sigma`` is held at zero
    when the unconstrained fit would make it negative.
    """
    if direction not in ("min", "max"):
        raise ParameterError("direction must be 'min' or 'max'")
    arr = np.asarray(series, dtype=float)
    if arr.ndim != 2 or arr.shape[0] < 3:
        raise ParameterError("need at least three (n_s, score) points")
    n_s, y = arr[:, 0], arr[:, 1]
    x = gumbel_correction(n_s) * (-1.0 if direction == "min" else 1.0)
    ss_tot = float(((y - y.mean()) ** 2).sum())
    xc = x - x.mean()
    sxx = float((xc ** 2).sum())
    sigma = float((xc * (y - y.mean())).sum() / sxx) if sxx > 0 else 0.0
    sigma = max(sigma, 0.0)
    mu = float(y.mean() - sigma * x.mean())
    resid = y - (mu + sigma * x)
    ss_res = float((resid ** 2).sum())
    r2 = 1.0 if ss_tot == 0 else 1.0 - ss_res / ss_tot
    return ExtremeValueFit(mu, sigma, r2, direction)


def best_so_far(values, direction: str = "min") -> np.ndarray:
    values = np.asarray(values, dtype=float)
    return np.minimum.accumulate(values) if direction == "min" else np.maximum.accumulate(values)


@dataclass
class RepeatResult:
    reports: list
    best_ll: np.ndarray
    best_gr: np.ndarray
    embeddings: list = field(default_factory=list, repr=False)

    def series(self, which: str = "ll", upto: Optional[int] = None) -> np.ndarray:
        """``(n_s, best)`` rows from ``n_s = 2`` on, ready for :func:`fit_best_of_n`."""
        best = self.best_ll if which == "ll" else self.best_gr
        best = best[:upto]
        n = np.arange(1, best.size + 1)
        return np.column_stack([n, best])[1:]


def trial_seeds(seed, n_s: int) -> list:
    """Independent integer tie seeds derived from ``seed``."""
    children = np.random.SeedSequence(seed).spawn(n_s)
    return [int(c.generate_state(1)[0]) for c in children]


def repeat_embeddings(g: Graph, method: str, p, n_s: int, seed=0, kind: str = "total",
                      schedule=None, angle_grid: int = 360, keep_embeddings: bool = False) -> RepeatResult:
    """Embed ``g`` ``n_s`` times, each with a fresh equal-degree tie permutation."""
    from .pipeline import embed  # deferred: pipeline imports this module

    if n_s < 1:
        raise ParameterError("n_s must be >= 1")
    reports, embs = [], []
    for tie_seed in trial_seeds(seed, n_s):
        emb = embed(g, method, p, kind=kind, tie_seed=tie_seed, schedule=schedule,
                    angle_grid=angle_grid)
        reports.append(evaluate(g, emb, method=method, seed=tie_seed))
        if keep_embeddings:
            embs.append(emb)
    best_ll = best_so_far([r.logloss for r in reports], "min")
    best_gr = best_so_far([r.gr_score for r in reports], "max")
    return RepeatResult(reports, best_ll, best_gr, embs)
