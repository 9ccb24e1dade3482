"""Angular refinement of an embedding by local logarithmic-loss search.

Nodes are visited innermost first. Each node tries ``q`` angles spread evenly
over the arc between its angular neighbours (second neighbours in a swapping
round, first neighbours otherwise) and jumps to the best one if that strictly
lowers the loss. Radii are never touched.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .errors import DegenerateArcError, ParameterError
from .geometry import TWO_PI, normalize_angle
from .graph import Graph
from .likelihood import Embedding, PairLossCache, logarithmic_loss


# smallest loss decrease that counts as an improvement; guards against
# accepting moves that only reshuffle rounding error
MIN_GAIN = 1e-9


@dataclass(frozen=True)
class OptimizerSchedule:
    swap_rounds: int = 5
    noswap_rounds: int = 3
    q: int = 6
    stop_rel_tol: Optional[float] = None

    def __post_init__(self):
        if self.q < 1:
            raise ParameterError("q must be >= 1")
        if self.swap_rounds < 0 or self.noswap_rounds < 0:
            raise ParameterError("round counts must be >= 0")
        if self.stop_rel_tol is not None and self.stop_rel_tol < 0:
            raise ParameterError("stop_rel_tol must be >= 0")

    @property
    def rounds(self) -> int:
        return self.swap_rounds + self.noswap_rounds


@dataclass
class RoundStats:
    swapping: bool
    loss: float
    accepted: int
    evaluations: int


@dataclass
class OptimizationTrace:
    """Loss after each round (``initial_loss`` is the loss before round 1)."""

    initial_loss: Optional[float] = None
    rounds: list = field(default_factory=list)

    @property
    def losses(self) -> list:
        return [r.loss for r in self.rounds]

    @property
    def accepted(self) -> list:
        return [r.accepted for r in self.rounds]

    @property
    def evaluations(self) -> int:
        return sum(r.evaluations for r in self.rounds)

    def relative_changes(self) -> np.ndarray:
        """``(LL_{n-1} - LL_n) / LL_{n-1}`` for every round ``n``."""
        seq = np.array([self.initial_loss, *self.losses], dtype=float)
        return (seq[:-1] - seq[1:]) / seq[:-1]


def angular_order(theta) -> np.ndarray:
    """Node ids sorted by angle, equal angles by id."""
    theta = np.asarray(theta)
    return np.lexsort((np.arange(theta.size), theta))


def _arc(theta, order, pos, node, neighbor_rank):
    n = order.size
    if n < 2 * neighbor_rank + 1:
        raise DegenerateArcError(
            f"{n} nodes cannot provide distinct rank-{neighbor_rank} neighbours")
    start = theta[order[(pos - neighbor_rank) % n]]
    end = theta[order[(pos + neighbor_rank) % n]]
    length = (end - start) % TWO_PI
    if length == 0 and theta[node] != start:
        length = TWO_PI
    return start, length


def candidate_positions(emb_or_theta, node: int, neighbor_rank: int = 2, q: int = 6) -> np.ndarray:
    """``q`` angles evenly inside the arc spanned by the node's angular neighbours.

    The arc runs counter-clockwise from the ``neighbor_rank``-th neighbour
    before the node to the one after it, so it contains the node itself. Arc
    endpoints are excluded.
    """
    theta = emb_or_theta.theta if isinstance(emb_or_theta, Embedding) else np.asarray(emb_or_theta)
    order = angular_order(theta)
    pos = int(np.flatnonzero(order == node)[0])
    start, length = _arc(theta, order, pos, node, neighbor_rank)
    frac = np.arange(1, q + 1) / (q + 1)
    return normalize_angle(start + length * frac)


def _rank_for(n: int, swapping: bool) -> Optional[int]:
    if n <= 2:
        return None
    if swapping and n >= 5:
        return 2
    return 1


def _sweep(cache: PairLossCache, radial_order, swapping: bool, q: int) -> tuple[int, int]:
    theta = cache.theta
    n = theta.size
    rank = _rank_for(n, swapping)
    if rank is None:
        return 0, 0
    frac = np.arange(1, q + 1) / (q + 1)
    accepted = 0
    before = cache.evaluations
    order = angular_order(theta)
    where = np.empty(n, dtype=np.int64)
    where[order] = np.arange(n)
    for node in radial_order:
        node = int(node)
        pos = int(where[node])
        start, length = _arc(theta, order, pos, node, rank)
        cand = normalize_angle(start + length * frac)
        delta = cache.deltas(node, cand)
        best = int(np.argmin(delta))
        if delta[best] < -MIN_GAIN:
            cache.move(node, cand[best])
            accepted += 1
            if swapping:
                order = angular_order(theta)
                where[order] = np.arange(n)
    return accepted, cache.evaluations - before


def optimize_round(g: Graph, emb: Embedding, swapping: bool, q: int = 6,
                   cache: Optional[PairLossCache] = None):
    """One sweep over all nodes; returns the new embedding and its :class:`RoundStats`."""
    if emb.params.temperature <= 0:
        raise ParameterError("angular optimisation needs T > 0")
    if cache is None:
        cache = PairLossCache(g, emb)
    accepted, evals = _sweep(cache, emb.radial_order, swapping, q)
    out = emb.with_theta(cache.theta.copy())
    return out, RoundStats(swapping, logarithmic_loss(g, out).total, accepted, evals)


def optimize(g: Graph, emb: Embedding, sched: OptimizerSchedule = OptimizerSchedule()):
    """Run the swapping rounds, then the non-swapping rounds.

    Stops early when ``sched.stop_rel_tol`` is set and a round improves the
    loss by less than that fraction.
    """
    trace = OptimizationTrace()
    if sched.rounds == 0:
        return emb, trace
    trace.initial_loss = logarithmic_loss(g, emb).total
    cache = PairLossCache(g, emb)
    prev = trace.initial_loss
    for k in range(sched.rounds):
        emb, stats = optimize_round(g, emb, k < sched.swap_rounds, sched.q, cache)
        trace.rounds.append(stats)
        if sched.stop_rel_tol is not None and prev > 0 and (prev - stats.loss) / prev < sched.stop_rel_tol:
            break
        prev = stats.loss
    meta = {"method": "ncmce-opt" if emb.meta.get("method") == "ncmce" else emb.meta.get("method"),
            "rounds": len(trace.rounds)}
    return emb.with_theta(emb.theta, **meta), trace
