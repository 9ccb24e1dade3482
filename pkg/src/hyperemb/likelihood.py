"""Logarithmic loss of an embedding under the E-PSO model.

Also holds the degree-based radial assignment shared by every embedder and
the gradient descent used to fit ``m``, ``beta`` and ``T`` to a fixed layout.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Callable, Optional

import numpy as np

from .errors import DataError, ParameterError
from .geometry import PolarCoord, normalize_angle
from .graph import Graph, degrees
from .models import connection_probability, cutoff_radius, final_radius
from .params import EpsoParams

# probabilities are kept inside [EPS, 1 - EPS]; -ln(EPS) caps a single pair term
PROB_FLOOR = 1e-300
MAX_TERM = -math.log(PROB_FLOOR)


@dataclass(frozen=True, eq=False)
class Embedding:
    """Polar coordinates of every node on the native disk.

    ``radial_order[k]`` is the node of rank ``k + 1`` (innermost first); the
    radii follow from that rank and ``params``.
    """

    r: np.ndarray
    theta: np.ndarray
    radial_order: np.ndarray
    params: EpsoParams
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        for name in ("r", "theta"):
            object.__setattr__(self, name, np.asarray(getattr(self, name), dtype=float))
        object.__setattr__(self, "radial_order", np.asarray(self.radial_order, dtype=np.int64))

    @property
    def n_nodes(self) -> int:
        return self.r.size

    @property
    def coords(self) -> list:
        return [PolarCoord(float(a), float(b)) for a, b in zip(self.r, self.theta)]

    def with_theta(self, theta, **meta) -> "Embedding":
        return replace(self, theta=normalize_angle(np.asarray(theta, dtype=float)),
                       meta={**self.meta, **meta})

    def with_params(self, p: EpsoParams) -> "Embedding":
        """Same order and angles, radii recomputed for ``p``."""
        p = p.with_(n_nodes=self.n_nodes) if p.n_nodes != self.n_nodes else p
        return replace(self, r=radii_from_order(self.radial_order, p), params=p)

    def __eq__(self, other):
        if not isinstance(other, Embedding):
            return NotImplemented
        return (
            np.array_equal(self.r, other.r)
            and np.array_equal(self.theta, other.theta)
            and np.array_equal(self.radial_order, other.radial_order)
            and self.params == other.params
        )


@dataclass(frozen=True)
class LossBreakdown:
    total: float
    edge_term: float
    non_edge_term: float


def radii_from_order(order, p: EpsoParams) -> np.ndarray:
    order = np.asarray(order, dtype=np.int64)
    n = order.size
    r = np.empty(n)
    r[order] = final_radius(np.arange(1, n + 1), n, p.beta, p.zeta)
    return r


def tie_broken_order(deg, tie_seed=None) -> np.ndarray:
    """Nodes by descending degree; equal degrees shuffled by ``tie_seed``.

    ``tie_seed=None`` keeps equal-degree nodes in id order.
    """
    deg = np.asarray(deg)
    n = deg.size
    key = np.arange(n) if tie_seed is None else np.random.default_rng(tie_seed).permutation(n)
    return np.lexsort((key, -deg))


def _fit_n(p: EpsoParams, n: int) -> EpsoParams:
    return p if p.n_nodes == n else p.with_(n_nodes=n)


def assign_radial_coordinates(g: Graph, p: EpsoParams, kind: str = "total",
                              tie_seed=None) -> Embedding:
    """Radii from the degree ranking; all angles zero."""
    if g.n_nodes < 1:
        raise ParameterError("graph has no nodes")
    p = _fit_n(p, g.n_nodes)
    order = tie_broken_order(degrees(g, kind), tie_seed)
    return Embedding(radii_from_order(order, p), np.zeros(g.n_nodes), order, p,
                     meta={"degree_kind": kind, "tie_seed": tie_seed})


def global_cutoff(p: EpsoParams) -> float:
    return cutoff_radius(p.n_nodes, p, p.m)


def global_connection_probability(x, p: EpsoParams):
    """Probability of a link at final distance ``x`` (cutoff taken at ``i = N``)."""
    if p.temperature <= 0:
        raise ParameterError("the loss needs T > 0")
    return connection_probability(x, global_cutoff(p), p)


def pair_terms(cosh_zx, linked, R: float, p: EpsoParams):
    """``-ln p`` for linked pairs and ``-ln(1 - p)`` otherwise, from ``cosh(zeta x)``."""
    x = np.arccosh(np.maximum(cosh_zx, 1.0)) / p.zeta
    z = p.zeta * (x - R) / (2.0 * p.temperature)
    return np.minimum(np.logaddexp(0.0, np.where(linked, z, -z)), MAX_TERM)


def _check_inputs(g: Graph, emb: Embedding) -> EpsoParams:
    p = emb.params
    if p.temperature <= 0:
        raise ParameterError("the loss needs T > 0")
    if g.n_nodes != emb.n_nodes:
        raise DataError(f"embedding has {emb.n_nodes} nodes, graph has {g.n_nodes}")
    if not (np.all(np.isfinite(emb.r)) and np.all(np.isfinite(emb.theta))):
        raise DataError("embedding contains non-finite coordinates")
    return p


def logarithmic_loss(g: Graph, emb: Embedding, chunk: int = 512) -> LossBreakdown:
    """Negative log-likelihood of the adjacency matrix given the layout."""
    p = _check_inputs(g, emb)
    n = g.n_nodes
    if n < 2:
        raise ParameterError("the loss needs at least two nodes")
    R = global_cutoff(p)
    zr = p.zeta * emb.r
    sh = np.sinh(zr)
    adj = g.adjacency
    edge_sum = 0.0
    non_edge_sum = 0.0
    for start in range(0, n - 1, chunk):
        rows = np.arange(start, min(start + chunk, n - 1))
        cols = np.arange(rows[0] + 1, n)
        s = np.sin(0.5 * (emb.theta[rows, None] - emb.theta[None, cols]))
        with np.errstate(over="ignore"):  # huge radii: cosh -> inf, terms are capped
            c = np.cosh(zr[rows, None] - zr[None, cols]) + 2.0 * sh[rows, None] * sh[None, cols] * s * s
        linked = adj[np.ix_(rows, cols)]
        terms = pair_terms(c, linked, R, p)
        upper = cols[None, :] > rows[:, None]
        edge_sum += float(terms[upper & linked].sum())
        non_edge_sum += float(terms[upper & ~linked].sum())
    return LossBreakdown(edge_sum + non_edge_sum, edge_sum, non_edge_sum)


class PairLossCache:
    """Per-node loss rows for fast single-node moves.

    Radii never change while the cache lives; angles are updated through
    :meth:`move`. ``evaluations`` counts candidate angles scored so far.
    """

    def __init__(self, g: Graph, emb: Embedding):
        p = _check_inputs(g, emb)
        if g.n_nodes < 2:
            raise ParameterError("the loss needs at least two nodes")
        self.p = p
        self.R = global_cutoff(p)
        self.zr = p.zeta * emb.r
        self.sh = np.sinh(self.zr)
        self.theta = emb.theta.copy()
        self.adj = g.adjacency
        self.evaluations = 0

    def node_terms(self, node: int, angles) -> np.ndarray:
        """Loss terms of ``node`` against all others, one row per trial angle."""
        angles = np.atleast_1d(np.asarray(angles, dtype=float))
        s = np.sin(0.5 * (angles[:, None] - self.theta[None, :]))
        c = np.cosh(self.zr[node] - self.zr)[None, :] + 2.0 * self.sh[node] * self.sh[None, :] * s * s
        terms = pair_terms(c, self.adj[node][None, :], self.R, self.p)
        terms[:, node] = 0.0
        return terms

    def node_loss(self, node: int, angles=None) -> np.ndarray:
        if angles is None:
            angles = self.theta[node]
        return self.node_terms(node, angles).sum(axis=1)

    def deltas(self, node: int, angles) -> np.ndarray:
        """Loss change for moving ``node`` to each of ``angles``."""
        angles = np.atleast_1d(angles)
        self.evaluations += angles.size
        return self.node_loss(node, angles) - self.node_loss(node)[0]

    def move(self, node: int, theta: float) -> None:
        self.theta[node] = normalize_angle(theta)


def loss_delta_for_move(g: Graph, emb: Embedding, node: int, new_theta: float,
                        cache: Optional[PairLossCache] = None) -> float:
    """``LL(after) - LL(before)`` when only ``node`` moves to ``new_theta``."""
    node = g.check_node(node)
    if cache is None:
        cache = PairLossCache(g, emb)
    return float(cache.deltas(node, [new_theta])[0])


# --- parameter estimation -------------------------------------------------


def finite_difference_gradient(fun: Callable, x: np.ndarray, rel_step: float = 1e-4) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    grad = np.zeros_like(x)
    for d in range(x.size):
        h = rel_step * max(abs(x[d]), 1e-3)
        up, down = x.copy(), x.copy()
        up[d] += h
        down[d] -= h
        grad[d] = (fun(up) - fun(down)) / (2.0 * h)
    return grad


@dataclass
class DescentResult:
    x: np.ndarray
    path: list
    values: list
    converged: bool


def bounded_descent(fun: Callable, x0, lower, upper, step_factor: float = 0.1,
                    tol: float = 1e-4, max_iter: int = 500,
                    gradient: Optional[Callable] = None) -> DescentResult:
    """Box-constrained gradient descent with per-direction step scaling.

    The first step along direction ``d`` covers ``step_factor`` times the
    distance to the bound the negative gradient points at. Later steps are
    ``-k_d * grad_d`` with ``k_d = first_step_d / |grad_d(x0)|``, so steps shrink
    together with the gradient. Points leaving the box are clamped onto it.
    A step that would raise the loss is rejected and all scales are halved,
    so the recorded values never increase. Stops when the step, measured in box-normalised units, is below ``tol``.
    """
    if not 0 < step_factor < 1:
        raise ParameterError("step_factor must lie in (0, 1)")
    lower = np.asarray(lower, dtype=float)
    upper = np.asarray(upper, dtype=float)
    if np.any(upper < lower):
        raise ParameterError("empty parameter box")
    x = np.clip(np.asarray(x0, dtype=float), lower, upper)
    width = np.where(upper > lower, upper - lower, 1.0)
    grad_fn = gradient or (lambda v: finite_difference_gradient(fun, v))

    f0 = fun(x)
    if not np.isfinite(f0):
        raise DataError("loss is not finite at the starting point")
    g0 = grad_fn(x)
    room = np.where(g0 > 0, x - lower, upper - x)
    first = step_factor * room
    with np.errstate(divide="ignore", invalid="ignore"):
        scale = np.where(g0 != 0, first / np.abs(g0), 0.0)

    path, values = [x.copy()], [f0]
    grad, f = g0, f0
    converged = False
    for _ in range(max_iter):
        new = np.clip(x - scale * grad, lower, upper)
        step = np.linalg.norm((new - x) / width)
        if step < tol:
            converged = True
            break
        f_new = fun(new)
        if not f_new <= f:
            # overshoot: shrink every direction and retry from the same point
            scale = 0.5 * scale
            continue
        x, f = new, f_new
        path.append(x.copy())
        values.append(f)
        grad = grad_fn(x)
    return DescentResult(x, path, values, converged)


def estimate_parameters(g: Graph, emb: Embedding, start=None, bounds=None,
                        step_factor: float = 0.1, tol: float = 1e-4,
                        fit_m: bool = True, max_iter: int = 500) -> EpsoParams:
    """Fit ``(m, beta, T)`` by minimising the loss of a fixed angular layout.

    The radial order of ``emb`` is kept; radii follow ``beta``. ``start`` is a
    ``(m, beta, T)`` triple, ``bounds`` a pair of such triples. With
    ``fit_m=False`` only ``beta`` and ``T`` move. The returned ``L`` is
    ``<k>/2 - m`` and may be negative.
    """
    n = g.n_nodes
    mean_k = 2.0 * g.n_edges / n
    if start is None:
        start = (mean_k / 2.0, 0.5, 0.5)
    if bounds is None:
        bounds = ((1.0, 0.1, 0.1), (max(2.0 * mean_k, 1.0), 0.99, 0.99))
    lower, upper = (np.asarray(b, dtype=float) for b in bounds)
    base = _fit_n(emb.params, n)

    def params_at(v) -> EpsoParams:
        m, beta, T = v
        return base.with_(m=float(m), beta=float(beta), temperature=float(T),
                          ell=mean_k / 2.0 - float(m))

    def loss(v) -> float:
        p = params_at(v)
        return logarithmic_loss(g, emb.with_params(p)).total

    x0 = np.asarray(start, dtype=float)
    if fit_m:
        res = bounded_descent(loss, x0, lower, upper, step_factor, tol, max_iter)
        best = res.x
    else:
        m_fixed = x0[0]
        res = bounded_descent(lambda v: loss((m_fixed, v[0], v[1])), x0[1:], lower[1:],
                              upper[1:], step_factor, tol, max_iter)
        best = (m_fixed, *res.x)
    return params_at(best)
