"""Growing hyperbolic network models: PSO, PSO with internal links, and E-PSO.

Randomness
----------
Every generator takes an integer seed which is expanded with
``numpy.random.SeedSequence(seed).spawn(2)``. The first child drives the
external phase: at each step one uniform angle for the new node, then (only
when ``T > 0`` and the node is past the fully connected start) one uniform per
predecessor, in index order. The second child is reserved for internal link
insertion and deletion, so switching those off leaves the external phase
untouched.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.special import expit

from .errors import ParameterError
from .geometry import TWO_PI, PolarCoord, cosh_distance
from .graph import Graph
from .params import EpsoParams

log = logging.getLogger(__name__)

_SMALL = 1e-12


def temperature_factor(T: float) -> float:
    """``2T / sin(T*pi)``, with its ``T -> 0`` limit ``2/pi``."""
    if T == 0:
        return 2.0 / math.pi
    return 2.0 * T / math.sin(T * math.pi)


def birth_radius(i, zeta: float = 1.0):
    """Radius ``(2/zeta) ln i`` of node ``i`` at its own birth (``i`` is 1-based)."""
    return 2.0 / zeta * np.log(i)


def final_radius(i, n_nodes: int, beta: float, zeta: float = 1.0):
    """Radius of node ``i`` after all ``n_nodes`` nodes have appeared."""
    return beta * birth_radius(i, zeta) + (1.0 - beta) * birth_radius(n_nodes, zeta)


def cutoff_radius(i: int, p: EpsoParams, m_eff: float) -> float:
    """Cutoff ``R_i`` that makes the expected number of links of node ``i`` equal ``m_eff``."""
    if i < 2:
        raise ParameterError(f"cutoff radius needs i >= 2, got {i}")
    if not m_eff > 0:
        raise ParameterError(f"effective m must be > 0, got {m_eff}")
    zeta, beta = p.zeta, p.beta
    r_ii = 2.0 / zeta * math.log(i)
    tf = temperature_factor(p.temperature)
    if beta < 1:
        fade = -math.expm1(-0.5 * zeta * (1.0 - beta) * r_ii)
        arg = tf * fade / (m_eff * (1.0 - beta))
    else:
        arg = 0.5 * tf * zeta * r_ii / m_eff
    return r_ii - 2.0 / zeta * math.log(arg)


def connection_probability(x, R, p: EpsoParams):
    """Fermi-Dirac linking probability ``1 / (1 + exp(zeta (x - R) / 2T))``."""
    if p.temperature <= 0:
        raise ParameterError("connection probability is undefined at T = 0")
    return expit(-p.zeta * (np.asarray(x, dtype=float) - R) / (2.0 * p.temperature))


def _expm1_ratio(a, scale):
    """``(exp(a*scale) - 1) / a`` with the ``a -> 0`` limit ``scale``."""
    a = np.asarray(a, dtype=float)
    scale = np.asarray(scale, dtype=float)
    small = np.abs(a) < _SMALL
    safe_a = np.where(small, 1.0, a)
    return np.where(small, scale, np.expm1(safe_a * scale) / safe_a)


def expected_internal_links(i, p: EpsoParams):
    """Expected number of internal links node ``i`` collects by the end of growth.

    ``i`` may be an array of 1-based birth indices. The removable singularities
    at ``beta = 1/2`` and ``beta = 1`` are replaced by their limits.
    """
    i = np.asarray(i, dtype=float)
    n = float(p.n_nodes)
    if np.any(i < 1) or np.any(i > n):
        raise ParameterError("birth index must lie in 1..N")
    if p.ell == 0 or n == 1:
        return np.zeros_like(i) if i.ndim else 0.0
    eps = 1.0 - p.beta
    ln_n, ln_i = math.log(n), np.log(i)
    # eps (1 - i^-eps) / (1 - N^-eps)^2 written with ratios that stay finite at eps = 0
    num = _expm1_ratio(-eps, ln_i)
    den = _expm1_ratio(-eps, ln_n)
    fading = num / (den * den)
    growth = _expm1_ratio(2.0 * p.beta - 1.0, np.log(n / i))
    out = 2.0 * p.ell * fading * growth
    return float(out) if out.ndim == 0 else out


def epso_m_schedule(p: EpsoParams) -> np.ndarray:
    """Per-step expected external link count ``m + L_i`` for ``i = 1..N``."""
    idx = np.arange(1, p.n_nodes + 1)
    return p.m + expected_internal_links(idx, p)


@dataclass(frozen=True)
class GeneratedNetwork:
    """A grown network with its ground-truth coordinates.

    ``r`` and ``theta`` are indexed by node id; node ``k`` is the node born at
    step ``k + 1``.
    """

    graph: Graph
    r: np.ndarray
    theta: np.ndarray
    params: EpsoParams
    seed: int
    model: str
    skipped_steps: int = 0
    extra: dict = field(default_factory=dict)

    @property
    def true_coords(self) -> list:
        return [PolarCoord(float(a), float(b)) for a, b in zip(self.r, self.theta)]

    @property
    def birth_order(self) -> np.ndarray:
        return np.arange(self.graph.n_nodes)


class _Growth:
    """Book-keeping for one run of the growth process."""

    def __init__(self, p: EpsoParams, seed: int):
        self.p = p
        ext, internal = np.random.SeedSequence(seed).spawn(2)
        self.ext_rng = np.random.default_rng(ext)
        self.int_rng = np.random.default_rng(internal)
        self.r_birth = birth_radius(np.arange(1, p.n_nodes + 1), p.zeta)
        self.theta = np.zeros(p.n_nodes)
        self.edges: dict = {}
        self.skipped = 0

    def radii_at(self, i: int) -> np.ndarray:
        """Radii of nodes born at steps ``1..i`` as seen at step ``i``."""
        b = self.p.beta
        return b * self.r_birth[:i] + (1.0 - b) * self.r_birth[i - 1]

    def distances(self, k: int, others: np.ndarray, radii: np.ndarray) -> np.ndarray:
        c = cosh_distance(radii[k], self.theta[k], radii[others], self.theta[others], self.p.zeta)
        return np.arccosh(np.maximum(c, 1.0)) / self.p.zeta

    def add(self, u: int, v: int) -> None:
        self.edges[(min(u, v), max(u, v))] = None

    def external_step(self, i: int, m_i: float) -> None:
        """Place node ``i`` (1-based) and attach it to its predecessors."""
        p = self.p
        k = i - 1
        self.theta[k] = self.ext_rng.uniform(0.0, TWO_PI)
        if i == 1:
            return
        prev = np.arange(k)
        if p.temperature == 0:
            n_links = int(round(m_i))
            if k <= n_links:
                chosen = prev
            else:
                x = self.distances(k, prev, self.radii_at(i))
                chosen = np.argsort(x, kind="stable")[:n_links]
        elif k <= m_i:
            chosen = prev
        elif m_i <= 0:
            return
        else:
            x = self.distances(k, prev, self.radii_at(i))
            prob = connection_probability(x, cutoff_radius(i, p, m_i), p)
            chosen = prev[self.ext_rng.random(k) < prob]
        for j in chosen:
            self.add(int(j), k)

    def _old_edges(self, i: int) -> np.ndarray:
        k = i - 1
        e = np.array([uv for uv in self.edges if uv[1] != k], dtype=np.int64).reshape(-1, 2)
        return e

    def insert_internal(self, i: int, count: int) -> None:
        """Add ``count`` links between disconnected nodes born before step ``i``."""
        if count <= 0:
            return
        p = self.p
        n_old = i - 1
        n_pairs = n_old * (n_old - 1) // 2
        radii = self.radii_at(i)
        added = 0
        if p.temperature == 0:
            if n_old < 2:
                self.skipped += 1
                return
            ju, lu = np.triu_indices(n_old, 1)
            c = cosh_distance(radii[ju], self.theta[ju], radii[lu], self.theta[lu], p.zeta)
            for idx in np.argsort(c, kind="stable"):
                pair = (int(ju[idx]), int(lu[idx]))
                if pair not in self.edges:
                    self.edges[pair] = None
                    added += 1
                    if added == count:
                        return
            self.skipped += 1
            return
        if n_old < 2 or p.m <= 0:
            self.skipped += 1
            return
        R = cutoff_radius(i, p, p.m)
        max_draws = 2000 * max(n_old, 1) * count
        draws = 0
        while added < count:
            n_old_edges = sum(1 for uv in self.edges if uv[1] < n_old)
            if n_pairs - n_old_edges <= 0 or draws >= max_draws:
                self.skipped += 1
                return
            batch = 64 + 4 * n_old
            a = self.int_rng.integers(0, n_old, size=batch)
            b = self.int_rng.integers(0, n_old - 1, size=batch)
            b = b + (b >= a)
            u = self.int_rng.random(batch)
            x = np.arccosh(np.maximum(cosh_distance(
                radii[a], self.theta[a], radii[b], self.theta[b], p.zeta), 1.0)) / p.zeta
            accept = u < connection_probability(x, R, p)
            draws += batch
            for aa, bb, ok in zip(a.tolist(), b.tolist(), accept.tolist()):
                pair = (min(aa, bb), max(aa, bb))
                if ok and pair not in self.edges:
                    self.edges[pair] = None
                    added += 1
                    if added == count:
                        return

    def delete_internal(self, i: int, count: int) -> None:
        """Remove ``count`` links among nodes born before step ``i``."""
        if count <= 0:
            return
        p = self.p
        old = self._old_edges(i)
        if len(old) == 0:
            self.skipped += 1
            return
        radii = self.radii_at(i)
        c = cosh_distance(radii[old[:, 0]], self.theta[old[:, 0]],
                          radii[old[:, 1]], self.theta[old[:, 1]], p.zeta)
        n_remove = min(count, len(old))
        if n_remove < count:
            self.skipped += 1
        if p.temperature == 0:
            # furthest pairs first; ties resolved by edge order
            pick = np.argsort(-c, kind="stable")[:n_remove]
        else:
            x = np.arccosh(np.maximum(c, 1.0)) / p.zeta
            w = 1.0 - connection_probability(x, cutoff_radius(i, p, p.m), p) if p.m > 0 else np.ones(len(old))
            if w.sum() <= 0:
                self.skipped += 1
                return
            n_remove = min(n_remove, int(np.count_nonzero(w)))
            pick = self.int_rng.choice(len(old), size=n_remove, replace=False, p=w / w.sum())
        for k in pick:
            del self.edges[(int(old[k, 0]), int(old[k, 1]))]

    def result(self, model: str, seed: int, **extra) -> GeneratedNetwork:
        p = self.p
        n = p.n_nodes
        graph = Graph(n, tuple(sorted(self.edges)))
        r = final_radius(np.arange(1, n + 1), n, p.beta, p.zeta)
        if self.skipped:
            log.warning("%s: %d internal-link operations skipped", model, self.skipped)
        return GeneratedNetwork(graph, r, self.theta.copy(), p, seed, model, self.skipped, extra)


def pso_generate(p: EpsoParams, seed: int = 0) -> GeneratedNetwork:
    """Original PSO growth with ``m`` external links per step."""
    if p.ell != 0:
        raise ParameterError("pso_generate expects L = 0; use gpso_generate or epso_generate")
    grow = _Growth(p, seed)
    for i in range(1, p.n_nodes + 1):
        grow.external_step(i, p.m)
    return grow.result("pso", seed)


def gpso_generate(p: EpsoParams, l_plus: int, l_minus: int, seed: int = 0) -> GeneratedNetwork:
    """PSO growth with ``l_plus`` internal insertions and ``l_minus`` deletions per step.

    ``p.ell`` is ignored; the net internal rate is ``l_plus - l_minus``.
    """
    if l_plus < 0 or l_minus < 0 or int(l_plus) != l_plus or int(l_minus) != l_minus:
        raise ParameterError("l_plus and l_minus must be non-negative integers")
    grow = _Growth(p, seed)
    for i in range(1, p.n_nodes + 1):
        grow.external_step(i, p.m)
        grow.insert_internal(i, int(l_plus))
        grow.delete_internal(i, int(l_minus))
    return grow.result("gpso", seed, l_plus=int(l_plus), l_minus=int(l_minus))


def epso_generate(p: EpsoParams, seed: int = 0, negative_m: str = "raise") -> GeneratedNetwork:
    """E-PSO growth: only external links, ``m + L_i`` expected at step ``i``.

    With ``L < 0`` the schedule ``m + L_i`` dips below zero for early steps
    unless ``m`` is large. ``negative_m="raise"`` rejects such parameters;
    ``"clip"`` lets those steps create no external links.
    """
    if negative_m not in ("raise", "clip"):
        raise ParameterError("negative_m must be 'raise' or 'clip'")
    m_i = epso_m_schedule(p)
    bad = np.flatnonzero(m_i < -1e-12)
    if bad.size and negative_m == "raise":
        i = int(bad[0]) + 1
        raise ParameterError(
            f"m + L_i is negative at step i = {i} ({m_i[bad[0]]:.6g}); decrease |L| or raise m"
        )
    m_i = np.maximum(m_i, 0.0)
    grow = _Growth(p, seed)
    for i in range(1, p.n_nodes + 1):
        grow.external_step(i, float(m_i[i - 1]))
    return grow.result("epso", seed)
