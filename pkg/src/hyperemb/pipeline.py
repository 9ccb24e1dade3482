"""One-call embedding pipelines used by the CLI and the repetition studies."""
from __future__ import annotations

from typing import Optional

from .angular import OptimizerSchedule, optimize
from .errors import ParameterError
from .graph import Graph
from .hypermap import hypermap_embed
from .likelihood import Embedding, estimate_parameters
from .ncmce import ncmce_embed
from .params import EpsoParams

METHODS = ("ncmce", "ncmce-opt", "hypermap")


def embed(g: Graph, method: str, p: EpsoParams, kind: str = "total", tie_seed=None,
          schedule: Optional[OptimizerSchedule] = None, angle_grid: int = 360,
          return_trace: bool = False):
    """Embed ``g`` with one of :data:`METHODS`.

    ``schedule`` only matters for ``ncmce-opt`` (default: 5 swapping and 3
    non-swapping rounds with ``q = 6``).
    """
    if method not in METHODS:
        raise ParameterError(f"unknown method {method!r}; choose from {', '.join(METHODS)}")
    trace = None
    if method == "hypermap":
        emb = hypermap_embed(g, p, kind, tie_seed, angle_grid)
    else:
        emb = ncmce_embed(g, p, kind, tie_seed)
        if method == "ncmce-opt":
            emb, trace = optimize(g, emb, schedule or OptimizerSchedule())
    emb = emb.with_theta(emb.theta, method=method)
    return (emb, trace) if return_trace else emb


def fit_params(g: Graph, kind: str = "total", tie_seed=None, start=None,
               zeta: float = 1.0, step_factor: float = 0.1, tol: float = 1e-4,
               fit_m: bool = True) -> EpsoParams:
    """Estimate ``(m, L, beta, T)`` from a plain ncMCE layout of ``g``."""
    mean_k = 2.0 * g.n_edges / g.n_nodes
    if start is None:
        start = (mean_k / 2.0, 0.5, 0.5)
    m0, beta0, t0 = start
    seed_params = EpsoParams(zeta=zeta, n_nodes=g.n_nodes, m=max(m0, 1e-9),
                             ell=mean_k / 2.0 - m0, beta=beta0, temperature=t0)
    emb = ncmce_embed(g, seed_params, kind, tie_seed)
    return estimate_parameters(g, emb, start=start, step_factor=step_factor, tol=tol,
                               fit_m=fit_m)


def ncmce_opt_embed(g: Graph, p: EpsoParams, kind: str = "total", tie_seed=None,
                    schedule: Optional[OptimizerSchedule] = None) -> Embedding:
    return embed(g, "ncmce-opt", p, kind, tie_seed, schedule)
