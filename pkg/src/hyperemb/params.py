"""Model parameter bundle shared by the generators and the loss."""
from __future__ import annotations

import math
from dataclasses import dataclass, replace

from .errors import ParameterError


@dataclass(frozen=True)
class EpsoParams:
    """Parameters of the (E-)PSO model.

    Attributes
    ----------
    zeta : float
        Square root of minus the curvature.
    n_nodes : int
    m : float
        Expected number of external links per new node (may be fractional).
    ell : float
        Net number of internal links per step; negative means net deletion.
    beta : float
        Popularity fading, ``0 < beta <= 1``.
    temperature : float
        ``0 <= T < 1``.
    """

    zeta: float = 1.0
    n_nodes: int = 1
    m: float = 2.0
    ell: float = 0.0
    beta: float = 2.0 / 3.0
    temperature: float = 0.3

    def __post_init__(self):
        if not (self.zeta > 0 and math.isfinite(self.zeta)):
            raise ParameterError(f"zeta must be > 0, got {self.zeta}")
        if int(self.n_nodes) != self.n_nodes or self.n_nodes < 1:
            raise ParameterError(f"n_nodes must be an integer >= 1, got {self.n_nodes}")
        if not (self.m >= 0 and math.isfinite(self.m)):
            raise ParameterError(f"m must be >= 0, got {self.m}")
        if not math.isfinite(self.ell):
            raise ParameterError(f"L must be finite, got {self.ell}")
        if not (0 < self.beta <= 1):
            raise ParameterError(f"beta must lie in (0, 1], got {self.beta}")
        if not (0 <= self.temperature < 1):
            raise ParameterError(f"T must lie in [0, 1), got {self.temperature}")
        if self.m + self.ell < 0:
            raise ParameterError(f"m + L must be >= 0, got {self.m + self.ell}")

    @property
    def T(self) -> float:
        return self.temperature

    def with_(self, **changes) -> "EpsoParams":
        return replace(self, **changes)

    def as_dict(self) -> dict:
        return {
            "zeta": self.zeta,
            "N": self.n_nodes,
            "m": self.m,
            "L": self.ell,
            "beta": self.beta,
            "T": self.temperature,
        }
