"""Polar coordinates on the native disk and the hyperbolic distance."""
from __future__ import annotations

import math
from typing import NamedTuple

import numpy as np

from .errors import ParameterError

TWO_PI = 2.0 * math.pi


class PolarCoord(NamedTuple):
    r: float
    theta: float


def polar(r: float, theta: float) -> PolarCoord:
    """Validated coordinate with the angle wrapped into ``[0, 2*pi)``."""
    if not (r >= 0):
        raise ParameterError(f"radial coordinate must be >= 0, got {r}")
    return PolarCoord(float(r), normalize_angle(theta))


def check_zeta(zeta: float) -> float:
    if not (zeta > 0 and math.isfinite(zeta)):
        raise ParameterError(f"zeta must be positive, got {zeta}")
    return float(zeta)


def normalize_angle(theta):
    """Wrap angles into ``[0, 2*pi)``; works on scalars and arrays."""
    t = np.mod(theta, TWO_PI)
    # np.mod can return exactly 2*pi for tiny negative inputs
    t = np.where(t >= TWO_PI, 0.0, t)
    return float(t) if np.ndim(t) == 0 else t


def angular_difference(theta_i, theta_j):
    """``pi - |pi - |theta_i - theta_j||`` for angles already in ``[0, 2*pi)``."""
    return np.pi - np.abs(np.pi - np.abs(np.asarray(theta_i) - np.asarray(theta_j)))


def cosh_distance(r_i, theta_i, r_j, theta_j, zeta=1.0):
    """``cosh(zeta * x)`` from the hyperbolic law of cosines.

    Uses the equivalent form ``cosh(z(r_i - r_j)) + 2 sinh(z r_i) sinh(z r_j)
    sin^2(dtheta / 2)``, which avoids cancellation for nearby points.
    """
    r_i = np.asarray(r_i, dtype=float)
    r_j = np.asarray(r_j, dtype=float)
    dtheta = angular_difference(theta_i, theta_j)
    s = np.sin(0.5 * dtheta)
    return np.cosh(zeta * (r_i - r_j)) + 2.0 * np.sinh(zeta * r_i) * np.sinh(zeta * r_j) * s * s


def hyperbolic_distance(a, b, zeta: float = 1.0):
    """Hyperbolic distance between two :class:`PolarCoord` (or ``(r, theta)`` pairs).

    Broadcasts when the components are arrays.
    """
    c = cosh_distance(a[0], a[1], b[0], b[1], zeta)
    return np.arccosh(np.maximum(c, 1.0)) / zeta


def distance_matrix(r, theta, zeta: float = 1.0) -> np.ndarray:
    """All pairwise hyperbolic distances for coordinate arrays ``r`` and ``theta``."""
    r = np.asarray(r, dtype=float)
    theta = np.asarray(theta, dtype=float)
    c = cosh_distance(r[:, None], theta[:, None], r[None, :], theta[None, :], zeta)
    d = np.arccosh(np.maximum(c, 1.0)) / zeta
    np.fill_diagonal(d, 0.0)
    return d
