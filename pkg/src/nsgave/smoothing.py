"""Smoothing of the absolute value: phi(mu, x) = sqrt(mu^2 + x^2) - mu.

All functions accept scalars or numpy arrays and broadcast.
For mu >= 0 the rationalized forms

    phi      = x^2 / (r + mu)
    dphi/dmu = -x^2 / (r (r + mu))

with r = hypot(mu, x) are used; they avoid the cancellation of
``r - mu`` when |x| << mu and agree with the textbook expressions
exactly in exact arithmetic.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DegeneratePoint, NonpositiveMu


def _scalar_or_array(out):
    return float(out) if np.ndim(out) == 0 else out


def phi(mu, x):
    """Smoothed |x|; ``phi(0, x) == |x|`` exactly and ``phi(0, 0) == 0``."""
    mu = np.asarray(mu, dtype=np.float64)
    x = np.asarray(x, dtype=np.float64)
    r = np.hypot(mu, x)
    with np.errstate(invalid="ignore", divide="ignore"):
        denom = r + mu
        stable = x * (x / denom)
        direct = r - mu
    out = np.where(mu >= 0, np.where(denom > 0, stable, 0.0), direct)
    return _scalar_or_array(out)


def phi_partials(mu, x):
    """Return ``(dphi/dmu, dphi/dx)``; undefined at the origin."""
    mu = np.asarray(mu, dtype=np.float64)
    x = np.asarray(x, dtype=np.float64)
    r = np.hypot(mu, x)
    if np.any(r == 0):
        raise DegeneratePoint("phi is not differentiable at (mu, x) = (0, 0)")
    d_x = x / r
    with np.errstate(invalid="ignore", divide="ignore"):
        d_mu = np.where(mu >= 0, -d_x * (x / (r + mu)), mu / r - 1.0)
    return _scalar_or_array(d_mu), _scalar_or_array(d_x)


def phi_vec(mu: float, x) -> np.ndarray:
    """Componentwise lift Phi(mu, x) for a vector x."""
    return np.atleast_1d(np.asarray(phi(mu, np.asarray(x, dtype=np.float64)), dtype=np.float64))


@dataclass(frozen=True)
class JacobianParts:
    """Ingredients of the Jacobian of H at (mu, x).

    ``v1[i]`` is dphi/dmu at (mu, x_i) and ``v2_diag[i]`` is dphi/dx.
    The Jacobian is ``[[1, 0], [B @ v1, A + B @ diag(v2_diag)]]``.
    Mathematically v1 lies in (-1, 0] and |v2| < 1 for mu > 0; in floating
    point the bounds become closed once mu/|x_i| drops below ~1e-8.
    """

    v1: np.ndarray
    v2_diag: np.ndarray
    mu: float


def jacobian_parts(mu: float, x) -> JacobianParts:
    if not mu > 0:
        raise NonpositiveMu(f"smoothing parameter must be positive, got {mu!r}")
    x = np.atleast_1d(np.asarray(x, dtype=np.float64))
    v1, v2 = phi_partials(mu, x)
    return JacobianParts(np.atleast_1d(v1), np.atleast_1d(v2), float(mu))
