"""Green's function of the Helmholtz/Laplace equation and its derivatives.

``omega > 0`` selects the outgoing Helmholtz kernel ``(i/4) H0(omega r)``;
``omega == 0`` selects the Laplace kernel ``-log(r) / (2 pi)``.  Points are
arrays whose last axis has length two, so every function broadcasts.

Log splitting
-------------
Near the diagonal each kernel is written as ``K = K_log * log r + K_smooth``
with ``K_log`` and ``K_smooth`` smooth.  For the single layer
``K_log = -J0(omega r) / (2 pi)``; for the double layer (source normal ``n``)
``K_log = omega J1(omega r) (n . (y - x)) / (2 pi r)``.
"""

from dataclasses import dataclass
import math

import numpy as np

from mixbie.specfun import EULER_GAMMA_VALUE, bessel01

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class KernelSplit:
    """``kernel = log_coeff * log|x - y| + smooth_part``."""

    log_coeff: complex
    smooth_part: complex


def _check_omega(omega):
    if not (omega >= 0.0 and math.isfinite(omega)):
        raise ValueError("omega must be finite and non-negative")


def _separation(x, y):
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    d = y - x
    r = np.hypot(d[..., 0], d[..., 1])
    if np.any(r == 0.0):
        raise ValueError("coincident source and target points")
    return d, r


def _scalar(v):
    return complex(v) if np.ndim(v) == 0 else v


def greens(omega, x, y):
    """Free-space Green's function ``G(x, y)``.

    Examples
    --------
    >>> greens(0.0, [0.0, 0.0], [1.0, 0.0])
    0j
    """
    _check_omega(omega)
    _, r = _separation(x, y)
    if omega == 0.0:
        return _scalar(-np.log(r) / TWO_PI + 0j)
    j0, y0, _, _ = bessel01(omega * r)
    return _scalar(0.25j * (j0 + 1j * y0))


def radial_derivative(omega, r):
    """``dG/dr`` as a function of the separation ``r``."""
    r = np.asarray(r, dtype=np.float64)
    if omega == 0.0:
        return -1.0 / (TWO_PI * r) + 0j
    _, _, j1, y1 = bessel01(omega * r)
    # H0' = -H1
    return -0.25j * omega * (j1 + 1j * y1)


def greens_normal_grad(omega, x, y, normal, side="source"):
    """Normal derivative of ``G`` at the source or the target.

    ``side="source"`` gives ``n . grad_y G`` (double-layer kernel) and
    ``side="target"`` gives ``n . grad_x G`` (adjoint double-layer kernel).
    """
    _check_omega(omega)
    d, r = _separation(x, y)
    n = np.asarray(normal, dtype=np.float64)
    proj = np.sum(n * d, axis=-1) / r
    if side == "source":
        return _scalar(radial_derivative(omega, r) * proj)
    if side == "target":
        return _scalar(-radial_derivative(omega, r) * proj)
    raise ValueError("side must be 'source' or 'target'")


def laplace_hypersingular(x, y, normal_x, normal_y):
    """``n_x . grad_x (n_y . grad_y G0)`` for the Laplace kernel."""
    d, r = _separation(x, y)
    nx = np.asarray(normal_x, dtype=np.float64)
    ny = np.asarray(normal_y, dtype=np.float64)
    dot = np.sum(nx * ny, axis=-1)
    px = np.sum(nx * d, axis=-1)
    py = np.sum(ny * d, axis=-1)
    r2 = r * r
    return (dot / r2 - 2.0 * px * py / (r2 * r2)) / TWO_PI


def single_log_coeff(omega, r):
    """``K_log`` of the single-layer kernel."""
    r = np.asarray(r, dtype=np.float64)
    if omega == 0.0:
        return np.full(r.shape, -1.0 / TWO_PI)
    j0 = np.where(r > 0, bessel01(np.where(r > 0, omega * r, 1.0))[0], 1.0)
    return -j0 / TWO_PI


def single_diagonal_smooth(omega):
    """Limit of ``K_smooth`` of the single layer as ``r -> 0``."""
    if omega == 0.0:
        return 0.0
    return 0.25j - (math.log(0.5 * omega) + EULER_GAMMA_VALUE) / TWO_PI


def double_log_coeff(omega, r, proj_over_r):
    """``K_log`` of the double-layer kernels.

    ``proj_over_r`` is ``n . (y - x) / r`` for the double layer or
    ``n_x . (x - y) / r`` for its adjoint.
    """
    r = np.asarray(r, dtype=np.float64)
    if omega == 0.0:
        return np.zeros(r.shape)
    j1 = bessel01(np.maximum(omega * r, 1e-300))[2]
    return omega * j1 * proj_over_r / TWO_PI


def split(omega, x, y):
    """Log/smooth split of the single-layer kernel at one point pair."""
    _check_omega(omega)
    _, r = _separation(x, y)
    coeff = complex(single_log_coeff(omega, float(r)))
    return KernelSplit(coeff, complex(greens(omega, x, y)) - coeff * math.log(float(r)))


def split_double_layer(omega, x, y, normal, side="source"):
    """Log/smooth split of the double-layer (or adjoint) kernel."""
    _check_omega(omega)
    d, r = _separation(x, y)
    n = np.asarray(normal, dtype=np.float64)
    proj = float(np.sum(n * d)) / float(r)
    if side == "target":
        proj = -proj
    coeff = complex(double_log_coeff(omega, float(r), proj))
    full = complex(greens_normal_grad(omega, x, y, normal, side))
    return KernelSplit(coeff, full - coeff * math.log(float(r)))


def diagonal_limit_double_layer(curve, t):
    """Limit of the Laplace double-layer kernel as the source approaches ``t``.

    Equals ``-kappa(t) / (4 pi)`` with the signed curvature ``kappa``
    (positive on convex arcs), so ``-1 / (4 pi)`` on the unit circle.
    """
    for c in curve.corners:
        if np.any(np.isclose(t, c, atol=1e-14)):
            raise ValueError("no diagonal limit at a corner")
    return -curve.curvature(t) / (2.0 * TWO_PI)
