"""Gauss-Legendre panel rules and product-integration weights.

Singular and near-singular panel integrals are handled by product
integration in the panel's parameter variable ``u in [-1, 1]``.  For a
target whose (complex) preimage on the panel is ``z``, the moments

    L_k(z) = int_{-1}^{1} P_k(u) log|u - z| du,
    C_k(z) = int_{-1}^{1} P_k(u) / (u - z) du,

are computed from Legendre functions of the second kind, and converted to
nodal weights by expanding the smooth factor of the integrand in Legendre
polynomials through the Gauss nodes.
"""

from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from numpy.polynomial import legendre as npleg

# Bernstein-ellipse parameter below which moments come from the Q_k recurrence;
# above it a high-order Gauss rule resolves the (mildly) near-singular moments.
RECURRENCE_RHO = 1.25
_FALLBACK_ORDER = 128


@dataclass(frozen=True)
class PanelRule:
    """Gauss-Legendre rule on ``(-1, 1)``."""

    nodes: np.ndarray
    weights: np.ndarray

    @property
    def q(self):
        return self.nodes.shape[0]


@dataclass(frozen=True)
class SingularRule:
    """Weights replacing the Gauss weights for one (target, panel) pair.

    Attributes
    ----------
    target : complex
        Preimage of the target in the panel variable.
    weights : ndarray
        ``q`` real weights, possibly negative.
    panel : int
        Index of the source panel, or -1 for a standalone rule.
    """

    target: complex
    weights: np.ndarray
    panel: int = -1


@lru_cache(maxsize=None)
def _gauss_legendre(q):
    x, w = npleg.leggauss(q)
    x.setflags(write=False)
    w.setflags(write=False)
    return PanelRule(x, w)


def gauss_legendre(q):
    """Gauss-Legendre nodes and weights.

    Parameters
    ----------
    q : int
        Number of nodes, ``1 <= q <= 64`` (larger orders are used internally).

    Examples
    --------
    >>> gauss_legendre(2).nodes
    array([-0.57735027,  0.57735027])
    """
    if not 1 <= int(q) <= 64:
        raise ValueError("q must lie in [1, 64]")
    return _gauss_legendre(int(q))


@lru_cache(maxsize=None)
def _coefficient_map(q):
    """Matrix taking nodal values to Legendre coefficients (exact for degree < q)."""
    rule = _gauss_legendre(q)
    vander = npleg.legvander(rule.nodes, q - 1)
    scale = (2 * np.arange(q) + 1) / 2.0
    out = scale[:, None] * vander.T * rule.weights[None, :]
    out.setflags(write=False)
    return out


def bernstein_rho(z):
    """Bernstein-ellipse parameter of ``z`` with respect to ``[-1, 1]``."""
    z = np.asarray(z, dtype=np.complex128)
    w = z + np.sqrt(z - 1) * np.sqrt(z + 1)
    return np.maximum(np.abs(w), 1.0 / np.maximum(np.abs(w), 1e-300))


def legendre_q(z, n):
    """Legendre functions of the second kind ``Q_0 .. Q_n``.

    Complex ``z`` off the interval gives ``Q_k(z) = 1/2 int P_k(u)/(z-u) du``;
    real ``z`` in ``(-1, 1)`` gives the on-cut (principal value) functions.

    Returns
    -------
    ndarray, shape ``(n + 1,) + z.shape``
    """
    z = np.asarray(z)
    if np.isrealobj(z):
        if np.any(np.abs(z) >= 1.0):
            raise ValueError("real arguments must lie strictly inside (-1, 1)")
        q0 = np.arctanh(z)
    else:
        q0 = 0.5 * (np.log(z + 1) - np.log(z - 1))
    out = np.empty((n + 1,) + z.shape, dtype=q0.dtype)
    out[0] = q0
    if n >= 1:
        out[1] = z * q0 - 1.0
    for k in range(1, n):
        out[k + 1] = ((2 * k + 1) * z * out[k] - k * out[k - 1]) / (k + 1)
    return out


def _numeric_moments(z, n):
    rule = _gauss_legendre_big()
    vander = npleg.legvander(rule.nodes, n - 1)
    diff = rule.nodes[None, :] - z[:, None]
    wl = rule.weights[None, :] * np.log(np.abs(diff))
    wc = rule.weights[None, :] / diff
    return wl @ vander, wc @ vander


@lru_cache(maxsize=None)
def _gauss_legendre_big():
    x, w = npleg.leggauss(_FALLBACK_ORDER)
    return PanelRule(x, w)


def _recurrence_moments(z, n):
    q = legendre_q(z, n)
    cauchy = -2.0 * q[:n].T
    log = np.empty((z.shape[0], n))
    if np.isrealobj(z):
        log[:, 0] = (1 - z) * np.log(1 - z) + (1 + z) * np.log(1 + z) - 2.0
    else:
        log[:, 0] = np.real((1 - z) * np.log(1 - z) - (-1 - z) * np.log(-1 - z)) - 2.0
    for k in range(1, n):
        log[:, k] = np.real(2.0 * (q[k + 1] - q[k - 1]) / (2 * k + 1))
    return log, cauchy


def moments(z, n):
    """Log and Cauchy moments of ``P_0 .. P_{n-1}`` about each ``z``.

    Parameters
    ----------
    z : array_like
        Complex preimages, or real values in ``(-1, 1)`` for on-panel targets
        (the Cauchy moments are then principal values).
    n : int
        Number of moments.

    Returns
    -------
    log_m : ndarray, shape ``(m, n)``, real
    cauchy_m : ndarray, shape ``(m, n)``, complex
    """
    z = np.atleast_1d(np.asarray(z))
    if np.isrealobj(z):
        return _recurrence_moments(z.astype(np.float64), n)
    z = z.astype(np.complex128)
    log_m = np.empty((z.shape[0], n))
    cauchy_m = np.empty((z.shape[0], n), dtype=np.complex128)
    near = bernstein_rho(z) < RECURRENCE_RHO
    if np.any(near):
        log_m[near], cauchy_m[near] = _recurrence_moments(z[near], n)
    if np.any(~near):
        log_m[~near], cauchy_m[~near] = _numeric_moments(z[~near], n)
    return log_m, cauchy_m


def product_weights(moment_rows, q):
    """Convert Legendre moments (rows) into nodal weights on the ``q``-point rule."""
    return np.asarray(moment_rows) @ _coefficient_map(q)


def log_corrected_weights(target, q=16, panel_z=None, target_z=None, panel_dz=None,
                          panel=-1):
    """Weights for ``int f(u) log|tau(target) - tau(u)| du`` on one panel.

    Parameters
    ----------
    target : float or complex
        Preimage of the target in the panel variable.  A real value in
        ``(-1, 1)`` equal to a Gauss node marks a self interaction.
    q : int
        Panel order.
    panel_z : ndarray, optional
        Complex positions ``tau(u_j)`` of the panel nodes; default is the
        flat chart ``tau(u) = u``.
    target_z : complex, optional
        Complex position of the target; defaults to ``tau(target)`` for the
        flat chart.
    panel_dz : ndarray, optional
        ``tau'(u_j)``, needed only for self interactions on a curved chart.

    Returns
    -------
    SingularRule
    """
    rule = gauss_legendre(q)
    on_panel = np.isreal(target) and abs(np.real(target)) < 1.0
    z = np.real(target) if on_panel else complex(target)
    log_m, _ = moments(np.array([z]), q)
    w = product_weights(log_m, q)[0]
    if panel_z is None:
        panel_z = rule.nodes.astype(np.complex128)
        target_z = z
        panel_dz = np.ones(q)
    diff = rule.nodes - z
    hit = np.abs(diff) < 1e-14
    smooth = np.empty(q)
    safe = np.where(hit, 1.0, diff)
    smooth[~hit] = np.log(np.abs((panel_z[~hit] - target_z) / safe[~hit]))
    if np.any(hit):
        if panel_dz is None:
            raise ValueError("self interaction on a curved panel needs panel_dz")
        smooth[hit] = np.log(np.abs(panel_dz[hit]))
    return SingularRule(z, w + rule.weights * smooth, panel)
