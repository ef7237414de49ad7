"""Bessel and Hankel functions of orders 0 and 1 for real arguments.

The evaluation itself lives in the backend modules (``_core`` compiled,
``_pycore`` numpy); this module validates input, handles ``x == 0`` for the
regular functions and exposes a small, array-friendly API.

Examples
--------
>>> from mixbie.specfun import bessel, hankel1
>>> round(bessel("J0", 1.0), 12)
0.765197686558
>>> h = hankel1(0, 1.0)
>>> round(h.imag, 12)
0.088256964216
"""

from dataclasses import dataclass

import numpy as np

from mixbie import _backend

KINDS = ("J0", "Y0", "J1", "Y1")
EULER_GAMMA_VALUE = 0.57721566490153286060651209


class DomainError(ValueError):
    """Raised when an argument is outside the domain of a function."""


@dataclass(frozen=True)
class CylFnValue:
    """Values of the Bessel functions of the first and second kind."""

    j: float
    y: float


def _as_positive(x, allow_zero):
    arr = np.asarray(x, dtype=np.float64)
    if not np.all(np.isfinite(arr)):
        raise DomainError("argument must be finite")
    bad = arr < 0.0 if allow_zero else arr <= 0.0
    if np.any(bad):
        raise DomainError("argument must be positive" + (" or zero" if allow_zero else ""))
    return arr


def bessel01(x, backend=None):
    """Evaluate ``J0, Y0, J1, Y1`` at positive arguments.

    Parameters
    ----------
    x : array_like
        Strictly positive, finite arguments.
    backend : {"cython", "python"}, optional
        Force a kernel backend; default is the active one.

    Returns
    -------
    tuple of ndarray
        ``(J0, Y0, J1, Y1)``, each with the shape of ``x``.
    """
    arr = _as_positive(x, allow_zero=False)
    vals = _backend.get(backend).bessel01(arr.ravel())
    return tuple(np.asarray(v).reshape(arr.shape) for v in vals)


def bessel(kind, x):
    """Evaluate one of ``J0``, ``J1``, ``Y0``, ``Y1``.

    The regular functions accept ``x == 0``; the singular ones require
    ``x > 0``.  Scalars in give a float out, arrays give arrays.
    """
    if kind not in KINDS:
        raise ValueError(f"unknown kind {kind!r}; expected one of {KINDS}")
    regular = kind.startswith("J")
    arr = _as_positive(x, allow_zero=regular)
    out = np.empty_like(arr)
    pos = arr > 0.0
    if np.any(pos):
        vals = _backend.get().bessel01(arr[pos])
        out[pos] = vals[KINDS.index(kind)]
    if regular:
        out[~pos] = 1.0 if kind == "J0" else 0.0
    return float(out) if out.ndim == 0 else out


def cylfn(order, x):
    """Return a :class:`CylFnValue` for scalar ``x > 0``."""
    j0, y0, j1, y1 = bessel01(float(x))
    if order == 0:
        return CylFnValue(float(j0), float(y0))
    if order == 1:
        return CylFnValue(float(j1), float(y1))
    raise ValueError("order must be 0 or 1")


def hankel1(order, x):
    """Hankel function of the first kind ``H_order = J_order + i Y_order``."""
    if order not in (0, 1):
        raise ValueError("order must be 0 or 1")
    j0, y0, j1, y1 = bessel01(x)
    out = j0 + 1j * y0 if order == 0 else j1 + 1j * y1
    return complex(out) if np.ndim(out) == 0 else out


def j0_zero(guess=2.4, tol=1e-15, maxiter=50):
    """Locate a zero of ``J0`` near ``guess`` by Newton's method (``J0' = -J1``)."""
    x = float(guess)
    for _ in range(maxiter):
        j0, _, j1, _ = bessel01(x)
        step = float(j0) / -float(j1)
        x -= step
        if abs(step) < tol * abs(x):
            return x
    raise RuntimeError("Newton iteration for a J0 zero did not converge")
