"""Pure-numpy implementations of the hot kernels.

This module mirrors ``mixbie._core`` function for function.  It is used when
the compiled extension is unavailable (or when ``MIXBIE_PURE_PYTHON=1``) and
is the baseline the compiled code is benchmarked and tested against.

Cylinder functions of orders 0 and 1 are evaluated in three regimes:

* ``x < SERIES_MAX``: ascending power series,
* ``SERIES_MAX <= x < ASYMPTOTIC_MIN``: Miller backward recurrence for
  ``J_k`` normalised by ``J_0 + 2 sum J_2k = 1``, with ``Y_0``/``Y_1`` from
  the Neumann series,
* ``x >= ASYMPTOTIC_MIN``: Hankel asymptotic expansion.
"""

import math

import numpy as np

SERIES_MAX = 6.0
ASYMPTOTIC_MIN = 25.0

EULER_GAMMA = 0.57721566490153286060651209
TWO_OVER_PI = 2.0 / math.pi

_N_SERIES = 26
_N_ASYMPTOTIC = 24
_ROW_BLOCK = 256


def _series_coefficients():
    # coefficients in powers of y = -x**2/4
    j0 = np.empty(_N_SERIES)
    j1 = np.empty(_N_SERIES)
    y0 = np.empty(_N_SERIES)
    y1 = np.empty(_N_SERIES)
    harmonic = 0.0
    for k in range(_N_SERIES):
        if k > 0:
            harmonic += 1.0 / k
        fk = math.factorial(k)
        j0[k] = 1.0 / (fk * fk)
        j1[k] = 1.0 / (fk * math.factorial(k + 1))
        y0[k] = harmonic * j0[k]
        # psi(k+1) + psi(k+2) with the -2*gamma part folded into log(x/2)+gamma
        y1[k] = (2.0 * harmonic + 1.0 / (k + 1)) * j1[k]
    return j0, j1, y0, y1


def _asymptotic_coefficients(order):
    mu = 4.0 * order * order
    a = np.empty(_N_ASYMPTOTIC)
    a[0] = 1.0
    for k in range(1, _N_ASYMPTOTIC):
        a[k] = a[k - 1] * (mu - (2 * k - 1) ** 2) / (k * 8.0)
    p = np.array([(-1) ** m * a[2 * m] for m in range(_N_ASYMPTOTIC // 2)])
    q = np.array([(-1) ** m * a[2 * m + 1] for m in range(_N_ASYMPTOTIC // 2)])
    return p, q


SERIES_J0, SERIES_J1, SERIES_Y0, SERIES_Y1 = _series_coefficients()
ASYM_P0, ASYM_Q0 = _asymptotic_coefficients(0)
ASYM_P1, ASYM_Q1 = _asymptotic_coefficients(1)


def _horner(coeffs, y):
    acc = np.full_like(y, coeffs[-1])
    for c in coeffs[-2::-1]:
        acc = acc * y + c
    return acc


def _series(x):
    y = -0.25 * x * x
    j0 = _horner(SERIES_J0, y)
    j1 = 0.5 * x * _horner(SERIES_J1, y)
    lg = np.log(0.5 * x) + EULER_GAMMA
    y0 = TWO_OVER_PI * (lg * j0 - _horner(SERIES_Y0, y))
    y1 = TWO_OVER_PI * (lg * j1 - 1.0 / x) - 0.5 * x / math.pi * _horner(SERIES_Y1, y)
    return j0, y0, j1, y1


def miller_start(x):
    """Even starting order for the backward recurrence at argument ``x``."""
    return 2 * ((int(x) + 42) // 2)


def _miller(x):
    start = miller_start(float(np.max(x))) if x.size else 2
    b_above = np.zeros_like(x)
    b_cur = np.full_like(x, 1e-30)
    b_odd_above = np.zeros_like(x)
    norm = np.zeros_like(x)
    y0_sum = np.zeros_like(x)
    y1_sum = np.zeros_like(x)
    b1 = b_cur
    two_over_x = 2.0 / x
    for k in range(start, 0, -1):
        m = (k + 1) // 2
        sign = 1.0 if m % 2 == 0 else -1.0
        if k % 2 == 0:
            norm += 2.0 * b_cur
            y0_sum += sign * b_cur / m
        else:
            y1_sum += sign * (b_cur - b_odd_above) / m
            b_odd_above = b_cur
            if k == 1:
                b1 = b_cur
        b_above, b_cur = b_cur, k * two_over_x * b_cur - b_above
    norm += b_cur
    j0 = b_cur / norm
    j1 = b1 / norm
    lg = np.log(0.5 * x) + EULER_GAMMA
    y0 = TWO_OVER_PI * (lg * j0 - 2.0 * y0_sum / norm)
    y1 = TWO_OVER_PI * (-j0 / x + lg * j1 + y1_sum / norm)
    return j0, y0, j1, y1


def _asymptotic(x):
    w = 1.0 / x
    w2 = w * w
    p0 = _horner(ASYM_P0, w2)
    q0 = w * _horner(ASYM_Q0, w2)
    p1 = _horner(ASYM_P1, w2)
    q1 = w * _horner(ASYM_Q1, w2)
    amp = np.sqrt(TWO_OVER_PI * w)
    c = np.cos(x)
    s = np.sin(x)
    r = math.sqrt(0.5)
    # phases x - pi/4 and x - 3pi/4, expanded to avoid losing digits
    c0, s0 = r * (c + s), r * (s - c)
    c1, s1 = r * (s - c), -r * (s + c)
    j0 = amp * (p0 * c0 - q0 * s0)
    y0 = amp * (p0 * s0 + q0 * c0)
    j1 = amp * (p1 * c1 - q1 * s1)
    y1 = amp * (p1 * s1 + q1 * c1)
    return j0, y0, j1, y1


def bessel01(x):
    """Return ``(J0, Y0, J1, Y1)`` at the entries of ``x``.

    ``x`` must hold strictly positive finite values; the public wrappers in
    ``mixbie.specfun`` handle validation and ``x == 0``.
    """
    x = np.asarray(x, dtype=np.float64)
    out = [np.empty_like(x) for _ in range(4)]
    for mask, fn in ((x < SERIES_MAX, _series),
                     ((x >= SERIES_MAX) & (x < ASYMPTOTIC_MIN), _miller),
                     (x >= ASYMPTOTIC_MIN, _asymptotic)):
        if np.any(mask):
            vals = fn(x[mask])
            for o, v in zip(out, vals):
                o[mask] = v
    return tuple(out)


def regime_values(x, regime):
    """Evaluate a single regime at ``x`` regardless of the switch points."""
    fn = {"series": _series, "miller": _miller, "asymptotic": _asymptotic}[regime]
    return fn(np.atleast_1d(np.asarray(x, dtype=np.float64)))


# -- kernel matrices --------------------------------------------------------

def _pair_geometry(tx, ty, sx, sy, rows):
    dx = sx[None, :] - tx[rows, None]
    dy = sy[None, :] - ty[rows, None]
    return dx, dy, np.hypot(dx, dy)


def fill_laplace(tx, ty, tnx, tny, sx, sy, snx, sny, sw, S, D, Ds):
    """Laplace single, double and adjoint layer entries times source weights.

    Entries where target and source coincide are set to zero.  Any of the
    output arrays may be ``None``.
    """
    nt = tx.shape[0]
    for lo in range(0, nt, _ROW_BLOCK):
        rows = slice(lo, min(lo + _ROW_BLOCK, nt))
        dx, dy, r = _pair_geometry(tx, ty, sx, sy, rows)
        zero = r == 0.0
        r[zero] = 1.0
        scale = sw[None, :] / (-2.0 * math.pi)
        if S is not None:
            blk = np.log(r) * scale
            blk[zero] = 0.0
            S[rows] = blk
        if D is not None:
            blk = (snx[None, :] * dx + sny[None, :] * dy) / (r * r) * scale
            blk[zero] = 0.0
            D[rows] = blk
        if Ds is not None:
            blk = -(tnx[rows, None] * dx + tny[rows, None] * dy) / (r * r) * scale
            blk[zero] = 0.0
            Ds[rows] = blk


def fill_helmholtz(omega, tx, ty, tnx, tny, sx, sy, snx, sny, sw, S, D, Ds):
    """Helmholtz counterpart of :func:`fill_laplace` for ``omega > 0``."""
    nt = tx.shape[0]
    for lo in range(0, nt, _ROW_BLOCK):
        rows = slice(lo, min(lo + _ROW_BLOCK, nt))
        dx, dy, r = _pair_geometry(tx, ty, sx, sy, rows)
        zero = r == 0.0
        r[zero] = 1.0
        j0, y0, j1, y1 = bessel01(omega * r)
        if S is not None:
            blk = 0.25j * (j0 + 1j * y0) * sw[None, :]
            blk[zero] = 0.0
            S[rows] = blk
        if D is not None or Ds is not None:
            radial = (-0.25j * omega) * (j1 + 1j * y1) / r * sw[None, :]
            if D is not None:
                blk = radial * (snx[None, :] * dx + sny[None, :] * dy)
                blk[zero] = 0.0
                D[rows] = blk
            if Ds is not None:
                blk = radial * -(tnx[rows, None] * dx + tny[rows, None] * dy)
                blk[zero] = 0.0
                Ds[rows] = blk
