# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels.

Scalar twins of the routines in ``mixbie._pycore``.  The cylinder function
regimes, switch points and expansion lengths are identical so that both
backends agree to rounding.
"""

import numpy as np
cimport numpy as cnp
from libc.math cimport sqrt, log, cos, sin, hypot, M_PI

cnp.import_array()

from mixbie._pycore import (SERIES_MAX, ASYMPTOTIC_MIN, SERIES_J0, SERIES_J1,
                            SERIES_Y0, SERIES_Y1, ASYM_P0, ASYM_Q0, ASYM_P1,
                            ASYM_Q1)

cdef double _SERIES_MAX = SERIES_MAX
cdef double _ASYMPTOTIC_MIN = ASYMPTOTIC_MIN
cdef double _EULER_GAMMA = 0.57721566490153286060651209
cdef double _TWO_OVER_PI = 2.0 / M_PI

DEF NS = 26
DEF NA = 12

cdef double cj0[NS]
cdef double cj1[NS]
cdef double cy0[NS]
cdef double cy1[NS]
cdef double ap0[NA]
cdef double aq0[NA]
cdef double ap1[NA]
cdef double aq1[NA]

cdef int _i
for _i in range(NS):
    cj0[_i] = SERIES_J0[_i]
    cj1[_i] = SERIES_J1[_i]
    cy0[_i] = SERIES_Y0[_i]
    cy1[_i] = SERIES_Y1[_i]
for _i in range(NA):
    ap0[_i] = ASYM_P0[_i]
    aq0[_i] = ASYM_Q0[_i]
    ap1[_i] = ASYM_P1[_i]
    aq1[_i] = ASYM_Q1[_i]


cdef inline double _horner(const double *c, int n, double y) noexcept nogil:
    cdef double acc = c[n - 1]
    cdef int k
    for k in range(n - 2, -1, -1):
        acc = acc * y + c[k]
    return acc


cdef void _bessel01(double x, double *j0, double *y0,
                    double *j1, double *y1) noexcept nogil:
    cdef double y, lg, w, w2, amp, c, s, r, p0, q0, p1, q1, c0, s0, c1, s1
    cdef double b_above, b_cur, b_next, b_odd_above, b1, norm, y0_sum, y1_sum, sign
    cdef int k, m, start
    if x < _SERIES_MAX:
        y = -0.25 * x * x
        j0[0] = _horner(cj0, NS, y)
        j1[0] = 0.5 * x * _horner(cj1, NS, y)
        lg = log(0.5 * x) + _EULER_GAMMA
        y0[0] = _TWO_OVER_PI * (lg * j0[0] - _horner(cy0, NS, y))
        y1[0] = (_TWO_OVER_PI * (lg * j1[0] - 1.0 / x)
                 - 0.5 * x / M_PI * _horner(cy1, NS, y))
    elif x < _ASYMPTOTIC_MIN:
        start = 2 * ((<int>x + 42) // 2)
        b_above = 0.0
        b_cur = 1e-30
        b_odd_above = 0.0
        b1 = b_cur
        norm = 0.0
        y0_sum = 0.0
        y1_sum = 0.0
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
            b_next = k * (2.0 / x) * b_cur - b_above
            b_above = b_cur
            b_cur = b_next
        norm += b_cur
        j0[0] = b_cur / norm
        j1[0] = b1 / norm
        lg = log(0.5 * x) + _EULER_GAMMA
        y0[0] = _TWO_OVER_PI * (lg * j0[0] - 2.0 * y0_sum / norm)
        y1[0] = _TWO_OVER_PI * (-j0[0] / x + lg * j1[0] + y1_sum / norm)
    else:
        w = 1.0 / x
        w2 = w * w
        p0 = _horner(ap0, NA, w2)
        q0 = w * _horner(aq0, NA, w2)
        p1 = _horner(ap1, NA, w2)
        q1 = w * _horner(aq1, NA, w2)
        amp = sqrt(_TWO_OVER_PI * w)
        c = cos(x)
        s = sin(x)
        r = sqrt(0.5)
        c0 = r * (c + s)
        s0 = r * (s - c)
        c1 = r * (s - c)
        s1 = -r * (s + c)
        j0[0] = amp * (p0 * c0 - q0 * s0)
        y0[0] = amp * (p0 * s0 + q0 * c0)
        j1[0] = amp * (p1 * c1 - q1 * s1)
        y1[0] = amp * (p1 * s1 + q1 * c1)


def bessel01(x):
    """Return ``(J0, Y0, J1, Y1)`` at the entries of positive array ``x``."""
    xa = np.ascontiguousarray(x, dtype=np.float64)
    shape = xa.shape
    cdef const double[::1] xv = xa.ravel()
    cdef Py_ssize_t n = xv.shape[0], i
    out = np.empty((4, n))
    cdef double[:, ::1] o = out
    with nogil:
        for i in range(n):
            _bessel01(xv[i], &o[0, i], &o[1, i], &o[2, i], &o[3, i])
    return tuple(out[k].reshape(shape) for k in range(4))


def fill_laplace(const double[::1] tx, const double[::1] ty,
                 const double[::1] tnx, const double[::1] tny,
                 const double[::1] sx, const double[::1] sy,
                 const double[::1] snx, const double[::1] sny,
                 const double[::1] sw, S, D, Ds):
    """Laplace single, double and adjoint layer entries times source weights."""
    cdef Py_ssize_t nt = tx.shape[0], ns = sx.shape[0], i, j
    cdef double[:, ::1] sv, dv, dsv
    cdef bint want_s = S is not None, want_d = D is not None
    cdef bint want_ds = Ds is not None
    cdef double dx, dy, r2, scale = -1.0 / (2.0 * M_PI)
    if want_s:
        sv = S
    if want_d:
        dv = D
    if want_ds:
        dsv = Ds
    with nogil:
        for i in range(nt):
            for j in range(ns):
                dx = sx[j] - tx[i]
                dy = sy[j] - ty[i]
                r2 = dx * dx + dy * dy
                if r2 == 0.0:
                    if want_s:
                        sv[i, j] = 0.0
                    if want_d:
                        dv[i, j] = 0.0
                    if want_ds:
                        dsv[i, j] = 0.0
                    continue
                if want_s:
                    sv[i, j] = 0.5 * log(r2) * scale * sw[j]
                if want_d:
                    dv[i, j] = (snx[j] * dx + sny[j] * dy) / r2 * scale * sw[j]
                if want_ds:
                    dsv[i, j] = -(tnx[i] * dx + tny[i] * dy) / r2 * scale * sw[j]


def fill_helmholtz(double omega, const double[::1] tx, const double[::1] ty,
                   const double[::1] tnx, const double[::1] tny,
                   const double[::1] sx, const double[::1] sy,
                   const double[::1] snx, const double[::1] sny,
                   const double[::1] sw, S, D, Ds):
    """Helmholtz counterpart of :func:`fill_laplace` for ``omega > 0``."""
    cdef Py_ssize_t nt = tx.shape[0], ns = sx.shape[0], i, j
    cdef double complex[:, ::1] sv, dv, dsv
    cdef bint want_s = S is not None, want_d = D is not None
    cdef bint want_ds = Ds is not None
    cdef double dx, dy, r, j0, y0, j1, y1
    cdef double complex radial
    if want_s:
        sv = S
    if want_d:
        dv = D
    if want_ds:
        dsv = Ds
    with nogil:
        for i in range(nt):
            for j in range(ns):
                dx = sx[j] - tx[i]
                dy = sy[j] - ty[i]
                r = hypot(dx, dy)
                if r == 0.0:
                    if want_s:
                        sv[i, j] = 0.0
                    if want_d:
                        dv[i, j] = 0.0
                    if want_ds:
                        dsv[i, j] = 0.0
                    continue
                _bessel01(omega * r, &j0, &y0, &j1, &y1)
                if want_s:
                    # (i/4) (J0 + i Y0)
                    sv[i, j] = (-0.25 * y0 + 0.25j * j0) * sw[j]
                if want_d or want_ds:
                    # -(i omega/4) (J1 + i Y1) / r
                    radial = (0.25 * omega * y1 - 0.25j * omega * j1) / r * sw[j]
                    if want_d:
                        dv[i, j] = radial * (snx[j] * dx + sny[j] * dy)
                    if want_ds:
                        dsv[i, j] = -radial * (tnx[i] * dx + tny[i] * dy)
