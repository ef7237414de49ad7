"""Dense direct solves, residual checks and condition numbers."""

from contextlib import contextmanager, nullcontext
from dataclasses import dataclass
import time
import warnings

import numpy as np
import scipy.linalg as sla
from scipy.sparse.linalg import LinearOperator, svds
from threadpoolctl import threadpool_limits

SVD_MAX_N = 2000


class SingularMatrixError(np.linalg.LinAlgError):
    """Raised when the factorization hits an exactly zero pivot."""


@dataclass(frozen=True)
class SolveReport:
    """Solution of ``A x = b`` with post-hoc diagnostics.

    Attributes
    ----------
    solution : ndarray
    residual : float
        ``||A x - b|| / ||b||`` computed from the original ``A`` and ``b``
        (``||A x||`` when ``b`` is zero).
    kappa : float or None
        2-norm condition number, when requested.
    elapsed : float
        Wall-clock seconds for factorization and solve.
    """

    solution: np.ndarray
    residual: float
    kappa: float = None
    elapsed: float = 0.0


@contextmanager
def deterministic(enabled=True):
    """Pin BLAS/LAPACK to one thread so reductions run in a fixed order."""
    ctx = threadpool_limits(limits=1) if enabled else nullcontext()
    with ctx:
        yield


def _relative_residual(A, x, b):
    r = np.linalg.norm(A @ x - b)
    nb = np.linalg.norm(b)
    return float(r / nb) if nb > 0 else float(r)


def lu_factor(A):
    """LU factorization that raises :class:`SingularMatrixError` on zero pivots."""
    with warnings.catch_warnings():
        warnings.simplefilter("error", sla.LinAlgWarning)
        try:
            lu, piv = sla.lu_factor(A, check_finite=True)
        except sla.LinAlgWarning as exc:
            raise SingularMatrixError(str(exc)) from None
    if np.any(np.diag(lu) == 0):
        raise SingularMatrixError("matrix is exactly singular")
    return lu, piv


def solve_dense(A, b, kappa=False, factors=None):
    """Solve ``A x = b`` by partial-pivoted LU.

    Parameters
    ----------
    A : (N, N) array_like
    b : (N,) or (N, k) array_like
    kappa : bool or {"svd", "estimate"}
        Also compute the condition number.
    factors : tuple, optional
        Reuse an ``lu_factor`` result for ``A``.

    Returns
    -------
    SolveReport
    """
    A = np.asarray(A)
    b = np.asarray(b)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ValueError("A must be square")
    if b.shape[0] != A.shape[0]:
        raise ValueError("b does not conform with A")
    start = time.perf_counter()
    lu = lu_factor(A) if factors is None else factors
    x = sla.lu_solve(lu, b)
    elapsed = time.perf_counter() - start
    k = None
    if kappa:
        method = kappa if isinstance(kappa, str) else "auto"
        k = condition_number(A, method=method, factors=lu)
    return SolveReport(x, _relative_residual(A, x, b), k, elapsed)


def _extreme_singular_values(A, factors=None):
    """Largest and smallest singular values by ARPACK on ``A`` and ``A^-1``."""
    n = A.shape[0]
    v0 = np.ones(n) / np.sqrt(n)
    lu = lu_factor(A) if factors is None else factors
    s_max = svds(A, k=1, which="LM", return_singular_vectors=False, v0=v0,
                 tol=1e-6)[0]
    inv = LinearOperator(
        A.shape, dtype=A.dtype,
        matvec=lambda v: sla.lu_solve(lu, v),
        rmatvec=lambda v: sla.lu_solve(lu, v, trans=2 if np.iscomplexobj(A) else 1))
    inv_max = svds(inv, k=1, which="LM", return_singular_vectors=False, v0=v0,
                   tol=1e-6)[0]
    return float(s_max), float(1.0 / inv_max)


def condition_number(A, method="auto", factors=None):
    """2-norm condition number ``sigma_max / sigma_min``.

    ``method="svd"`` is exact; ``"estimate"`` uses Lanczos iterations on
    ``A`` and on ``A^{-1}`` through its LU factors; ``"auto"`` picks the SVD
    for ``N <= 2000``.  Returns ``inf`` when ``sigma_min`` is zero to
    machine precision.
    """
    A = np.asarray(A)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ValueError("A must be square")
    if method == "auto":
        method = "svd" if A.shape[0] <= SVD_MAX_N else "estimate"
    if method == "svd":
        s = sla.svdvals(A)
        s_max, s_min = s[0], s[-1]
    elif method == "estimate":
        try:
            s_max, s_min = _extreme_singular_values(A, factors)
        except SingularMatrixError:
            return float("inf")
    else:
        raise ValueError(f"unknown method {method!r}")
    if s_min <= np.finfo(float).eps * s_max * 1e-3 or s_min == 0:
        return float("inf")
    return float(s_max / s_min)


def smallest_singular_value(A, method="svd"):
    """Smallest singular value of a square matrix."""
    A = np.asarray(A)
    if method == "svd":
        return float(sla.svdvals(A)[-1])
    if method == "estimate":
        try:
            return _extreme_singular_values(A)[1]
        except SingularMatrixError:
            return 0.0
    raise ValueError(f"unknown method {method!r}")
