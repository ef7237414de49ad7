"""Linear systems for exterior Dirichlet, Neumann and mixed problems.

The mixed formulation represents the field as

    u = D S sigma - i|omega| S sigma

with a single density on the whole boundary.  Rows at Dirichlet nodes take
the exterior trace, rows at Neumann nodes the exterior normal derivative,
which after the Calderon identity ``T S = -I/4 + (D*)^2`` reads

    Dirichlet:  (I/2 + D) S sigma - i|omega| S sigma                   = g
    Neumann:    (-1/4 + i|omega|/2) sigma - i|omega| D* sigma + D*^2 sigma = f

For Laplace (``omega == 0``) ``D S`` annihilates the equilibrium density, so
the representation gains the constant ``mean(sigma) / (2 pi)`` (added to the
Dirichlet rows), which restores unique solvability without changing the
Neumann rows.
"""

from dataclasses import dataclass, field

import numpy as np

from mixbie.operators import (assemble_T_naive, eval_potential, laplace_constant_row,
                              layer_matrices)

CALDERON_SHIFT = -0.25


@dataclass(frozen=True, eq=False)
class BlockSystem:
    """Assembled matrix ``A`` and right-hand side ``b`` for one formulation.

    Attributes
    ----------
    A : ndarray
        ``N x N`` system matrix; row ``i`` holds the equation at node ``i``.
    b : ndarray
        Right-hand side (Dirichlet data on Dirichlet rows, Neumann data on
        Neumann rows).
    tag : str
        Formulation name.
    mesh : BoundaryMesh
    omega : float
    representation : str
        How a solved density is turned into a field (see
        :func:`mixbie.operators.eval_potential`).
    S : ndarray or None
        On-mesh single layer, kept for evaluating the regularized field.
    """

    A: np.ndarray
    b: np.ndarray
    tag: str
    mesh: object
    omega: float
    representation: str
    S: np.ndarray = None
    extra: dict = field(default_factory=dict)

    @property
    def n(self):
        return self.b.shape[0]

    def with_rhs(self, b):
        """Same matrix, new right-hand side (no copy of ``A``)."""
        b = np.asarray(b)
        if b.shape != self.b.shape:
            raise ValueError("right-hand side length mismatch")
        return BlockSystem(self.A, b, self.tag, self.mesh, self.omega,
                           self.representation, self.S, self.extra)

    def evaluate(self, sigma, targets):
        """Field of the solved density at exterior ``targets``."""
        return eval_potential(self.representation, self.omega, self.mesh, sigma,
                              targets, S=self.S)


def _check_labels(mesh):
    if not np.all(np.isin(mesh.labels, ("D", "N"))):
        raise ValueError("every node needs a Dirichlet ('D') or Neumann ('N') label")


def _rhs(mesh, g, f):
    """Merge Dirichlet and Neumann data into one vector.

    ``g`` and ``f`` may be full-length (values at the other label ignored) or
    restricted to their own nodes.
    """
    dmask, nmask = mesh.dirichlet, mesh.neumann
    dtype = np.result_type(np.asarray(g if g is not None else 0.0),
                           np.asarray(f if f is not None else 0.0), np.float64)
    b = np.zeros(mesh.n, dtype=dtype)
    for data, mask, name in ((g, dmask, "Dirichlet"), (f, nmask, "Neumann")):
        count = int(np.count_nonzero(mask))
        if count == 0:
            continue
        if data is None:
            raise ValueError(f"{name} data required for {count} node(s)")
        data = np.asarray(data)
        if data.shape == (mesh.n,):
            b[mask] = data[mask]
        elif data.shape == (count,):
            b[mask] = data
        else:
            raise ValueError(f"{name} data has length {data.shape}, expected "
                             f"{mesh.n} or {count}")
    return b


def _require_all(mesh, label, omega, positive=True):
    if not np.all(mesh.labels == label):
        kind = "Dirichlet" if label == "D" else "Neumann"
        raise ValueError(f"this formulation needs an all-{kind} mesh")
    if positive and not omega > 0.0:
        raise ValueError("this formulation needs omega > 0")


def neumann_rows(Ds, rows, omega, shift=CALDERON_SHIFT):
    """Neumann equations ``(shift + i|w|/2) I - i|w| D* + D*^2`` at ``rows``."""
    c = 1j * abs(omega)
    block = Ds[rows] @ Ds
    block -= c * Ds[rows] if omega else 0.0
    idx = np.nonzero(rows)[0] if np.asarray(rows).dtype == bool else np.asarray(rows)
    block[np.arange(idx.size), idx] += (shift + 0.5 * c) if omega else shift
    return block


def dirichlet_rows(S, D, rows, omega, weights=None):
    """Dirichlet equations ``(I/2 + D) S - i|w| S`` at ``rows``."""
    c = 1j * abs(omega)
    block = D[rows] @ S
    block += (0.5 - c) * S[rows] if omega else 0.5 * S[rows]
    if omega == 0.0:
        block += weights[None, :]
    return block


def build_mixed_regularized(mesh, omega, g, f, mats=None, shift=CALDERON_SHIFT,
                            backend=None):
    """Mixed Dirichlet/Neumann system from the regularized representation.

    Parameters
    ----------
    mesh : BoundaryMesh
    omega : float
        Wavenumber, ``>= 0``.
    g, f : array_like or None
        Dirichlet data (Dirichlet nodes) and Neumann data (Neumann nodes),
        full-length or restricted.
    mats : dict, optional
        Precomputed ``layer_matrices`` output, to share between systems.
    shift : float
        Identity coefficient from the Calderon identity; the default is the
        correct ``-1/4``.  Other values exist to demonstrate sensitivity.

    Returns
    -------
    BlockSystem
    """
    _check_labels(mesh)
    b = _rhs(mesh, g, f)
    if mats is None:
        mats = layer_matrices(mesh, omega, backend=backend)
    S, D, Ds = mats["S"], mats["D"], mats["Dstar"]
    dtype = np.float64 if omega == 0.0 else np.complex128
    A = np.empty((mesh.n, mesh.n), dtype=dtype)
    dmask, nmask = mesh.dirichlet, mesh.neumann
    if dmask.any():
        A[dmask] = dirichlet_rows(S, D, dmask, omega, laplace_constant_row(mesh))
    if nmask.any():
        A[nmask] = neumann_rows(Ds, nmask, omega, shift)
    return BlockSystem(A, b, "mixed", mesh, omega, "regularized", S,
                       {"shift": shift})


def build_cfie_dirichlet(mesh, omega, g, mats=None, backend=None):
    """Second-kind Dirichlet system ``(I/2 + D - i|w| S) sigma = g``."""
    _require_all(mesh, "D", omega)
    if mats is None:
        mats = layer_matrices(mesh, omega, ("S", "D"), backend)
    A = mats["D"] - 1j * abs(omega) * mats["S"]
    A[np.diag_indices(mesh.n)] += 0.5
    return BlockSystem(A, _rhs(mesh, g, None), "cfie", mesh, omega, "combined")


def build_single_layer_dirichlet(mesh, omega, g, mats=None, backend=None):
    """First-kind Dirichlet system ``S sigma = g`` (resonance-prone control)."""
    _require_all(mesh, "D", omega)
    if mats is None:
        mats = layer_matrices(mesh, omega, ("S",), backend)
    return BlockSystem(mats["S"].copy(), _rhs(mesh, g, None), "single", mesh, omega,
                       "single")


def build_neumann_regularized(mesh, omega, f, mats=None, shift=CALDERON_SHIFT,
                              backend=None):
    """Pure Neumann system from the regularized representation."""
    _require_all(mesh, "N", omega)
    if mats is None:
        mats = layer_matrices(mesh, omega, backend=backend)
    A = neumann_rows(mats["Dstar"], np.ones(mesh.n, dtype=bool), omega, shift)
    return BlockSystem(A, _rhs(mesh, None, f), "neumann", mesh, omega, "regularized",
                       mats.get("S"), {"shift": shift})


def build_laplace_split(mesh, g, f, mats=None, backend=None):
    """Laplace double-layer/single-layer split system with naive hypersingular block.

    The field is ``u = D[mu 1_D] + S[mu 1_N]``.  Dirichlet rows take the
    exterior trace, Neumann rows the exterior normal derivative; the block
    coupling Dirichlet sources to Neumann targets is the hypersingular
    operator discretised by the plain Gauss rule.
    """
    _check_labels(mesh)
    dmask, nmask = mesh.dirichlet, mesh.neumann
    if not (dmask.any() and nmask.any()):
        raise ValueError("the split formulation needs both boundary labels")
    b = _rhs(mesh, g, f)
    if mats is None:
        mats = layer_matrices(mesh, 0.0, backend=backend)
    A = np.zeros((mesh.n, mesh.n))
    di, ni = np.nonzero(dmask)[0], np.nonzero(nmask)[0]
    A[np.ix_(di, di)] = mats["D"][np.ix_(di, di)] + 0.5 * np.eye(di.size)
    A[np.ix_(di, ni)] = mats["S"][np.ix_(di, ni)]
    A[np.ix_(ni, di)] = assemble_T_naive(mesh, ni, di).entries
    A[np.ix_(ni, ni)] = mats["Dstar"][np.ix_(ni, ni)] - 0.5 * np.eye(ni.size)
    return BlockSystem(A, b, "split", mesh, 0.0, "split")
