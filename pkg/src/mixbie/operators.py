"""Nystrom discretisation of the layer operators.

The matrices act on nodal densities: ``(S @ sigma)[i]`` approximates
``int G(x_i, y) sigma(y) ds(y)``.  Far interactions use the plain Gauss
rule (kernel times arclength weight).  For every target within two panel
lengths of a source panel the entries of that panel are corrected by product
integration:

* the ``log r`` part of each kernel is integrated against exact Legendre log
  moments about the target's complex preimage on the panel, and
* the ``1/r`` (Cauchy-type) part of the double-layer kernels is integrated
  against exact Cauchy moments (off-panel targets only; on the panel it is
  smooth).

Diagonal entries use the smooth-part limits from :mod:`mixbie.kernels`.
"""

from dataclasses import dataclass, field

import numpy as np

from mixbie import _backend
from mixbie.kernels import (TWO_PI, double_log_coeff, single_diagonal_smooth,
                            single_log_coeff)
from mixbie.quadrature import gauss_legendre, moments, product_weights

TAGS = ("S", "D", "Dstar", "Tnaive", "composite", "identity")
NEAR_FACTOR = 2.0
_NEWTON_MAXITER = 40


@dataclass(frozen=True, eq=False)
class NystromMatrix:
    """Dense discretised operator with a short description of its rows/columns."""

    entries: np.ndarray
    tag: str
    omega: float
    rows: str = "mesh"
    cols: str = "mesh"
    meta: dict = field(default_factory=dict)

    @property
    def shape(self):
        return self.entries.shape

    def __matmul__(self, other):
        if isinstance(other, NystromMatrix):
            return compose(self, other)
        return self.entries @ other

    def dump(self, path):
        """Binary dump: one ASCII header line, then row-major complex128 pairs."""
        m, n = self.entries.shape
        with open(path, "wb") as fh:
            fh.write(f"{self.tag} {m} {n} {self.omega!r}\n".encode("ascii"))
            fh.write(np.ascontiguousarray(self.entries, dtype=np.complex128).tobytes())

    @staticmethod
    def load(path):
        with open(path, "rb") as fh:
            tag, m, n, omega = fh.readline().decode("ascii").split()
            data = np.frombuffer(fh.read(), dtype=np.complex128)
        return NystromMatrix(data.reshape(int(m), int(n)).copy(), tag, float(omega))


def identity(n, omega=0.0):
    return NystromMatrix(np.eye(n), "identity", omega)


def compose(a, b):
    """Matrix product of two discretised operators on the same node set."""
    if a.shape[1] != b.shape[0]:
        raise ValueError(f"cannot compose {a.shape} with {b.shape}")
    return NystromMatrix(a.entries @ b.entries, "composite", a.omega,
                         rows=a.rows, cols=b.cols,
                         meta={"factors": (a.tag, b.tag)})


# -- assembly -------------------------------------------------------------

def _fill(omega, tx, ty, tnx, tny, mesh, want, backend):
    n_t = tx.shape[0]
    dtype = np.float64 if omega == 0.0 else np.complex128
    out = {k: (np.empty((n_t, mesh.n), dtype=dtype) if k in want else None)
           for k in ("S", "D", "Dstar")}
    core = _backend.get(backend)
    args = [np.ascontiguousarray(v, dtype=np.float64) for v in
            (tx, ty, tnx, tny, mesh.x, mesh.y, mesh.nx, mesh.ny, mesh.arc_weight)]
    if omega == 0.0:
        core.fill_laplace(*args, out["S"], out["D"], out["Dstar"])
    else:
        core.fill_helmholtz(float(omega), *args, out["S"], out["D"], out["Dstar"])
    return out


def _panel_geometry(mesh, p):
    pan = mesh.panels[p]
    branch = 1.0 if 0.5 * (pan.a + pan.b) >= 0.0 else -1.0
    sl = slice(p * mesh.q, (p + 1) * mesh.q)
    zc = mesh.x[sl] + 1j * mesh.y[sl]
    tau_u = mesh.speed[sl] * 0.5 * (pan.b - pan.a)
    normal = mesh.nx[sl] + 1j * mesh.ny[sl]
    return pan, branch, sl, zc, tau_u, normal


def preimages(curve, a, b, branch, targets):
    """Complex panel-variable preimages of ``targets`` under the panel chart.

    Solves ``z(t) = target`` by Newton's method on the analytic continuation
    of the curve and maps ``t`` to ``u = (2t - a - b) / (b - a)``.  Returns
    ``(u, converged)``.
    """
    targets = np.asarray(targets, dtype=np.complex128)
    za, _ = curve.analytic(np.array(a + 0j), branch)
    zb, _ = curve.analytic(np.array(b + 0j), branch)
    mid, half = 0.5 * (a + b), 0.5 * (b - a)
    u = (2.0 * targets - (za + zb)) / (zb - za)
    t = mid + half * u
    scale = abs(zb - za)
    done = np.zeros(targets.shape, dtype=bool)
    for _ in range(_NEWTON_MAXITER):
        z, dz = curve.analytic(t, branch)
        step = (z - targets) / dz
        t = t - step
        done = np.abs(step) <= 1e-15 * max(abs(half), 1e-300) * 4 + 1e-15 * np.abs(t)
        if np.all(done):
            break
        if not np.all(np.isfinite(t)):
            break
    z, _ = curve.analytic(t, branch)
    ok = np.isfinite(t) & (np.abs(z - targets) <= 1e-12 * scale + 1e-14)
    return (t - mid) / half, ok


def _apply_corrections(mesh, omega, mats, tx, ty, tnx, tny, self_nodes):
    """Add product-integration corrections in place.

    ``self_nodes`` is True when the targets are the mesh nodes themselves.
    """
    q = mesh.q
    rule = gauss_legendre(q)
    u_nodes = rule.nodes
    w_nodes = rule.weights
    tz = tx + 1j * ty
    S, D, Ds = mats.get("S"), mats.get("D"), mats.get("Dstar")
    failures = 0
    for p in range(mesh.n_panels):
        pan, branch, sl, zc, tau_u, normal = _panel_geometry(mesh, p)
        length = float(np.sum(mesh.arc_weight[sl]))
        center = complex(np.dot(w_nodes, zc) / 2.0)
        near = np.nonzero(np.abs(tz - center) < NEAR_FACTOR * length)[0]
        if self_nodes:
            near = near[(near < sl.start) | (near >= sl.stop)]
        if near.size:
            u_z, ok = preimages(mesh.curve, pan.a, pan.b, branch, tz[near])
            failures += int(np.count_nonzero(~ok))
            near, u_z = near[ok], u_z[ok]
        if near.size:
            log_m, cau_m = moments(u_z, q)
            wl = product_weights(log_m, q)
            wc = product_weights(cau_m, q)
            du = u_nodes[None, :] - u_z[:, None]
            dz = zc[None, :] - tz[near, None]
            r = np.abs(dz)
            dlog = tau_u[None, :] * (wl - w_nodes[None, :] * np.log(np.abs(du)))
            cauchy = (tau_u[None, :] / (dz / du)) * (wc - w_nodes[None, :] / du)
            rows = near
            if S is not None:
                S[rows, sl] += single_log_coeff(omega, r) * dlog
            if D is not None:
                D[rows, sl] += -np.real(normal[None, :] * cauchy) / TWO_PI
                if omega > 0.0:
                    proj = np.real(np.conj(normal)[None, :] * dz) / r
                    D[rows, sl] += double_log_coeff(omega, r, proj) * dlog
            if Ds is not None:
                nt = (tnx[near] + 1j * tny[near])[:, None]
                Ds[rows, sl] += np.real(nt * cauchy) / TWO_PI
                if omega > 0.0:
                    proj = -np.real(np.conj(nt) * dz) / r
                    Ds[rows, sl] += double_log_coeff(omega, r, proj) * dlog
        if self_nodes:
            _self_panel(mesh, omega, mats, p, u_nodes, w_nodes, zc, tau_u, normal, sl)
    if failures:
        raise RuntimeError(f"preimage solve failed for {failures} near target(s)")


def _self_panel(mesh, omega, mats, p, u_nodes, w_nodes, zc, tau_u, normal, sl):
    q = mesh.q
    log_m, _ = moments(u_nodes, q)
    wl = product_weights(log_m, q)
    du = u_nodes[None, :] - u_nodes[:, None]
    off = ~np.eye(q, dtype=bool)
    logdu = np.log(np.abs(np.where(off, du, 1.0)))
    dlog = tau_u[None, :] * (wl - w_nodes[None, :] * logdu)
    dz = zc[None, :] - zc[:, None]
    r = np.abs(np.where(off, dz, 1.0))
    arc_w = mesh.arc_weight[sl]
    diag = np.arange(sl.start, sl.stop)
    S = mats.get("S")
    if S is not None:
        blk = S[sl, sl]
        blk[off] += (single_log_coeff(omega, r) * dlog)[off]
        blk[np.diag_indices(q)] = (-(tau_u * (np.diag(wl) + w_nodes * np.log(tau_u)))
                                   / TWO_PI + single_diagonal_smooth(omega) * arc_w)
        S[sl, sl] = blk
    curv = -mesh.curvature[sl] / (2.0 * TWO_PI) * arc_w
    for key in ("D", "Dstar"):
        mat = mats.get(key)
        if mat is None:
            continue
        if omega > 0.0:
            if key == "D":
                proj = np.real(np.conj(normal)[None, :] * dz) / r
            else:
                proj = -np.real(np.conj(normal)[:, None] * dz) / r
            blk = mat[sl, sl]
            blk[off] += (double_log_coeff(omega, r, proj) * dlog)[off]
            mat[sl, sl] = blk
        mat[diag, diag] = curv


def layer_matrices(mesh, omega, which=("S", "D", "Dstar"), backend=None):
    """Assemble several layer operators on the mesh at once.

    Parameters
    ----------
    mesh : BoundaryMesh
    omega : float
        Wavenumber; 0 selects Laplace (real matrices).
    which : iterable of {"S", "D", "Dstar"}
    backend : {"cython", "python"}, optional

    Returns
    -------
    dict of str to ndarray
    """
    if omega < 0.0:
        raise ValueError("omega must be non-negative")
    want = set(which)
    mats = _fill(omega, mesh.x, mesh.y, mesh.nx, mesh.ny, mesh, want, backend)
    mats = {k: v for k, v in mats.items() if v is not None}
    _apply_corrections(mesh, omega, mats, mesh.x, mesh.y, mesh.nx, mesh.ny, True)
    return mats


def assemble(tag, omega, mesh, backend=None):
    """Assemble one of ``S``, ``D``, ``Dstar`` as a :class:`NystromMatrix`."""
    if tag not in ("S", "D", "Dstar"):
        raise ValueError(f"unknown operator tag {tag!r}")
    return NystromMatrix(layer_matrices(mesh, omega, (tag,), backend)[tag], tag, omega)


def target_matrices(mesh, omega, points, which=("S", "D"), normals=None,
                    correct_near=True, backend=None):
    """Rows of the layer operators for targets off the mesh nodes.

    ``normals`` (target normals) are only needed for ``Dstar``.
    """
    pts = np.atleast_2d(np.asarray(points, dtype=np.float64))
    tx, ty = pts[:, 0].copy(), pts[:, 1].copy()
    if normals is None:
        tnx = np.zeros_like(tx)
        tny = np.zeros_like(tx)
    else:
        nrm = np.atleast_2d(np.asarray(normals, dtype=np.float64))
        tnx, tny = nrm[:, 0].copy(), nrm[:, 1].copy()
    mats = _fill(omega, tx, ty, tnx, tny, mesh, set(which), backend)
    mats = {k: v for k, v in mats.items() if v is not None}
    if correct_near:
        _apply_corrections(mesh, omega, mats, tx, ty, tnx, tny, False)
    return mats


def assemble_T_naive(mesh, rows, cols):
    """Plain Gauss discretisation of the Laplace hypersingular operator.

    Only blocks between disjoint node sets are supported; no singular or
    near-singular correction is applied.

    Parameters
    ----------
    mesh : BoundaryMesh
    rows, cols : array_like of int or bool
        Target and source node selections.
    """
    rows = np.arange(mesh.n)[rows] if np.asarray(rows).dtype == bool else np.asarray(rows)
    cols = np.arange(mesh.n)[cols] if np.asarray(cols).dtype == bool else np.asarray(cols)
    if np.intersect1d(rows, cols).size:
        raise ValueError("naive hypersingular block cannot contain self interactions")
    dx = mesh.x[cols][None, :] - mesh.x[rows][:, None]
    dy = mesh.y[cols][None, :] - mesh.y[rows][:, None]
    r2 = dx * dx + dy * dy
    nxt, nyt = mesh.nx[rows][:, None], mesh.ny[rows][:, None]
    nxs, nys = mesh.nx[cols][None, :], mesh.ny[cols][None, :]
    px = nxt * dx + nyt * dy
    ps = nxs * dx + nys * dy
    kern = ((nxt * nxs + nyt * nys) / r2 - 2.0 * px * ps / (r2 * r2)) / TWO_PI
    entries = kern * mesh.arc_weight[cols][None, :]
    return NystromMatrix(entries, "Tnaive", 0.0, rows="subset", cols="subset",
                         meta={"rows": rows, "cols": cols})


# -- evaluation ------------------------------------------------------------

REPRESENTATIONS = ("regularized", "combined", "single", "split")


def check_exterior_targets(mesh, points):
    """Raise if a target is within one local panel length of the boundary."""
    pts = np.atleast_2d(np.asarray(points, dtype=np.float64))
    d = np.hypot(pts[:, 0, None] - mesh.x[None, :], pts[:, 1, None] - mesh.y[None, :])
    nearest = np.argmin(d, axis=1)
    lengths = np.add.reduceat(mesh.arc_weight, np.arange(0, mesh.n, mesh.q))
    local = lengths[nearest // mesh.q]
    if np.any(d[np.arange(len(pts)), nearest] <= local):
        raise ValueError("target too close to the boundary for plain evaluation")
    if np.any(mesh.curve.contains(pts[:, 0], pts[:, 1])):
        raise ValueError("target lies inside the curve")


def laplace_constant_row(mesh):
    """Row vector ``c`` with ``c @ sigma = mean(sigma) / (2 pi)``.

    The Laplace regularized representation gains this constant so that the
    equilibrium density, which ``D S`` annihilates, still produces a field.
    Scaling the mean like the Laplace kernel keeps the rank-one term
    comparable in norm to the rest of the Dirichlet rows.
    """
    w = mesh.arc_weight
    return w / (2.0 * np.pi * w.sum())


def eval_potential(representation, omega, mesh, sigma, targets, S=None, labels=None,
                   backend=None):
    """Evaluate the field represented by ``sigma`` at exterior targets.

    Parameters
    ----------
    representation : {"regularized", "combined", "single", "split"}
        ``regularized``: ``D S sigma - i|omega| S sigma`` (plus the
        constant from :func:`laplace_constant_row` when ``omega == 0``); ``combined``:
        ``D sigma - i|omega| S sigma``; ``single``: ``S sigma``; ``split``:
        double layer of the Dirichlet part plus single layer of the Neumann
        part (``labels`` required, defaults to the mesh labels).
    S : ndarray, optional
        Precomputed on-mesh single layer (regularized representation only).
    """
    if representation not in REPRESENTATIONS:
        raise ValueError(f"unknown representation {representation!r}")
    sigma = np.asarray(sigma)
    if sigma.shape != (mesh.n,):
        raise ValueError("density length does not match the mesh")
    check_exterior_targets(mesh, targets)
    rows = target_matrices(mesh, omega, targets, ("S", "D"), correct_near=False,
                           backend=backend)
    coupling = 1j * abs(omega)
    if representation == "regularized":
        if S is None:
            S = layer_matrices(mesh, omega, ("S",), backend)["S"]
        u = rows["D"] @ (S @ sigma) - coupling * (rows["S"] @ sigma)
        if omega == 0.0:
            u = u + np.dot(laplace_constant_row(mesh), sigma)
        return u
    if representation == "combined":
        return rows["D"] @ sigma - coupling * (rows["S"] @ sigma)
    if representation == "single":
        return rows["S"] @ sigma
    labels = mesh.labels if labels is None else labels
    dmask = labels == "D"
    return rows["D"] @ np.where(dmask, sigma, 0) + rows["S"] @ np.where(dmask, 0, sigma)
