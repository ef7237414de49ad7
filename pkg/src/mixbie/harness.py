"""Refinement sweeps with manufactured point-charge solutions.

A sweep builds, for each refinement level ``l``, the mesh and the system
matrix once and solves two problems with it:

* *known*: Dirichlet and Neumann data both come from interior point charges,
  so the exterior field is known and ``E_rel`` can be measured;
* *unknown*: the same Dirichlet data with zero Neumann data; accuracy is
  judged by ``E_conv``, the change of the exterior field between level ``l``
  and level ``l + 1`` (absent at the last level).
"""

from dataclasses import asdict, dataclass, field, fields
import math
import time

import numpy as np

from mixbie import formulations
from mixbie.geometry import build_mesh, default_panels, make_curve
from mixbie.kernels import greens, greens_normal_grad
from mixbie.linsolve import condition_number, deterministic, lu_factor, solve_dense
from mixbie.operators import layer_matrices

PROBLEMS = ("known", "unknown", "both")
FORMULATIONS = ("mixed", "split")
CHARGE_PATTERNS = ("phase", "alternating")


@dataclass(frozen=True)
class ChargeSet:
    """Interior point charges ``u(x) = sum_j c_j G(x, z_j)``."""

    locations: np.ndarray
    strengths: np.ndarray

    def validate(self, curve):
        if not np.any(self.strengths != 0):
            raise ValueError("at least one charge strength must be non-zero")
        inside = curve.contains(self.locations[:, 0], self.locations[:, 1])
        if not np.all(inside):
            raise ValueError("every charge must lie strictly inside the curve")


def default_charges(curve, count=10, radius_fraction=0.4, pattern="phase"):
    """Charges equispaced on a circle of ``radius_fraction * inradius``.

    ``pattern="phase"`` uses unit strengths ``exp(2 pi i j / count)`` (zero
    net charge, dipole-like far field); ``"alternating"`` uses ``+1, -1, ...``.
    """
    if pattern not in CHARGE_PATTERNS:
        raise ValueError(f"unknown charge pattern {pattern!r}")
    ang = 2 * math.pi * np.arange(count) / count
    rad = radius_fraction * curve.inradius()
    loc = np.asarray(curve.center)[None, :] + rad * np.stack([np.cos(ang), np.sin(ang)], 1)
    if pattern == "phase":
        strengths = np.exp(1j * ang)
    else:
        strengths = (-1.0) ** np.arange(count) + 0j
    return ChargeSet(loc, strengths)


def default_targets(count=20, radius=3.0):
    """Exterior evaluation points equispaced on a circle about the origin."""
    ang = 2 * math.pi * np.arange(count) / count
    return radius * np.stack([np.cos(ang), np.sin(ang)], 1)


def exact_field(charges, omega, points):
    pts = np.atleast_2d(np.asarray(points, dtype=np.float64))
    u = np.zeros(pts.shape[0], dtype=np.complex128)
    for z, c in zip(charges.locations, charges.strengths):
        u += c * greens(omega, pts, z[None, :])
    return u


def exact_normal_derivative(charges, omega, points, normals):
    pts = np.atleast_2d(np.asarray(points, dtype=np.float64))
    nrm = np.atleast_2d(np.asarray(normals, dtype=np.float64))
    du = np.zeros(pts.shape[0], dtype=np.complex128)
    for z, c in zip(charges.locations, charges.strengths):
        du += c * greens_normal_grad(omega, pts, z[None, :], nrm, side="target")
    return du


def manufacture_boundary_data(charges, omega, mesh, kind="known"):
    """Dirichlet data on Dirichlet nodes and Neumann data on Neumann nodes.

    Returns
    -------
    g : ndarray
        Field values at the Dirichlet nodes (in mesh order).
    f : ndarray
        Normal derivatives at the Neumann nodes, or zeros for
        ``kind="unknown"``.
    """
    if kind not in ("known", "unknown"):
        raise ValueError("kind must be 'known' or 'unknown'")
    pts = mesh.points
    d = np.hypot(pts[:, None, 0] - charges.locations[None, :, 0],
                 pts[:, None, 1] - charges.locations[None, :, 1])
    if np.any(d == 0.0):
        raise ValueError("a charge lies on the boundary")
    dmask, nmask = mesh.dirichlet, mesh.neumann
    g = exact_field(charges, omega, pts[dmask])
    if kind == "unknown":
        return g, np.zeros(int(nmask.sum()), dtype=np.complex128)
    normals = np.stack([mesh.nx, mesh.ny], 1)[nmask]
    return g, exact_normal_derivative(charges, omega, pts[nmask], normals)


def relative_error(u_num, u_ex):
    """``||u_num - u_ex|| / ||u_ex||`` in the 2-norm."""
    u_num, u_ex = np.asarray(u_num), np.asarray(u_ex)
    if u_num.shape != u_ex.shape:
        raise ValueError("length mismatch")
    scale = np.linalg.norm(u_ex)
    if scale == 0:
        raise ValueError("exact field has zero norm")
    return float(np.linalg.norm(u_num - u_ex) / scale)


def convergence_error(u_l, u_prev):
    """``||u_l - u_prev|| / ||u_l||``."""
    return relative_error(u_prev, u_l)


@dataclass(frozen=True)
class ExperimentConfig:
    """Everything that determines a sweep."""

    geometry: str = "star"
    omega: float = 1.0
    levels: tuple = (0, 1, 2, 3, 4, 5)
    problem: str = "both"
    panels: int = None
    grading: float = 0.5
    q: int = 16
    formulation: str = "mixed"
    charge_count: int = 10
    charge_radius: float = 0.4
    charge_pattern: str = "phase"
    target_count: int = 20
    target_radius: float = 3.0
    kappa: str = "auto"
    deterministic: bool = False

    def __post_init__(self):
        object.__setattr__(self, "levels", tuple(int(v) for v in self.levels))
        object.__setattr__(self, "omega", float(self.omega))
        if self.panels is None:
            object.__setattr__(self, "panels", default_panels(self.geometry, self.omega))
        self.validate()

    def validate(self):
        make_curve(self.geometry)
        if not self.levels:
            raise ValueError("levels must not be empty")
        if list(self.levels) != sorted(set(self.levels)) or self.levels[0] < 0:
            raise ValueError("levels must be distinct, ascending and non-negative")
        if self.problem not in PROBLEMS:
            raise ValueError(f"problem must be one of {PROBLEMS}")
        if self.formulation not in FORMULATIONS:
            raise ValueError(f"formulation must be one of {FORMULATIONS}")
        if self.formulation == "split" and self.omega != 0.0:
            raise ValueError("the split comparison formulation is Laplace only")
        if not self.omega >= 0.0:
            raise ValueError("omega must be non-negative")
        if self.kappa not in ("auto", "svd", "estimate", "none"):
            raise ValueError("kappa must be auto, svd, estimate or none")

    def to_dict(self):
        out = asdict(self)
        out["levels"] = list(self.levels)
        return out

    @classmethod
    def from_dict(cls, data):
        names = {f.name for f in fields(cls)}
        unknown = set(data) - names
        if unknown:
            raise ValueError(f"unknown config keys: {sorted(unknown)}")
        return cls(**data)


@dataclass
class ResultRow:
    """One table row; ``None`` marks an absent value."""

    l: int
    N: int
    E_rel: float = None
    E_conv: float = None
    kappa: float = None
    error: str = None
    elapsed: float = 0.0
    extra: dict = field(default_factory=dict)


@dataclass
class LevelSolution:
    """Solved densities and exterior fields at one level."""

    mesh: object
    system: object
    sigma_known: np.ndarray = None
    sigma_unknown: np.ndarray = None
    u_known: np.ndarray = None
    u_unknown: np.ndarray = None


def build_system(config, mesh, g, f):
    if config.formulation == "split":
        return formulations.build_laplace_split(mesh, g, f)
    return formulations.build_mixed_regularized(mesh, config.omega, g, f)


def solve_level(config, level, charges=None, targets=None, with_kappa=True):
    """Mesh, assemble and solve one level; returns ``(LevelSolution, kappa)``."""
    curve = make_curve(config.geometry)
    charges = default_charges(curve, config.charge_count, config.charge_radius,
                              config.charge_pattern) if charges is None else charges
    charges.validate(curve)
    targets = default_targets(config.target_count, config.target_radius) \
        if targets is None else targets
    mesh = build_mesh(curve, config.panels, level, q=config.q, grading=config.grading)
    g_known, f_known = manufacture_boundary_data(charges, config.omega, mesh, "known")
    f_zero = np.zeros_like(f_known)
    system = build_system(config, mesh, g_known, f_known)
    factors = lu_factor(system.A)
    out = LevelSolution(mesh, system)
    if config.problem in ("known", "both"):
        rep = solve_dense(system.A, system.b, factors=factors)
        out.sigma_known = rep.solution
        out.u_known = system.evaluate(rep.solution, targets)
    if config.problem in ("unknown", "both"):
        b = formulations._rhs(mesh, g_known, f_zero)
        rep = solve_dense(system.A, b, factors=factors)
        out.sigma_unknown = rep.solution
        out.u_unknown = system.evaluate(rep.solution, targets)
    kappa = None
    if with_kappa and config.kappa != "none":
        kappa = condition_number(system.A, config.kappa, factors=factors)
    return out, kappa


def run_sweep(config, keep_solutions=False):
    """Run every level of ``config``; one :class:`ResultRow` per level.

    A level that fails is kept as a row with ``error`` set.  With
    ``keep_solutions`` the :class:`LevelSolution` objects are returned too.
    """
    curve = make_curve(config.geometry)
    charges = default_charges(curve, config.charge_count, config.charge_radius,
                              config.charge_pattern)
    targets = default_targets(config.target_count, config.target_radius)
    u_ex = exact_field(charges, config.omega, targets)
    rows, fields_unknown, solutions = [], [], []
    with deterministic(config.deterministic):
        for level in config.levels:
            start = time.perf_counter()
            n_nodes = config.q * (config.panels + 4 * 2 ** level)
            try:
                sol, kappa = solve_level(config, level, charges, targets)
            except Exception as exc:  # recorded, not dropped
                rows.append(ResultRow(level, n_nodes, error=f"{type(exc).__name__}: {exc}",
                                      elapsed=time.perf_counter() - start))
                fields_unknown.append(None)
                solutions.append(None)
                continue
            row = ResultRow(level, sol.mesh.n, kappa=kappa)
            if sol.u_known is not None:
                row.E_rel = relative_error(sol.u_known, u_ex)
            row.elapsed = time.perf_counter() - start
            rows.append(row)
            fields_unknown.append(sol.u_unknown)
            solutions.append(sol if keep_solutions else None)
    for k in range(len(rows) - 1):
        here, nxt = fields_unknown[k], fields_unknown[k + 1]
        if here is not None and nxt is not None:
            rows[k].E_conv = convergence_error(nxt, here)
    return (rows, solutions) if keep_solutions else rows


def density_profile(mesh, sigma):
    """Rows ``(r, |sigma|, label, side)`` for every node, in mesh order.

    ``side`` is ``left`` for nodes nearer the junction at ``t = -pi`` and
    ``right`` for the junction at ``t = 0``.
    """
    sigma = np.asarray(sigma)
    if sigma.shape != (mesh.n,):
        raise ValueError("density length does not match the mesh")
    mag = np.abs(sigma)
    return [(float(mesh.r[i]), float(mag[i]), str(mesh.labels[i]), str(mesh.side[i]))
            for i in range(mesh.n)]


# -- CSV output -------------------------------------------------------------

def _fmt(v):
    if v is None:
        return ""
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    return f"{float(v):.17g}"


TABLE_COLUMNS = ("l", "N", "E_rel", "E_conv", "kappa")


def write_table_csv(rows, path, columns=TABLE_COLUMNS):
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(",".join(columns) + "\n")
        for row in rows:
            vals = row if isinstance(row, dict) else asdict(row)
            fh.write(",".join(_fmt(vals.get(c)) for c in columns) + "\n")


def write_profile_csv(profile, path):
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("r,abs_sigma,label,side\n")
        for r, mag, label, side in profile:
            fh.write(f"{r:.17g},{mag:.17g},{label},{side}\n")


def read_csv(path):
    """Parse a table or profile CSV back into a list of dicts (empty -> None)."""
    with open(path, encoding="utf-8") as fh:
        header = fh.readline().strip().split(",")
        out = []
        for line in fh:
            vals = line.rstrip("\n").split(",")
            rec = {}
            for k, v in zip(header, vals):
                if v == "":
                    rec[k] = None
                elif k in ("l", "N"):
                    rec[k] = int(v)
                elif k in ("label", "side"):
                    rec[k] = v
                else:
                    rec[k] = float(v)
            out.append(rec)
    return out


def laplace_compare(levels, panels=None, grading=0.5, q=16, kappa="auto",
                    deterministic_flag=False):
    """Regularized vs split formulations on the star for Laplace.

    Returns a list of dicts with keys
    ``l, N, E_rel, kappa, E_rel_H, kappa_H, E_conv, E_conv_H``.
    """
    base = dict(geometry="star", omega=0.0, levels=tuple(levels), panels=panels,
                grading=grading, q=q, kappa=kappa, deterministic=deterministic_flag)
    ours = run_sweep(ExperimentConfig(formulation="mixed", **base))
    theirs = run_sweep(ExperimentConfig(formulation="split", **base))
    out = []
    for a, b in zip(ours, theirs):
        out.append({"l": a.l, "N": a.N, "E_rel": a.E_rel, "kappa": a.kappa,
                    "E_rel_H": b.E_rel, "kappa_H": b.kappa, "E_conv": a.E_conv,
                    "E_conv_H": b.E_conv, "error": a.error or b.error})
    return out


LAPLACE_COLUMNS = ("l", "N", "E_rel", "kappa", "E_rel_H", "kappa_H", "E_conv", "E_conv_H")


def resonance_sweep(omegas, panels=18, q=16, level=0):
    """Smallest singular values on the unit circle for three formulations.

    Returns a list of dicts with keys
    ``omega, sigma_min_single, sigma_min_cfie, sigma_min_mixed``.
    """
    from mixbie.linsolve import smallest_singular_value

    curve = make_curve("circle")
    all_d = build_mesh(curve, panels, level, dirichlet_arc="all", q=q)
    mixed = build_mesh(curve, panels, level, q=q)
    out = []
    for w in omegas:
        mats = layer_matrices(all_d, w, ("S", "D"))
        zero_d = np.zeros(all_d.n)
        single = formulations.build_single_layer_dirichlet(all_d, w, zero_d, mats)
        cfie = formulations.build_cfie_dirichlet(all_d, w, zero_d, mats)
        g = np.zeros(int(mixed.dirichlet.sum()))
        f = np.zeros(int(mixed.neumann.sum()))
        mix = formulations.build_mixed_regularized(mixed, w, g, f)
        out.append({"omega": float(w),
                    "sigma_min_single": smallest_singular_value(single.A),
                    "sigma_min_cfie": smallest_singular_value(cfie.A),
                    "sigma_min_mixed": smallest_singular_value(mix.A)})
    return out


RESONANCE_COLUMNS = ("omega", "sigma_min_single", "sigma_min_cfie", "sigma_min_mixed")
