"""Parametric boundary curves and panel meshes with junction grading.

Every curve is parameterised by ``t in (-pi, pi]``, runs counterclockwise,
and has breakpoints at ``t = -pi`` and ``t = 0``.  Those two points are where
the boundary condition switches between Dirichlet and Neumann, so each of the
two half-arcs is split into

* a junction region next to each end, of parameter length ``h``, cut into
  ``2**l`` panels whose sizes shrink geometrically toward the junction, and
* a smooth middle region of ``n_smooth // 2`` uniform panels of size ``h``.

With ``q`` nodes per panel this gives ``N = q * (n_smooth + 4 * 2**l)``.
"""

from dataclasses import dataclass, field
import math

import numpy as np

from mixbie.quadrature import gauss_legendre

CURVES = ("star", "tear", "pacman", "circle")
JUNCTIONS = (-math.pi, 0.0)

# smooth-region panel counts reproducing the published node counts
DEFAULT_PANELS = {
    ("star", 1.0): 22,
    ("star", 10.0): 32,
    ("star", 100.0): 162,
    ("tear", 1.0): 12,
    ("tear", 10.0): 12,
    ("tear", 100.0): 122,
    ("pacman", 1.0): 16,
    ("pacman", 10.0): 16,
    ("pacman", 100.0): 122,
    ("star", 0.0): 18,
    ("circle", 1.0): 18,
}

DEFAULT_GRADING = 0.5


def default_panels(name, omega):
    """Smooth-region panel count for a geometry and wavenumber.

    Falls back to a rule of thumb (about four panels per wavelength of
    arclength, at least 16) for combinations not in the table.
    """
    key = (name, float(omega))
    if key in DEFAULT_PANELS:
        return DEFAULT_PANELS[key]
    length = make_curve(name).arclength()
    n = max(16, int(math.ceil(4 * omega * length / (2 * math.pi))))
    return n + n % 2


@dataclass(frozen=True)
class ParamCurve:
    """Closed counterclockwise curve ``t -> (x(t), y(t))`` on ``(-pi, pi]``.

    Attributes
    ----------
    name : str
    scale : float
        Uniform scaling applied to the base shape.
    breakpoints : tuple of float
        Parameters where the curve or the boundary condition is non-smooth.
    corners : tuple of float
        Breakpoints where the tangent jumps.
    center : tuple of float
        A point well inside the curve (used to place interior charges).
    """

    name: str
    scale: float = 1.0
    breakpoints: tuple = JUNCTIONS
    corners: tuple = ()
    center: tuple = (0.0, 0.0)

    def _raw(self, t, nu, branch=None):
        if branch is None:
            t = np.asarray(t, dtype=np.float64)
            s = np.where(t >= 0.0, 1.0, -1.0)
        else:
            t = np.asarray(t)
            s = float(branch)
        if self.name == "circle":
            table = ((np.cos(t), np.sin(t)),
                     (-np.sin(t), np.cos(t)),
                     (-np.cos(t), -np.sin(t)))
            return table[nu]
        if self.name == "star":
            rho = (1 + 0.3 * np.cos(5 * t), -1.5 * np.sin(5 * t), -7.5 * np.cos(5 * t))
            c, sn = np.cos(t), np.sin(t)
            if nu == 0:
                return rho[0] * c, rho[0] * sn
            if nu == 1:
                return rho[1] * c - rho[0] * sn, rho[1] * sn + rho[0] * c
            return (rho[2] * c - 2 * rho[1] * sn - rho[0] * c,
                    rho[2] * sn + 2 * rho[1] * c - rho[0] * sn)
        if self.name == "tear":
            h = 0.5 * t
            table = ((2 * s * np.sin(h), -np.sin(t)),
                     (s * np.cos(h), -np.cos(t)),
                     (-0.5 * s * np.sin(h), np.sin(t)))
            return table[nu]
        if self.name == "pacman":
            a = 1.5 * t
            table = ((s * np.sin(a), np.sin(t)),
                     (1.5 * s * np.cos(a), np.cos(t)),
                     (-2.25 * s * np.sin(a), -np.sin(t)))
            return table[nu]
        raise ValueError(f"unknown curve {self.name!r}")

    def position(self, t):
        x, y = self._raw(t, 0)
        return self.scale * x, self.scale * y

    def derivative(self, t):
        x, y = self._raw(t, 1)
        return self.scale * x, self.scale * y

    def second_derivative(self, t):
        x, y = self._raw(t, 2)
        return self.scale * x, self.scale * y

    def analytic(self, t, branch):
        """Complex position ``x + i y`` and its derivative at complex ``t``.

        ``branch`` (+1 or -1) selects the half-arc whose formula is continued,
        which matters for the curves defined piecewise in ``sign(t)``.
        """
        x, y = self._raw(t, 0, branch)
        dx, dy = self._raw(t, 1, branch)
        return self.scale * (x + 1j * y), self.scale * (dx + 1j * dy)

    def speed(self, t):
        return np.hypot(*self.derivative(t))

    def curvature(self, t):
        """Signed curvature, positive where the curve turns left (convex)."""
        dx, dy = self.derivative(t)
        ddx, ddy = self.second_derivative(t)
        return (dx * ddy - dy * ddx) / np.hypot(dx, dy) ** 3

    def arclength(self, a=-math.pi, b=math.pi, panels=64, q=16):
        """Arclength between parameters ``a`` and ``b`` by composite Gauss rules.

        The integration grid is aligned with the breakpoints so the
        integrand is smooth on every panel.
        """
        rule = gauss_legendre(q)
        cuts = sorted({a, b, *[c for c in self.breakpoints if a < c < b]})
        total = 0.0
        for lo, hi in zip(cuts[:-1], cuts[1:]):
            edges = np.linspace(lo, hi, panels + 1)
            mid = 0.5 * (edges[1:] + edges[:-1])
            half = 0.5 * (edges[1:] - edges[:-1])
            t = (mid[:, None] + half[:, None] * rule.nodes[None, :]).ravel()
            w = (half[:, None] * rule.weights[None, :]).ravel()
            total += float(np.dot(w, self.speed(t)))
        return total

    def inradius(self, samples=20000):
        """Distance from :attr:`center` to the nearest sampled boundary point."""
        t = np.linspace(-math.pi, math.pi, samples, endpoint=False)
        x, y = self.position(t)
        return float(np.min(np.hypot(x - self.center[0], y - self.center[1])))

    def contains(self, px, py, samples=4096):
        """Winding-number test for points strictly inside the curve."""
        t = np.linspace(-math.pi, math.pi, samples, endpoint=False)
        x, y = self.position(t)
        px = np.atleast_1d(np.asarray(px, dtype=np.float64))
        py = np.atleast_1d(np.asarray(py, dtype=np.float64))
        ang = np.arctan2(y[None, :] - py[:, None], x[None, :] - px[:, None])
        d = np.diff(np.concatenate([ang, ang[:, :1]], axis=1), axis=1)
        d = (d + math.pi) % (2 * math.pi) - math.pi
        return np.abs(d.sum(axis=1)) > math.pi


def make_curve(name, scale=1.0):
    """Build one of the named curves.

    Parameters
    ----------
    name : {"star", "tear", "pacman", "circle"}
    scale : float, optional
        Positive uniform scale factor.

    Examples
    --------
    >>> c = make_curve("star")
    >>> [round(float(v), 12) for v in c.position(0.0)]
    [1.3, 0.0]
    """
    if scale <= 0:
        raise ValueError("scale must be positive")
    if name == "star":
        return ParamCurve("star", scale)
    if name == "circle":
        return ParamCurve("circle", scale)
    if name == "tear":
        return ParamCurve("tear", scale, corners=(0.0,), center=(scale, 0.0))
    if name == "pacman":
        return ParamCurve("pacman", scale, corners=(0.0,), center=(-0.5 * scale, 0.0))
    raise ValueError(f"unknown curve {name!r}; expected one of {CURVES}")


@dataclass(frozen=True)
class Panel:
    """One Gauss panel: parameter interval, boundary label and refinement tag."""

    a: float
    b: float
    label: str
    region: str
    level: int = 0

    @property
    def length(self):
        return self.b - self.a


@dataclass(frozen=True, eq=False)
class BoundaryMesh:
    """Flattened Nystrom nodes of a panel decomposition.

    Node ``i`` belongs to panel ``i // q``.  ``weight`` is the Gauss weight in
    the parameter variable, so ``weight * speed`` integrates against arclength.
    """

    curve: ParamCurve
    panels: tuple
    q: int
    level: int
    n_smooth: int
    t: np.ndarray
    x: np.ndarray
    y: np.ndarray
    nx: np.ndarray
    ny: np.ndarray
    speed: np.ndarray
    weight: np.ndarray
    curvature: np.ndarray
    labels: np.ndarray
    levels: np.ndarray
    r: np.ndarray
    side: np.ndarray
    junctions: tuple = JUNCTIONS
    extras: dict = field(default_factory=dict)

    @property
    def n(self):
        return self.t.shape[0]

    @property
    def n_panels(self):
        return len(self.panels)

    @property
    def arc_weight(self):
        return self.weight * self.speed

    @property
    def dirichlet(self):
        return self.labels == "D"

    @property
    def neumann(self):
        return self.labels == "N"

    @property
    def panel_bounds(self):
        return np.array([(p.a, p.b) for p in self.panels])

    @property
    def points(self):
        return np.stack([self.x, self.y], axis=1)

    def panel_of(self, i):
        return i // self.q

    def nearest_junction_distance(self, i):
        """Arclength from node ``i`` to the closer junction."""
        return float(self.r[i])

    def signed_area(self):
        """Enclosed area from the line integral of ``(x dy - y dx) / 2``."""
        dx, dy = self.curve.derivative(self.t)
        return 0.5 * float(np.sum(self.weight * (self.x * dy - self.y * dx)))

    def to_csv(self, path):
        """Write the node table ``t,x,y,nx,ny,weight,speed,label,level,r``."""
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write("t,x,y,nx,ny,weight,speed,label,level,r\n")
            for i in range(self.n):
                nums = [self.t[i], self.x[i], self.y[i], self.nx[i], self.ny[i],
                        self.weight[i], self.speed[i]]
                fh.write(",".join(f"{v:.17g}" for v in nums))
                fh.write(f",{self.labels[i]},{int(self.levels[i])},{self.r[i]:.17g}\n")


def _graded_edges(junction, h, count, ratio, direction):
    # count panels covering [junction, junction + direction*h], finest at the junction
    offsets = [0.0] + [h * ratio ** m for m in range(count - 1, -1, -1)]
    return [junction + direction * o for o in offsets]


def _half_arc_panels(lo, hi, n_mid, level, ratio, label):
    h = (hi - lo) / (n_mid + 2)
    count = 2 ** level
    left = _graded_edges(lo, h, count, ratio, 1.0)
    right = _graded_edges(hi, h, count, ratio, -1.0)[::-1]
    mid = np.linspace(lo + h, hi - h, n_mid + 1)
    panels = []
    for k in range(count):
        panels.append(Panel(left[k], left[k + 1], label, "junction", level))
    for k in range(n_mid):
        panels.append(Panel(float(mid[k]), float(mid[k + 1]), label, "smooth", 0))
    for k in range(count):
        panels.append(Panel(right[k], right[k + 1], label, "junction", level))
    return panels


def _label_for(arc, lo, hi):
    if arc == "all":
        return "D"
    if arc == "none":
        return "N"
    a, b = arc
    return "D" if (a <= lo and hi <= b) else "N"


def build_mesh(curve, n_smooth=None, level=0, dirichlet_arc=(-math.pi, 0.0), q=16,
               grading=DEFAULT_GRADING, omega=1.0):
    """Panel mesh with geometric grading toward both junctions.

    Parameters
    ----------
    curve : ParamCurve or str
    n_smooth : int, optional
        Total smooth-region panels (even); defaults per geometry and ``omega``.
    level : int
        Refinement level ``l``; each junction region gets ``2**l`` panels.
    dirichlet_arc : tuple of float or {"all", "none"}
        Parameter interval carrying Dirichlet data; must be one of the two
        half-arcs.  ``"all"``/``"none"`` label every node Dirichlet/Neumann.
    q : int
        Gauss nodes per panel.
    grading : float
        Ratio between consecutive junction-region panel sizes, in (0, 1).
    omega : float
        Only used to pick the default ``n_smooth``.

    Returns
    -------
    BoundaryMesh
    """
    if isinstance(curve, str):
        curve = make_curve(curve)
    if n_smooth is None:
        n_smooth = default_panels(curve.name, omega)
    if n_smooth < 2 or n_smooth % 2:
        raise ValueError("n_smooth must be a positive even count")
    if level < 0:
        raise ValueError("refinement level must be non-negative")
    if q < 2:
        raise ValueError("need at least two nodes per panel")
    if not 0.0 < grading < 1.0:
        raise ValueError("grading ratio must lie in (0, 1)")
    halves = ((-math.pi, 0.0), (0.0, math.pi))
    if isinstance(dirichlet_arc, str):
        if dirichlet_arc not in ("all", "none"):
            raise ValueError("dirichlet_arc must be a half-arc, 'all' or 'none'")
    else:
        a, b = (float(v) for v in dirichlet_arc)
        if not any(abs(a - lo) < 1e-12 and abs(b - hi) < 1e-12 for lo, hi in halves):
            raise ValueError("dirichlet_arc endpoints must be junction breakpoints")
        dirichlet_arc = (a, b)
    h = math.pi / (n_smooth // 2 + 2)
    if h * grading ** (2 ** level - 1) < 1e-15 * math.pi:
        raise ValueError("refinement too deep: junction panels degenerate")

    rule = gauss_legendre(q)
    panels = []
    for lo, hi in halves:
        panels += _half_arc_panels(lo, hi, n_smooth // 2, level, grading,
                                   _label_for(dirichlet_arc, lo, hi))

    a = np.array([p.a for p in panels])
    b = np.array([p.b for p in panels])
    half = 0.5 * (b - a)
    t = ((0.5 * (a + b))[:, None] + half[:, None] * rule.nodes[None, :]).ravel()
    weight = (half[:, None] * rule.weights[None, :]).ravel()
    x, y = curve.position(t)
    dx, dy = curve.derivative(t)
    speed = np.hypot(dx, dy)
    labels = np.repeat([p.label for p in panels], q)
    levels = np.repeat([p.level if p.region == "junction" else -1 for p in panels], q)

    r, side = _junction_distances(curve, panels, t, rule, q)
    mesh = BoundaryMesh(curve=curve, panels=tuple(panels), q=q, level=level,
                        n_smooth=n_smooth, t=t, x=x, y=y, nx=dy / speed, ny=-dx / speed,
                        speed=speed, weight=weight, curvature=curve.curvature(t),
                        labels=labels, levels=levels, r=r, side=side)
    if mesh.signed_area() <= 0.0:
        raise RuntimeError("curve is not counterclockwise; normals would point inward")
    return mesh


def _gauss_arclength(curve, lo, hi, rule):
    half = 0.5 * (hi - lo)
    nodes = 0.5 * (hi + lo)[..., None] + half[..., None] * rule.nodes
    return np.sum(half[..., None] * rule.weights * curve.speed(nodes), axis=-1)


def _junction_distances(curve, panels, t, rule, q):
    """Arclength to the nearer junction, measured from the junction side."""
    n_half = len(panels) // 2
    r = np.empty_like(t)
    side = np.empty(t.shape, dtype="<U5")
    for k in range(2):
        idx = slice(k * n_half * q, (k + 1) * n_half * q)
        sub = panels[k * n_half:(k + 1) * n_half]
        a = np.array([p.a for p in sub])
        b = np.array([p.b for p in sub])
        lengths = _gauss_arclength(curve, a, b, rule)
        before = np.concatenate([[0.0], np.cumsum(lengths)[:-1]])
        after = np.concatenate([np.cumsum(lengths[::-1])[::-1][1:], [0.0]])
        tk = t[idx].reshape(len(sub), q)
        from_a = _gauss_arclength(curve, np.repeat(a[:, None], q, 1), tk, rule)
        to_b = _gauss_arclength(curve, tk, np.repeat(b[:, None], q, 1), rule)
        dist_lo = (before[:, None] + from_a).ravel()
        dist_hi = (after[:, None] + to_b).ravel()
        # half-arc 0 runs from -pi (left) to 0 (right); half-arc 1 from 0 to pi
        lo_side, hi_side = ("left", "right") if k == 0 else ("right", "left")
        r[idx] = np.minimum(dist_lo, dist_hi)
        side[idx] = np.where(dist_lo <= dist_hi, lo_side, hi_side)
    return r, side
