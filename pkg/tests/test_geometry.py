import math

from hypothesis import given, settings, strategies as st
import numpy as np
import pytest
from scipy import integrate

from mixbie.geometry import CURVES, build_mesh, default_panels, make_curve


@pytest.mark.parametrize("name,omega,level,n", [
    ("star", 1.0, 0, 416), ("star", 1.0, 5, 2400),
    ("star", 10.0, 0, 576), ("star", 100.0, 5, 4640),
    ("star", 0.0, 0, 352), ("star", 0.0, 5, 2336),
    ("tear", 1.0, 1, 320), ("tear", 100.0, 5, 4000),
    ("pacman", 1.0, 1, 384), ("pacman", 100.0, 4, 2976),
])
def test_node_counts(name, omega, level, n):
    # N = q (panels + 4 * 2**l): two half-arcs, each with two graded junction regions.
    panels = default_panels(name, omega)
    assert 16 * (panels + 4 * 2 ** level) == n


@pytest.mark.parametrize("name", CURVES)
def test_arclength_matches_adaptive_quadrature(name):
    c = make_curve(name)
    cuts = np.linspace(-math.pi, math.pi, 21)
    ref = sum(integrate.quad(lambda t: float(c.speed(t)), lo, hi, epsabs=1e-14,
                             epsrel=1e-14, limit=200)[0]
              for lo, hi in zip(cuts[:-1], cuts[1:]))
    assert c.arclength() == pytest.approx(ref, rel=1e-12)
    # the mesh rule itself resolves the oscillating star speed to ~1e-12
    mesh = build_mesh(c, 18, 2)
    assert mesh.arc_weight.sum() == pytest.approx(ref, rel=1e-10)


@pytest.mark.parametrize("name,area", [
    ("circle", math.pi),
    ("star", math.pi * (1 + 0.3 ** 2 / 2)),
])
def test_enclosed_area(name, area):
    assert build_mesh(name, 18, 0).signed_area() == pytest.approx(area, rel=1e-13)


@pytest.mark.parametrize("name", ["tear", "pacman"])
def test_area_of_corner_curves_matches_polygon(name):
    c = make_curve(name)
    t = np.linspace(-math.pi, math.pi, 400001)
    x, y = c.position(t)
    shoelace = 0.5 * np.sum(x[:-1] * y[1:] - x[1:] * y[:-1])
    assert build_mesh(c, 18, 3).signed_area() == pytest.approx(shoelace, rel=1e-8)


def test_parameter_weights_cover_period():
    mesh = build_mesh("pacman", 16, 4)
    assert mesh.weight.sum() == pytest.approx(2 * math.pi, rel=1e-14)
    assert np.all(np.diff(mesh.t) > 0)


@pytest.mark.parametrize("name", CURVES)
def test_normals_are_outward_unit_vectors(name):
    mesh = build_mesh(name, 18, 1)
    assert np.allclose(np.hypot(mesh.nx, mesh.ny), 1.0, atol=1e-14)
    eps = 1e-3
    outside = mesh.curve.contains(mesh.x + eps * mesh.nx, mesh.y + eps * mesh.ny)
    inside = mesh.curve.contains(mesh.x - eps * mesh.nx, mesh.y - eps * mesh.ny)
    # a handful of nodes sit closer than eps to a reentrant corner
    assert np.mean(outside) < 0.01 and np.mean(inside) > 0.99


def test_circle_curvature_and_derivatives():
    c = make_curve("circle", scale=2.0)
    t = np.linspace(-3, 3, 7)
    assert np.allclose(c.curvature(t), 0.5)
    assert np.allclose(c.speed(t), 2.0)


@settings(max_examples=100, deadline=None)
@given(st.sampled_from(CURVES), st.floats(min_value=-3.1, max_value=3.1))
def test_derivatives_match_finite_differences(name, t):
    c = make_curve(name)
    if any(abs(t - k) < 1e-3 for k in c.corners):
        return
    h = 1e-6
    p1, p0 = np.array(c.position(t + h)), np.array(c.position(t - h))
    d1, d0 = np.array(c.derivative(t + h)), np.array(c.derivative(t - h))
    assert np.allclose((p1 - p0) / (2 * h), c.derivative(t), atol=1e-7)
    assert np.allclose((d1 - d0) / (2 * h), c.second_derivative(t), atol=1e-6)


@settings(max_examples=100, deadline=None)
@given(st.sampled_from(CURVES), st.floats(min_value=0.01, max_value=3.1),
       st.sampled_from([-1.0, 1.0]))
def test_analytic_continuation_agrees_on_real_axis(name, t, branch):
    c = make_curve(name)
    t = branch * t
    z, dz = c.analytic(np.array([t + 0j]), branch)
    x, y = c.position(t)
    dx, dy = c.derivative(t)
    assert z[0] == pytest.approx(complex(x, y), abs=1e-14)
    assert dz[0] == pytest.approx(complex(dx, dy), abs=1e-14)


def test_corner_curves_have_tangent_jump_only_at_zero():
    for name in ("tear", "pacman"):
        c = make_curve(name)
        a = np.array(c.derivative(-1e-12))
        b = np.array(c.derivative(1e-12))
        cos = a @ b / np.linalg.norm(a) / np.linalg.norm(b)
        assert cos < 0.99
        # closed and smooth across t = +-pi
        assert np.allclose(c.position(math.pi), c.position(-math.pi), atol=1e-14)
        assert np.allclose(c.derivative(math.pi - 1e-12), c.derivative(-math.pi + 1e-12),
                           atol=1e-9)


@pytest.mark.parametrize("name,center", [("star", (0.0, 0.0)), ("tear", (1.0, 0.0)),
                                         ("pacman", (-0.5, 0.0))])
def test_center_is_inside(name, center):
    c = make_curve(name)
    assert c.center == center
    assert c.contains(*center)[0]
    assert c.inradius() > 0.4


def test_labels_split_half_arcs():
    mesh = build_mesh("star", 18, 2)
    assert np.all(mesh.labels[mesh.t < 0] == "D")
    assert np.all(mesh.labels[mesh.t > 0] == "N")
    flipped = build_mesh("star", 18, 2, dirichlet_arc=(0.0, math.pi))
    assert np.all(flipped.labels[flipped.t > 0] == "D")
    assert np.all(build_mesh("circle", 18, 0, dirichlet_arc="all").dirichlet)
    assert np.all(build_mesh("circle", 18, 0, dirichlet_arc="none").neumann)


@pytest.mark.parametrize("level", [0, 2, 4])
def test_grading_toward_junctions(level):
    mesh = build_mesh("star", 22, level)
    sizes = np.array([p.length for p in mesh.panels])
    n_half = len(sizes) // 2
    junction = sizes[: 2 ** level]
    # the two innermost panels are equal, then sizes double away from the junction
    if level:
        assert junction[0] == pytest.approx(junction[1])
        assert np.allclose(junction[2:] / junction[1:-1], 2.0)
    assert np.isclose(sizes[:n_half].sum(), math.pi)


def test_finest_node_distance_at_level_four():
    mesh = build_mesh("star", 22, 4)
    assert 1e-9 < mesh.r.min() < 1e-7
    assert set(np.unique(mesh.side)) == {"left", "right"}
    near_zero = np.abs(mesh.t) < 0.05
    assert np.all(mesh.side[near_zero] == "right")
    near_pi = np.abs(np.abs(mesh.t) - math.pi) < 0.05
    assert np.all(mesh.side[near_pi] == "left")


def test_junction_distance_matches_arclength():
    c = make_curve("tear")
    mesh = build_mesh(c, 12, 1)
    i = int(np.argmin(np.abs(mesh.t - 0.2)))
    expected = c.arclength(0.0, float(mesh.t[i]), panels=8)
    assert mesh.r[i] == pytest.approx(expected, rel=1e-12)


def test_csv_dump(tmp_path):
    mesh = build_mesh("pacman", 16, 1)
    path = tmp_path / "mesh.csv"
    mesh.to_csv(path)
    lines = path.read_text().splitlines()
    assert lines[0] == "t,x,y,nx,ny,weight,speed,label,level,r"
    assert len(lines) == mesh.n + 1


@pytest.mark.parametrize("kwargs", [
    dict(n_smooth=17), dict(n_smooth=0), dict(level=-1), dict(q=1),
    dict(grading=1.0), dict(grading=0.0), dict(dirichlet_arc=(0.0, 1.0)),
    dict(dirichlet_arc="some"), dict(level=7, grading=0.01),
])
def test_invalid_mesh_arguments(kwargs):
    with pytest.raises(ValueError):
        build_mesh("star", **{"n_smooth": 18, **kwargs})


def test_unknown_curve():
    with pytest.raises(ValueError):
        make_curve("square")
    with pytest.raises(ValueError):
        make_curve("star", scale=0.0)
