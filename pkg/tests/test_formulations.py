import numpy as np
import pytest
import scipy.linalg as sla

from mixbie import formulations as F
from mixbie.geometry import build_mesh, make_curve
from mixbie.harness import (default_charges, default_targets, exact_field,
                            manufacture_boundary_data, relative_error)
from mixbie.operators import layer_matrices


def _solve_and_score(system, charges, omega):
    sigma = np.linalg.solve(system.A, system.b)
    targets = default_targets()
    return relative_error(system.evaluate(sigma, targets), exact_field(charges, omega, targets))


@pytest.fixture(scope="module")
def star():
    return build_mesh("star", 22, 0)


@pytest.mark.parametrize("omega,tol", [(0.0, 1e-9), (1.0, 1e-9), (10.0, 1e-9)])
def test_mixed_known_solution_on_star(omega, tol):
    mesh = build_mesh("star", 22 if omega else 18, 0)
    charges = default_charges(mesh.curve)
    g, f = manufacture_boundary_data(charges, omega, mesh)
    system = F.build_mixed_regularized(mesh, omega, g, f)
    assert system.tag == "mixed" and system.representation == "regularized"
    assert _solve_and_score(system, charges, omega) < tol


def test_calderon_shift_sign_matters(star):
    # the Neumann rows rely on T S = -I/4 + D*^2; flipping the shift breaks the solution
    charges = default_charges(star.curve)
    g, f = manufacture_boundary_data(charges, 1.0, star)
    mats = layer_matrices(star, 1.0)
    good = F.build_mixed_regularized(star, 1.0, g, f, mats)
    bad = F.build_mixed_regularized(star, 1.0, g, f, mats, shift=+0.25)
    assert _solve_and_score(good, charges, 1.0) < 1e-9
    assert _solve_and_score(bad, charges, 1.0) > 1e-3


def test_pure_neumann_regularized_on_circle():
    # every row is a Neumann row, so the whole system leans on the Calderon rewrite
    mesh = build_mesh("circle", 18, 0, dirichlet_arc="none")
    omega = 1.3
    charges = default_charges(mesh.curve)
    _, f = manufacture_boundary_data(charges, omega, mesh)
    system = F.build_neumann_regularized(mesh, omega, f)
    assert _solve_and_score(system, charges, omega) < 1e-10


@pytest.mark.parametrize("builder", ["cfie", "single"])
def test_dirichlet_formulations(builder):
    mesh = build_mesh("star", 22, 0, dirichlet_arc="all")
    omega = 3.0
    charges = default_charges(mesh.curve)
    g, _ = manufacture_boundary_data(charges, omega, mesh)
    build = F.build_cfie_dirichlet if builder == "cfie" else F.build_single_layer_dirichlet
    assert _solve_and_score(build(mesh, omega, g), charges, omega) < 1e-9


def test_split_laplace_formulation_is_coarse_without_refinement(star):
    mesh = build_mesh("star", 18, 0)
    charges = default_charges(mesh.curve)
    g, f = manufacture_boundary_data(charges, 0.0, mesh)
    system = F.build_laplace_split(mesh, g, f)
    assert system.representation == "split"
    err = _solve_and_score(system, charges, 0.0)
    assert 1e-6 < err < 1e-2


def test_laplace_constant_term_removes_nullspace():
    mesh = build_mesh("star", 18, 0)
    mats = layer_matrices(mesh, 0.0)
    A = F.build_mixed_regularized(mesh, 0.0, np.zeros(mesh.n), np.zeros(mesh.n), mats).A
    s = sla.svdvals(A)
    assert s[-1] / s[0] > 1e-5
    bare = A.copy()
    bare[mesh.dirichlet] = F.dirichlet_rows(mats["S"], mats["D"], mesh.dirichlet, 0.0,
                                            np.zeros(mesh.n))
    s = sla.svdvals(bare)
    assert s[-1] / s[0] < 1e-12


def test_rows_follow_labels(star):
    g = np.arange(star.n, dtype=float)
    f = -np.arange(star.n, dtype=float)
    system = F.build_mixed_regularized(star, 1.0, g, f)
    assert np.array_equal(system.b[star.dirichlet], g[star.dirichlet])
    assert np.array_equal(system.b[star.neumann], f[star.neumann])
    restricted = F.build_mixed_regularized(star, 1.0, g[star.dirichlet], f[star.neumann],
                                           layer_matrices(star, 1.0))
    assert np.array_equal(restricted.b, system.b)
    other = system.with_rhs(np.ones(star.n))
    assert other.A is system.A
    with pytest.raises(ValueError):
        system.with_rhs(np.ones(3))


def test_rhs_validation(star):
    with pytest.raises(ValueError):
        F.build_mixed_regularized(star, 1.0, np.ones(5), np.zeros(star.n))
    with pytest.raises(ValueError):
        F.build_mixed_regularized(star, 1.0, None, np.zeros(star.n))


def test_formulation_preconditions(star):
    zeros = np.zeros(star.n)
    with pytest.raises(ValueError):
        F.build_cfie_dirichlet(star, 1.0, zeros)
    with pytest.raises(ValueError):
        F.build_neumann_regularized(star, 1.0, zeros)
    all_d = build_mesh("star", 22, 0, dirichlet_arc="all")
    with pytest.raises(ValueError):
        F.build_cfie_dirichlet(all_d, 0.0, zeros)
    with pytest.raises(ValueError):
        F.build_laplace_split(all_d, zeros, None)


def test_mixed_builder_accepts_single_label_meshes():
    mesh = build_mesh("circle", 18, 0, dirichlet_arc="all")
    omega = 2.0
    charges = default_charges(make_curve("circle"))
    g, _ = manufacture_boundary_data(charges, omega, mesh)
    system = F.build_mixed_regularized(mesh, omega, g, None)
    assert _solve_and_score(system, charges, omega) < 1e-10


def test_mixed_system_inherits_interior_dirichlet_resonance():
    # At a zero of J0 the constant density satisfies S sigma = 0 on the unit circle, so
    # D S sigma - i|w| S sigma is a radiating field with zero trace: it vanishes and the
    # mixed system is singular whatever the coupling sign.
    from mixbie.specfun import j0_zero
    mesh = build_mesh("circle", 18, 0)
    omega = j0_zero()
    system = F.build_mixed_regularized(mesh, omega, np.zeros(mesh.n), np.zeros(mesh.n))
    const = np.ones(mesh.n) / np.sqrt(mesh.n)
    assert np.linalg.norm(system.A @ const) < 1e-12
    assert np.max(np.abs(system.evaluate(const, [[3.0, 0.0], [0.0, -2.5]]))) < 1e-14
    off = F.build_mixed_regularized(mesh, omega + 0.1, np.zeros(mesh.n), np.zeros(mesh.n))
    assert sla.svdvals(off.A)[-1] > 1e-3
