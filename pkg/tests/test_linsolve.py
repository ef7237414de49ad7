from hypothesis import given, settings, strategies as st
import numpy as np
import pytest

from mixbie.linsolve import (SingularMatrixError, condition_number, deterministic,
                             lu_factor, smallest_singular_value, solve_dense)


def _random(n, seed=0, complex_=True):
    rng = np.random.default_rng(seed)
    A = rng.standard_normal((n, n))
    if complex_:
        A = A + 1j * rng.standard_normal((n, n))
    return A + n * np.eye(n)


@pytest.mark.parametrize("complex_", [False, True])
def test_solve_matches_numpy(complex_):
    A = _random(60, complex_=complex_)
    b = np.arange(60.0) + (1j if complex_ else 0)
    rep = solve_dense(A, b)
    assert np.allclose(rep.solution, np.linalg.solve(A, b), rtol=1e-12)
    assert rep.residual < 1e-14
    assert rep.kappa is None and rep.elapsed >= 0


def test_multiple_right_hand_sides_and_factor_reuse():
    A = _random(40, 1)
    B = np.random.default_rng(2).standard_normal((40, 3))
    lu = lu_factor(A)
    rep = solve_dense(A, B, factors=lu)
    assert rep.solution.shape == (40, 3)
    assert np.allclose(A @ rep.solution, B)


def test_zero_right_hand_side_reports_absolute_residual():
    rep = solve_dense(_random(10), np.zeros(10))
    assert np.all(rep.solution == 0) and rep.residual == 0.0


@pytest.mark.parametrize("method", ["svd", "estimate"])
def test_condition_number_matches_numpy(method):
    rng = np.random.default_rng(5)
    U, _ = np.linalg.qr(rng.standard_normal((200, 200)))
    V, _ = np.linalg.qr(rng.standard_normal((200, 200)))
    s = np.logspace(0, -6, 200)
    A = U @ np.diag(s) @ V.T
    assert condition_number(A, method) == pytest.approx(1e6, rel=1e-4)
    assert solve_dense(A, np.ones(200), kappa=method).kappa == pytest.approx(1e6, rel=1e-4)


def test_auto_method_and_sentinels():
    A = _random(30)
    assert condition_number(A) == pytest.approx(np.linalg.cond(A), rel=1e-10)
    singular = np.ones((4, 4))
    assert condition_number(singular, "svd") == float("inf")
    assert condition_number(np.zeros((4, 4)), "estimate") == float("inf")
    with pytest.raises(ValueError):
        condition_number(A, "power")
    with pytest.raises(ValueError):
        condition_number(np.ones((3, 4)))


def test_singular_factorization_raises():
    with pytest.raises(SingularMatrixError):
        lu_factor(np.zeros((3, 3)))
    with pytest.raises(SingularMatrixError):
        solve_dense(np.array([[1.0, 2.0], [2.0, 4.0]]), np.ones(2))


def test_shape_checks():
    with pytest.raises(ValueError):
        solve_dense(np.ones((2, 3)), np.ones(2))
    with pytest.raises(ValueError):
        solve_dense(np.eye(3), np.ones(4))


def test_smallest_singular_value():
    A = np.diag([3.0, 2.0, 0.25]) + 0j
    assert smallest_singular_value(A) == pytest.approx(0.25)
    big = np.diag(np.linspace(1, 2, 50))
    big[0, 0] = 1e-3
    assert smallest_singular_value(big, "estimate") == pytest.approx(1e-3, rel=1e-6)
    assert smallest_singular_value(np.zeros((5, 5)), "estimate") == 0.0
    with pytest.raises(ValueError):
        smallest_singular_value(A, "qr")


def test_deterministic_mode_is_bitwise_reproducible():
    A = _random(300, 7)
    b = np.ones(300)
    with deterministic():
        x1 = solve_dense(A, b).solution
        x2 = solve_dense(A, b).solution
    assert np.array_equal(x1, x2)
    with deterministic(False):
        assert np.allclose(solve_dense(A, b).solution, x1)


@settings(max_examples=25, deadline=None)
@given(st.integers(min_value=0, max_value=10_000), st.floats(min_value=1e-3, max_value=1e3))
def test_condition_number_scale_invariant(seed, scale):
    A = _random(12, seed)
    k = condition_number(A, "svd")
    assert k >= 1.0
    assert condition_number(scale * A, "svd") == pytest.approx(k, rel=1e-10)
