import math

from hypothesis import given, settings, strategies as st
import mpmath
import numpy as np
import pytest

from mixbie import specfun
from mixbie.specfun import DomainError, bessel, bessel01, cylfn, hankel1, j0_zero

mpmath.mp.dps = 30

ORACLES = {
    "J0": lambda x: mpmath.besselj(0, x),
    "Y0": lambda x: mpmath.bessely(0, x),
    "J1": lambda x: mpmath.besselj(1, x),
    "Y1": lambda x: mpmath.bessely(1, x),
}

LOG_GRID = np.logspace(-4, 4, 1000)


@pytest.fixture(scope="module")
def reference():
    return {k: np.array([float(f(mpmath.mpf(float(x)))) for x in LOG_GRID])
            for k, f in ORACLES.items()}


def _envelope(ref, order):
    j, y = ref[f"J{order}"], ref[f"Y{order}"]
    return np.hypot(j, y)


@pytest.mark.parametrize("kind", specfun.KINDS)
def test_matches_mpmath_on_log_grid(backend, reference, kind):
    vals = dict(zip(specfun.KINDS, bessel01(LOG_GRID, backend=backend)))
    err = np.abs(vals[kind] - reference[kind])
    # Relative to the modulus sqrt(J^2 + Y^2), which stays meaningful at zeros.
    env = _envelope(reference, kind[1])
    assert np.max(err / env) <= 1e-12
    # Plain relative error wherever the function is not near a zero.
    away = np.abs(reference[kind]) > 1e-2 * env
    assert np.max(err[away] / np.abs(reference[kind][away])) <= 1e-12


def test_wronskian(backend):
    x = LOG_GRID
    j0, y0, j1, y1 = bessel01(x, backend=backend)
    w = j1 * y0 - j0 * y1
    assert np.max(np.abs(w * math.pi * x / 2 - 1.0)) <= 1e-12


@pytest.mark.parametrize("x", [specfun._backend.get("python").SERIES_MAX,
                               specfun._backend.get("python").ASYMPTOTIC_MIN])
def test_continuous_across_regime_boundaries(x):
    core = specfun._backend.get("python")
    below = np.array(core.regime_values(np.array([x]), "series" if x < 10 else "miller"))
    above = np.array(core.regime_values(np.array([x]), "miller" if x < 10 else "asymptotic"))
    assert np.allclose(below, above, rtol=0, atol=1e-13)


def test_backends_agree():
    from mixbie import _backend
    if "cython" not in _backend.BACKENDS:
        pytest.skip("compiled backend not built")
    x = np.logspace(-5, 5, 5001)
    a = np.array(bessel01(x, backend="python"))
    b = np.array(bessel01(x, backend="cython"))
    assert np.max(np.abs(a - b) / np.maximum(1.0, np.abs(a))) < 1e-14


@pytest.mark.parametrize("kind,value", [("J0", 1.0), ("J1", 0.0)])
def test_regular_functions_at_zero(kind, value):
    assert bessel(kind, 0.0) == value


@pytest.mark.parametrize("kind", ["Y0", "Y1"])
def test_singular_functions_reject_zero(kind):
    with pytest.raises(DomainError):
        bessel(kind, 0.0)


@pytest.mark.parametrize("bad", [-1.0, float("nan"), float("inf")])
def test_domain_errors(bad):
    with pytest.raises(DomainError):
        bessel01(bad)


def test_unknown_kind():
    with pytest.raises(ValueError):
        bessel("K0", 1.0)


def test_known_values():
    assert bessel("J0", 1.0) == pytest.approx(0.7651976865579666, rel=1e-15)
    assert bessel("Y1", 1.0) == pytest.approx(-0.7812128213002887, rel=1e-14)
    h = hankel1(0, 1.0)
    assert h.real == pytest.approx(0.7651976865579666, rel=1e-15)
    assert h.imag == pytest.approx(0.08825696421567696, rel=1e-14)


def test_cylfn_and_hankel_orders():
    v = cylfn(1, 2.5)
    assert (v.j, v.y) == pytest.approx((float(mpmath.besselj(1, 2.5)),
                                        float(mpmath.bessely(1, 2.5))), rel=1e-14)
    with pytest.raises(ValueError):
        cylfn(2, 1.0)
    with pytest.raises(ValueError):
        hankel1(3, 1.0)


def test_array_shape_preserved():
    x = np.linspace(0.5, 40, 12).reshape(3, 4)
    for v in bessel01(x):
        assert v.shape == (3, 4)
    assert isinstance(bessel("J1", 2.0), float)


def test_first_zero_of_j0():
    root = j0_zero()
    assert root == pytest.approx(float(mpmath.besseljzero(0, 1)), abs=1e-14)
    assert abs(bessel("J0", root)) < 1e-15


@settings(max_examples=200, deadline=None)
@given(st.floats(min_value=1e-2, max_value=500.0))
def test_recurrence_between_orders(x):
    # J0' = -J1 and (x J1)' = x J0, checked by central differences.
    h = 1e-4
    jp = (bessel("J0", x + h) - bessel("J0", x - h)) / (2 * h)
    assert jp == pytest.approx(-bessel("J1", x), abs=1e-8)


@settings(max_examples=200, deadline=None)
@given(st.floats(min_value=1e-6, max_value=1e5))
def test_modulus_bounded_by_asymptotic_envelope(x):
    j0, y0, j1, y1 = bessel01(x)
    # x (J^2 + Y^2) rises toward 2/pi for order 0 and falls toward it for order 1.
    assert x * (j0 ** 2 + y0 ** 2) <= 2 / math.pi * (1 + 1e-12)
    assert x * (j1 ** 2 + y1 ** 2) >= 2 / math.pi * (1 - 1e-12)
