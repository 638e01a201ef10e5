import numpy as np
import pytest
from scipy import integrate as sint

from molsig._quadrature import cumulative, integrate
from molsig.errors import ConvergenceError


def test_polynomial_exact():
    value, err = integrate(lambda x: 3.0 * x * x, 0.0, 2.0)
    assert value == pytest.approx(8.0, rel=1e-14)
    assert err < 1e-10


def test_sine_full_period():
    value, _ = integrate(np.sin, 0.0, np.pi)
    assert value == pytest.approx(2.0, rel=1e-13)


def test_reversed_limits_negate():
    fwd, _ = integrate(np.cos, 0.0, 1.0)
    rev, _ = integrate(np.cos, 1.0, 0.0)
    assert rev == pytest.approx(-fwd, rel=1e-14)


def test_empty_interval():
    assert integrate(np.exp, 1.0, 1.0) == (0.0, 0.0)


def test_breakpoints_handle_kink():
    f = lambda x: np.abs(x - 0.3)
    exact = 0.3**2 / 2 + 0.7**2 / 2
    value, _ = integrate(f, 0.0, 1.0, breakpoints=[0.3])
    assert value == pytest.approx(exact, rel=1e-13)


def test_matches_scipy_on_oscillatory():
    f = lambda x: np.sin(7.0 * x) * np.exp(-x)
    ours, _ = integrate(f, 0.0, 5.0, rtol=1e-12)
    ref, _ = sint.quad(lambda x: float(f(np.asarray(x))), 0.0, 5.0, epsabs=1e-13)
    assert ours == pytest.approx(ref, rel=1e-11)


def test_nonconvergence_raises_with_residual():
    f = lambda x: np.abs(x - np.pi / 8) ** -0.9
    with pytest.raises(ConvergenceError) as excinfo:
        integrate(f, 0.0, 1.0, rtol=1e-12, limit=3)
    assert excinfo.value.residual is not None
    assert excinfo.value.residual > 0


def test_cumulative_matches_pointwise():
    pts = np.linspace(0.0, 3.0, 40)
    cum = cumulative(np.exp, pts)
    assert cum[0] == 0.0
    expected = np.exp(pts) - 1.0
    assert np.allclose(cum, expected, rtol=1e-12, atol=1e-13)


def test_cumulative_many_points_tiny_segments():
    rng = np.random.default_rng(5)
    pts = np.sort(rng.uniform(0.0, np.pi, 5000))
    pts = np.concatenate([[0.0], pts, [np.pi]])
    cum = cumulative(np.sin, pts)
    assert cum[-1] == pytest.approx(2.0, rel=1e-12)
    assert np.all(np.diff(cum) >= 0.0)


def test_cumulative_with_duplicate_points():
    pts = np.array([0.0, 1.0, 1.0, 2.0])
    cum = cumulative(lambda x: np.ones_like(x), pts)
    assert np.allclose(cum, [0.0, 1.0, 1.0, 2.0], atol=1e-14)


def test_cumulative_rejects_decreasing():
    with pytest.raises(ValueError):
        cumulative(np.sin, np.array([0.0, 2.0, 1.0]))
