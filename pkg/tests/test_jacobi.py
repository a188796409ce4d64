"""Jacobi process, its additive functionals, and the first-passage study."""

import numpy as np
import pytest

from rde_lab import jacobi
from rde_lab.besq import ProcessPath
from rde_lab.rng import RngStream
from rde_lab.stats import ks_two_sample

T_HALF_KAPPA2 = (5.0 + 2.0 * np.log(2.0)) / 12.0  # closed-form resummation


def test_spec_validation():
    with pytest.raises(ValueError):
        jacobi.JacobiSpec(d1=0.0, d2=2.0, y0=0.5, dt=1e-3)
    with pytest.raises(ValueError):
        jacobi.JacobiSpec(d1=2.0, d2=2.0, y0=1.5, dt=1e-3)
    with pytest.raises(ValueError):
        jacobi.JacobiSpec(d1=2.0, d2=2.0, y0=0.5, dt=0.0)


def test_stationary_mean_start():
    # at y0 = d1/(d1+d2) the drift vanishes in expectation
    spec = jacobi.JacobiSpec(d1=2.0, d2=6.0, y0=0.25, dt=1e-3)
    y = jacobi.jacobi_marginal(spec, 5.0, RngStream(1, 0), 4000)
    assert abs(y.mean() / 0.25 - 1.0) < 0.02


def test_entrance_boundary_leaves_zero():
    spec = jacobi.JacobiSpec(d1=2.0, d2=6.0, y0=0.0, dt=1e-3)
    y = jacobi.jacobi_marginal(spec, 1e-3, RngStream(2, 0), 2000)
    assert np.all(y > 0.0)


def test_mirror_symmetry():
    # (Y, d1, d2) -> (1-Y, d2, d1) leaves the law invariant when d1 = d2
    spec = jacobi.JacobiSpec(d1=3.0, d2=3.0, y0=0.5, dt=1e-3)
    a = jacobi.jacobi_marginal(spec, 0.5, RngStream(3, 0), 5000)
    b = 1.0 - jacobi.jacobi_marginal(spec, 0.5, RngStream(3, 1), 5000)
    assert ks_two_sample(a, b, 0.03).statistic < 0.03


def test_upsilon_synthetic_paths():
    zero = ProcessPath(dt=0.1, values=np.zeros(31))
    assert jacobi.upsilon_of(zero, 3.0).value == 0.0
    half = ProcessPath(dt=0.1, values=np.full(31, 0.5))
    assert jacobi.upsilon_of(half, 3.0).value == pytest.approx(6.0, rel=1e-12)
    # monotone in r on any path
    path = jacobi.simulate_jacobi(jacobi.JacobiSpec(2.0, 6.0, 0.3, 1e-3), 2.0, RngStream(4, 0))
    u1 = jacobi.upsilon_of(path, 1.0).value
    u2 = jacobi.upsilon_of(path, 2.0).value
    assert 0.0 <= u1 <= u2


def test_upsilon_horizon_guard():
    path = ProcessPath(dt=0.1, values=np.zeros(11))
    with pytest.raises(ValueError):
        jacobi.upsilon_of(path, 5.0)


def test_lambda_clock_edges():
    p1 = ProcessPath(dt=0.1, values=np.ones(21))
    p2 = ProcessPath(dt=0.1, values=np.ones(21))
    assert jacobi.lambda_clock(p1, p2, 0.0) == 0.0
    assert jacobi.lambda_clock(p1, p2, 2.0) == pytest.approx(1.0, rel=1e-12)
    assert jacobi.lambda_clock(p1, p2, 1.0) < jacobi.lambda_clock(p1, p2, 2.0)


def test_lambda_clock_log_limit():
    # Lambda(r)/log r -> 1/(2+2k) = 1/6 at kappa=2, slow logarithmic rate
    draws = jacobi.lambda_clock_limit(2.0, 1e4, RngStream(5, 0), 1000)
    assert abs(draws.mean() / (1.0 / 6.0) - 1.0) < 0.15


def test_warren_yor_ratio_identity():
    ratio, jac = jacobi.warren_yor_check(2.0, 0.1, 10**4, RngStream(6, 0))
    assert np.all((ratio >= 0.0) & (ratio <= 1.0))
    assert ks_two_sample(ratio, jac, 0.04).statistic < 0.04


def test_tail_upsilon_validation():
    s = RngStream(0, 0)
    with pytest.raises(ValueError):
        jacobi.tail_upsilon(1.5, 7.0, [25.0, 50.0], 10, s)  # needs >= 3 points
    with pytest.raises(ValueError):
        jacobi.tail_upsilon(1.5, 3.0, [25.0, 50.0, 100.0], 10, s)  # u below threshold


def test_t_half_moment_series_values():
    val, bound = jacobi.t_half_moment_series(2.0, 50)
    assert abs(val - T_HALF_KAPPA2) < 1e-9
    assert bound < 1e-9
    val1, _ = jacobi.t_half_moment_series(2.0, 1)
    assert val1 == pytest.approx(0.25, rel=1e-12)
    # partial sums strictly increasing
    sums = [jacobi.t_half_moment_series(2.0, k)[0] for k in range(1, 12)]
    assert np.all(np.diff(sums) > 0.0)
    with pytest.raises(ValueError):
        jacobi.t_half_moment_series(1.0, 10)


def test_t_half_sample_mean():
    draws = jacobi.sample_t_half(2.0, RngStream(7, 0), size=2 * 10**4)
    assert np.all(draws > 0.0)
    assert abs(draws.mean() / T_HALF_KAPPA2 - 1.0) < 0.03


def test_t_half_entrance_insensitivity():
    # two near-boundary starts; the chain draws a variable number of
    # variates per path, so the runs are statistically independent and
    # the comparison is Monte Carlo, not coupled: use a 3-sigma band.
    a = jacobi.sample_t_half(2.0, RngStream(8, 0), size=10**4, y0_start=1e-3)
    b = jacobi.sample_t_half(2.0, RngStream(8, 1), size=10**4, y0_start=1e-4)
    se = np.hypot(a.std(ddof=1) / np.sqrt(a.size), b.std(ddof=1) / np.sqrt(b.size))
    assert abs(a.mean() - b.mean()) < 3.0 * se


def test_hypergeom_laplace():
    # theta = 0: both sides are exactly 1
    mc, closed, rel = jacobi.hypergeom_laplace_check(2.0, 0.0, 100, RngStream(9, 0))
    assert mc == 1.0 and closed == pytest.approx(1.0, rel=1e-12)
    # closed form decreasing in theta
    closed_vals = [jacobi.hypergeom_laplace_check(2.0, th, 1, RngStream(9, 1))[1]
                   for th in (0.1, 0.3, 0.5, 1.0)]
    assert np.all(np.diff(closed_vals) < 0.0)
    _, _, rel = jacobi.hypergeom_laplace_check(2.0, 0.5, 2 * 10**4, RngStream(9, 2))
    assert rel < 0.02
    with pytest.raises(ValueError):
        jacobi.hypergeom_laplace_check(2.0, 5.0, 10, RngStream(9, 3))


def test_scale_function_bounds():
    # 1/(2 k x^k) <= S_Y(1-x) <= 2 / x^k near the right boundary
    kappa = 2.0
    for x in (1e-2, 1e-3):
        val = jacobi.scale_function_y(1.0 - x, kappa)
        assert 1.0 / (2.0 * kappa * x**kappa) <= val <= 2.0 / x**kappa


def test_u_clock_monotone_and_invertible():
    path = jacobi.simulate_jacobi(jacobi.JacobiSpec(2.0, 6.0, 0.3, 1e-3), 1.0, RngStream(10, 0))
    u = jacobi.u_clock(path, 2.0)
    assert u[0] == 0.0
    assert np.all(np.diff(u) > 0.0)
    t = path.dt * np.arange(len(path.values))
    t_back = np.interp(u, u, t)  # roundtrip through the monotone clock
    assert np.max(np.abs(t_back - t)) < 1e-12
