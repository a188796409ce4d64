"""KS machinery, tail curves, and the weighted log-log slope fit."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rde_lab import stats
from rde_lab.rng import RngStream


def test_ks_two_sample_null():
    s = RngStream(1, 0)
    a = s.gaussian(10**4)
    b = s.gaussian(10**4)
    res = stats.ks_two_sample(a, b, 0.02)
    assert res.statistic < 0.02
    assert res.verdict


def test_ks_two_sample_alternative():
    s = RngStream(2, 0)
    a = s.gaussian(10**4)
    b = s.gaussian(10**4) + 1.0
    res = stats.ks_two_sample(a, b, 0.02)
    assert res.statistic > 0.3
    assert not res.verdict


def test_ks_one_sample():
    from scipy.stats import norm

    x = RngStream(3, 0).gaussian(10**4)
    res = stats.ks_one_sample(x, norm.cdf, 0.02)
    assert res.statistic < 0.02


def test_ks_threshold_formula():
    # c(0.01) * sqrt(1/n1 + 1/n2) with c(0.01) = sqrt(-ln(0.005)/2)
    c = np.sqrt(-np.log(0.005) / 2.0)
    assert stats.ks_threshold(100, 400) == pytest.approx(c * np.sqrt(1 / 100 + 1 / 400))
    assert stats.ks_threshold(100) == pytest.approx(c * np.sqrt(1 / 100))


@given(n1=st.integers(10, 10**6), n2=st.integers(10, 10**6))
@settings(max_examples=50, deadline=None)
def test_ks_threshold_monotone(n1, n2):
    assert stats.ks_threshold(n1 + n2) < stats.ks_threshold(min(n1, n2))


def test_tail_curve_estimates():
    curve = stats.TailCurve(
        r=np.array([10.0, 20.0]), n=np.array([100, 100]), hits=np.array([25, 16]))
    assert np.allclose(curve.p_hat, [0.25, 0.16])
    assert np.allclose(curve.stderr, np.sqrt(curve.p_hat * (1 - curve.p_hat) / 100))


def test_slope_fit_recovers_exact_power_law():
    # p = 0.1 * (r/10)^(-1) exactly on the grid
    curve = stats.TailCurve(
        r=np.array([10.0, 100.0, 1000.0]),
        n=np.array([10**6, 10**6, 10**6]),
        hits=np.array([100000, 10000, 1000]),
    )
    fit = stats.fit_loglog_slope(curve)
    assert fit.slope == pytest.approx(-1.0, abs=1e-9)
    assert fit.slope_stderr > 0.0
    assert fit.intercept == pytest.approx(np.log(0.1) + np.log(10.0), abs=1e-9)


def test_slope_fit_drops_zero_cells_with_warning():
    curve = stats.TailCurve(
        r=np.array([10.0, 100.0, 1000.0, 10000.0]),
        n=np.array([10**6] * 4),
        hits=np.array([100000, 10000, 1000, 0]),
    )
    with pytest.warns(UserWarning):
        fit = stats.fit_loglog_slope(curve)
    assert fit.slope == pytest.approx(-1.0, abs=1e-9)


def test_slope_fit_needs_three_points():
    curve = stats.TailCurve(
        r=np.array([10.0, 100.0, 1000.0]),
        n=np.array([100, 100, 100]),
        hits=np.array([10, 5, 0]),
    )
    with pytest.raises(ValueError):
        stats.fit_loglog_slope(curve)


def test_mean_with_stderr():
    m, se = stats.mean_with_stderr(np.array([1.0, 2.0, 3.0, 4.0]))
    assert m == pytest.approx(2.5)
    assert se == pytest.approx(np.std([1, 2, 3, 4], ddof=1) / 2.0)


def test_empirical_cf_unit_mass():
    x = np.zeros(10)
    assert stats.empirical_cf(x, 3.0) == pytest.approx(1.0 + 0.0j)
