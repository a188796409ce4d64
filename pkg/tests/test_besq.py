"""Squared Bessel toolkit: exact transitions, hitting laws, Lamperti,
Dufresne, and the perpetuity."""

import numpy as np
import pytest
from scipy.integrate import quad

from rde_lab import besq
from rde_lab.rng import RngStream
from rde_lab.stats import ks_one_sample, ks_two_sample


def test_step_zero_absorbing():
    s = RngStream(1, 0)
    out = besq.besq_step(np.zeros(50), 0.0, 0.7, s)
    assert np.all(out == 0.0)


@pytest.mark.parametrize("x,d,dt", [(1.0, 0.0, 0.5), (4.0, 2.0, 1.0), (2.0, 5.5, 0.3)])
def test_step_mean(x, d, dt):
    n = 4 * 10**5
    s = RngStream(2, 0)
    draws = besq.besq_step(np.full(n, x), d, dt, s)
    target = x + d * dt
    se = draws.std() / np.sqrt(n)
    assert abs(draws.mean() - target) < max(4 * se, 0.01 * target)


def test_additivity_in_law():
    # BESQ(2) from 0 + independent BESQ(6) from 4 at t=1 vs BESQ(8) from 4
    n = 10**5
    s = RngStream(3, 0)
    a = besq.besq_step(np.zeros(n), 2.0, 1.0, s) + besq.besq_step(np.full(n, 4.0), 6.0, 1.0, s)
    b = besq.besq_step(np.full(n, 4.0), 8.0, 1.0, s)
    res = ks_two_sample(a, b, 0.02)
    assert res.statistic < 0.02


def test_s_infinity_mean():
    # E S(infinity) = 2/(kappa-1)
    for kappa, seed in ((2.0, 4), (3.0, 5)):
        draws = besq.sample_s_infinity(kappa, RngStream(seed, 0), size=20000)
        assert np.all(draws > 0.0)
        assert abs(draws.mean() / (2.0 / (kappa - 1.0)) - 1.0) < 0.03


def test_s_infinity_law():
    draws = besq.sample_s_infinity(2.0, RngStream(6, 0), size=20000)
    res = ks_one_sample(draws, lambda x: besq.dufresne_cdf(x, 2.0), 0.03)
    assert res.statistic < 0.03


def test_s_infinity_rejects_bad_kappa():
    with pytest.raises(ValueError):
        besq.sample_s_infinity(0.0, RngStream(0, 0))


def test_dufresne_density_values():
    assert besq.dufresne_density(1.0, 2.0) == pytest.approx(4.0 * np.exp(-2.0), rel=1e-12)
    assert besq.dufresne_density(1e-9, 2.0) == pytest.approx(0.0, abs=1e-30)
    total, _ = quad(lambda x: besq.dufresne_density(x, 2.0), 0, np.inf)
    assert abs(total - 1.0) < 1e-6


def test_dufresne_cdf_matches_quadrature():
    for x in (0.3, 1.0, 4.0):
        ref, _ = quad(lambda t: besq.dufresne_density(t, 1.7), 0, x)
        assert besq.dufresne_cdf(x, 1.7) == pytest.approx(ref, abs=1e-10)


def test_dufresne_mean_domain():
    assert besq.dufresne_mean(3.0) == pytest.approx(1.0)
    with pytest.raises(ValueError):
        besq.dufresne_mean(1.0)


def test_lamperti_zero_path():
    # B = 0, zeta = 0: R = 2 on the identity clock
    b = np.zeros(101)
    clock, r = besq.lamperti_transform(b, 0.01, 0.0)
    assert np.allclose(r, 2.0)
    assert np.allclose(clock, 0.01 * np.arange(101))


def test_lamperti_pathwise_identity():
    # exp(B + zeta t / 2) = r^2(A(t)) / 4 exactly along the grid
    dt, zeta = 1e-3, 2.0
    g = RngStream(7, 0).gaussian(2000) * np.sqrt(dt)
    b = np.concatenate(([0.0], np.cumsum(g)))
    t = dt * np.arange(b.size)
    _, r = besq.lamperti_transform(b, dt, zeta)
    assert np.max(np.abs(np.exp(b + 0.5 * zeta * t) - r**2 / 4.0)) < 1e-12


def test_lamperti_marginal_vs_exact_chain():
    # squared transformed value at clock 1 vs BESQ(6) from 4, in law
    dt, horizon, n = 5e-3, 14.0, 20000
    s = RngStream(8, 0)
    steps = int(round(horizon / dt))
    vals = []
    for _ in range(10):
        g = s.gaussian((n // 10, steps)) * np.sqrt(dt)
        b = np.concatenate([np.zeros((n // 10, 1)), np.cumsum(g, axis=1)], axis=1)
        clock, r = besq.lamperti_transform(b, dt, 2.0)
        vals.append(besq.lamperti_marginal(clock, r, 1.0) ** 2)
    exact = besq.besq_step(np.full(n, 4.0), 6.0, 1.0, s)
    res = ks_two_sample(np.concatenate(vals), exact, 0.02)
    assert res.statistic < 0.02


def test_lamperti_short_clock_raises():
    b = np.zeros(11)
    clock, r = besq.lamperti_transform(b, 0.01, 0.0)
    with pytest.raises(ValueError):
        besq.lamperti_marginal(clock, r, 5.0)


def test_perpetuity_mean_and_law():
    # (d=6, b=4): mean (1/16) * 2 = 0.125; law = scaled Dufresne(index 2)
    n = 10**4
    draws = besq.sample_perpetuity(6.0, 4.0, RngStream(9, 0), size=n)
    assert np.all(draws > 0.0)
    assert abs(draws.mean() / 0.125 - 1.0) < 0.03
    res = ks_one_sample(draws, lambda y: besq.perpetuity_reference_cdf(y, 6.0, 4.0), 0.03)
    assert res.statistic < 0.03


def test_perpetuity_moment_stability_and_divergence():
    # index kappa' = (d-2)/(b-2) = 2: p-th moments stabilize for p < 2,
    # diverge for p above
    draws = besq.sample_perpetuity(6.0, 4.0, RngStream(10, 0), size=2 * 10**4)
    # the largest draw's share of the p-th moment sum: vanishing for a
    # finite moment, macroscopic for a divergent one
    share = lambda p: float(np.max(draws**p) / np.sum(draws**p))
    assert share(1.0) < 0.05
    assert share(4.0) > 0.1


def test_sup_exceedance_matches_reciprocal_law():
    p = besq.sup_exceedance([4.0], 4000, RngStream(11, 0))
    assert abs(p[0] * 4.0 - 1.0) < 0.15
