"""Sampling primitives: determinism, independence, and law checks.

The stable and Cauchy samplers are validated against their target
characteristic functions, since parametrization drift is the classic bug
in transformation-method stable sampling.
"""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rde_lab.rng import RngStream
from rde_lab.stats import empirical_cf


def test_same_key_replays_bit_identical():
    a = RngStream(1, 0).gaussian(1000)
    b = RngStream(1, 0).gaussian(1000)
    assert np.array_equal(a, b)


@given(seed=st.integers(0, 2**63), sid=st.integers(0, 2**63), n=st.integers(1, 64))
@settings(max_examples=25, deadline=None)
def test_determinism_property(seed, sid, n):
    assert np.array_equal(RngStream(seed, sid).uniform(n), RngStream(seed, sid).uniform(n))


def test_distinct_streams_uncorrelated():
    n = 10**6
    a = RngStream(3, 0).gaussian(n)
    b = RngStream(3, 1).gaussian(n)
    corr = float(np.mean(a * b))
    assert abs(corr) < 4.0 / np.sqrt(n)


def test_spawn_from_distinct_parents_differs():
    # spawn is a tree: child i of parent 0 must differ from child i of parent 1
    kids = [RngStream(9, p).spawn(4).gaussian(8) for p in range(6)]
    for i in range(len(kids)):
        for j in range(i + 1, len(kids)):
            assert not np.array_equal(kids[i], kids[j])


def test_gaussian_moments():
    x = RngStream(5, 0).gaussian(10**6)
    assert abs(x.mean()) < 4e-3
    assert abs(x.var() - 1.0) < 1e-2


def test_noncentral_chisq_empty_mixture_is_zero():
    s = RngStream(5, 1)
    x = s.noncentral_chisq(0.0, 0.0, size=100)
    assert np.all(x == 0.0)


@pytest.mark.parametrize("d,nc", [(2.0, 0.0), (3.0, 5.0), (0.7, 1.3)])
def test_noncentral_chisq_mean(d, nc):
    n = 10**6
    x = RngStream(6, 0).noncentral_chisq(d, nc, size=n)
    target = d + nc
    se = x.std() / np.sqrt(n)
    assert abs(x.mean() - target) < max(4 * se, 0.01 * target)


def test_noncentral_chisq_rejects_negative():
    s = RngStream(0, 0)
    with pytest.raises(ValueError):
        s.noncentral_chisq(-1.0, 0.0)
    with pytest.raises(ValueError):
        s.noncentral_chisq(1.0, -0.5)


def _stable_cf_target(p, t):
    return np.exp(-abs(t) ** p * (1.0 - 1j * np.sign(t) * np.tan(np.pi * p / 2.0)))


def test_stable_half_cf_at_one():
    x = RngStream(7, 0).stable(0.5, 10**6)
    target = _stable_cf_target(0.5, 1.0)
    emp = empirical_cf(x, 1.0)
    assert abs(emp.real - target.real) < 0.01
    assert abs(emp.imag - target.imag) < 0.01


def test_stable_half_supported_on_positive_axis():
    x = RngStream(7, 1).stable(0.5, 10**5)
    assert np.all(x > 0.0)


@pytest.mark.parametrize("p", [0.3, 0.5, 0.9])
def test_stable_cf_grid(p):
    x = RngStream(8, 0).stable(p, 10**6)
    for t in (0.5, 1.0, 2.0):
        target = _stable_cf_target(p, t)
        emp = empirical_cf(x, t)
        assert abs(emp.real - target.real) < 0.015, (p, t)
        assert abs(emp.imag - target.imag) < 0.015, (p, t)


def test_stable_index_domain():
    s = RngStream(0, 0)
    for bad in (0.0, 1.0, 1.5, -0.2):
        with pytest.raises(ValueError):
            s.stable(bad)


def test_cauchy_asym_cf():
    # E exp(it C1) = exp(-|t| - it (2/pi) log|t|); the log term vanishes at t=1
    x = RngStream(9, 0).cauchy_asym(10**6)
    emp1 = empirical_cf(x, 1.0)
    assert abs(emp1 - np.exp(-1.0)) < 0.01
    emp2 = empirical_cf(x, 2.0)
    assert abs(abs(emp2) - np.exp(-2.0)) < 0.01


def test_cauchy_asym_median_stable_across_seeds():
    medians = [np.median(RngStream(100 + k, 0).cauchy_asym(2 * 10**5)) for k in range(10)]
    assert max(medians) - min(medians) < 0.05


def test_elementary_draw_validation():
    s = RngStream(0, 0)
    with pytest.raises(ValueError):
        s.exponential(0.0)
    with pytest.raises(ValueError):
        s.gamma(-1.0)
    with pytest.raises(ValueError):
        s.poisson(-2.0)
