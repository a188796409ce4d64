"""Hypergeometric series and the Sturm-Liouville shooting solver."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.special import hyp2f1

from rde_lab import specialfn


@pytest.mark.parametrize(
    "a,b,c,x",
    [(0.5, 1.5, 1.0, 0.5), (2.0, 1.0, 3.0, 0.25), (0.1, 0.2, 0.9, 0.8), (1.0, 2.0, 1.0, 0.5)],
)
def test_hypergeom_matches_scipy(a, b, c, x):
    assert specialfn.hypergeom_2f1(a, b, c, x) == pytest.approx(hyp2f1(a, b, c, x), rel=1e-10)


@given(
    a=st.floats(0.1, 3.0), b=st.floats(0.1, 3.0), c=st.floats(0.5, 3.0)
)
@settings(max_examples=30, deadline=None)
def test_hypergeom_at_zero_is_one(a, b, c):
    assert specialfn.hypergeom_2f1(a, b, c, 0.0) == pytest.approx(1.0)


def test_sturm_liouville_profile_shape():
    sol = specialfn.solve_sturm_liouville(0.1, 0.1, 0.5)
    assert sol.profile[0] == pytest.approx(1.0)
    assert sol.phi_prime_at_zero <= 0.0
    assert np.all(sol.profile >= 0.0)
    assert np.all(np.diff(sol.profile) <= 1e-12)  # nonincreasing
    # convex up to quadrature noise on the solved range
    second = np.diff(sol.profile, 2)
    assert np.min(second) > -1e-5


def test_sturm_liouville_zero_potential():
    sol = specialfn.solve_sturm_liouville(0.0, 0.1, 0.5)
    assert sol.phi_prime_at_zero == 0.0


def test_cylindrical_crosscheck_agrees():
    lam, eps, gamma = 0.1, 0.1, 0.5
    sol = specialfn.solve_sturm_liouville(lam, eps, gamma)
    cyl = specialfn.cylindrical_crosscheck(lam, eps, gamma, 1.0 / (1.0 - gamma))
    assert abs(sol.phi_prime_at_zero / cyl - 1.0) < 0.005


def test_sturm_liouville_validation():
    with pytest.raises(ValueError):
        specialfn.solve_sturm_liouville(-1.0, 0.1, 0.5)
    with pytest.raises(ValueError):
        specialfn.solve_sturm_liouville(0.1, 0.0, 0.5)
