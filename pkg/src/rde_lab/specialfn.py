"""Special functions: Gauss hypergeometric series and the Sturm-Liouville
problem whose derivative at 0 encodes a weighted local-time Laplace transform.

The boundary problem is

    Phi'' = (2 lambda / x^(1+gamma)) 1_{x >= eps} Phi,   Phi(0) = 1,

with Phi the unique convex, decreasing, nonnegative solution; on [0, eps] the
potential vanishes and Phi is affine. The quantity of interest is
phi'(0+) = Phi'(eps), since E exp(-lambda int_eps^inf L_{tau(1)}^y y^(-1-gamma) dy)
equals exp(phi'(0+)/2).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.special import kv


def hypergeom_2f1(a: float, b: float, c: float, x: float, rtol: float = 1e-14) -> float:
    """Gauss hypergeometric F(a,b;c;x) by power series; requires |x| < 1."""
    if abs(x) >= 1:
        raise ValueError(f"series domain is |x| < 1, got x={x}")
    if c <= 0 and c == int(c):
        raise ValueError(f"c must not be a nonpositive integer, got {c}")
    term = 1.0
    total = 1.0
    for n in range(1, 10000):
        term *= (a + n - 1) * (b + n - 1) / ((c + n - 1) * n) * x
        total += term
        if abs(term) < rtol * abs(total):
            return total
    raise RuntimeError("hypergeometric series did not converge in 10000 terms")


@dataclass
class SturmLiouvilleSolution:
    lam: float
    epsilon: float
    gamma_exp: float
    phi_prime_at_zero: float
    grid: np.ndarray
    profile: np.ndarray


def _integrate_profile(v: float, lam: float, eps: float, gamma: float, x_big: float):
    """RK4 integration of Phi'' = 2 lam x^(-1-gamma) Phi from eps outward on a
    geometric grid, starting from Phi(eps) = 1 + v*eps, Phi'(eps) = v.

    Returns (+1, ...) if Phi' turns positive (shot too shallow, solution
    diverges upward), (-1, ...) if Phi hits 0 (too steep), (0, xs, phis) if
    neither happened by x_big.
    """
    x = eps
    phi = 1.0 + v * eps
    dphi = v
    xs = [0.0, eps]
    phis = [1.0, phi]
    log_ratio = 0.005
    while x < x_big:
        hstep = x * log_ratio

        def rhs(xx, p):
            return 2.0 * lam * xx ** (-1.0 - gamma) * p

        k1p, k1d = dphi, rhs(x, phi)
        k2p, k2d = dphi + 0.5 * hstep * k1d, rhs(x + 0.5 * hstep, phi + 0.5 * hstep * k1p)
        k3p, k3d = dphi + 0.5 * hstep * k2d, rhs(x + 0.5 * hstep, phi + 0.5 * hstep * k2p)
        k4p, k4d = dphi + hstep * k3d, rhs(x + hstep, phi + hstep * k3p)
        phi += hstep / 6.0 * (k1p + 2 * k2p + 2 * k3p + k4p)
        dphi += hstep / 6.0 * (k1d + 2 * k2d + 2 * k3d + k4d)
        x += hstep
        xs.append(x)
        phis.append(phi)
        if phi <= 0.0:
            return -1, np.array(xs[:-1]), np.array(phis[:-1])
        if dphi > 0.0:
            return +1, np.array(xs[:-1]), np.array(phis[:-1])
    return 0, np.array(xs), np.array(phis)


def solve_sturm_liouville(lam: float, eps: float, gamma: float) -> SturmLiouvilleSolution:
    """Shooting solver for the convex decreasing nonnegative solution.

    Bisects on the affine slope v = Phi'(eps): too-negative shots cross 0,
    too-shallow shots turn upward; the decaying solution sits between. The
    target range extends to x_big where the potential's remaining mass
    int_x^inf 2 lam y^(-1-gamma) dy = 2 lam / (gamma x^gamma) drops below
    1e-10, beyond which Phi' can no longer change sign.
    """
    if lam < 0 or eps <= 0 or gamma <= 0:
        raise ValueError("need lam >= 0, eps > 0, gamma > 0")
    if lam == 0.0:
        grid = np.array([0.0, eps, 10 * eps])
        return SturmLiouvilleSolution(lam, eps, gamma, 0.0, grid, np.ones(3))
    x_big = (2.0 * lam / (gamma * 1e-10)) ** (1.0 / gamma)
    v_hi = 0.0  # always turns upward (Phi' hits 0+ immediately with positive curvature)
    v_lo = -1.0 / eps * 0.999  # Phi(eps) near 0: guaranteed to cross
    status, _, _ = _integrate_profile(v_lo, lam, eps, gamma, x_big)
    trace = [(v_lo, status)]
    if status != -1:
        raise RuntimeError(f"shooting bracket failure, lower shot did not cross 0: {trace}")
    for _ in range(60):
        v_mid = 0.5 * (v_lo + v_hi)
        status, _, _ = _integrate_profile(v_mid, lam, eps, gamma, x_big)
        trace.append((v_mid, status))
        if status == -1:
            v_lo = v_mid
        else:
            v_hi = v_mid
        if v_hi - v_lo < 1e-10 * max(1.0, abs(v_lo)):
            break
    v = 0.5 * (v_lo + v_hi)
    # Both walls attract exponentially, so at double precision every shot
    # eventually leaves the decaying manifold; the bracket midpoint is still
    # accurate to the bracket width. The profile is kept up to the onset of
    # divergence (the trailing unreliable tail is trimmed by the integrator).
    _, xs, phis = _integrate_profile(v, lam, eps, gamma, x_big)
    return SturmLiouvilleSolution(
        lam=lam, epsilon=eps, gamma_exp=gamma, phi_prime_at_zero=float(v), grid=xs, profile=phis
    )


def cylindrical_crosscheck(lam: float, eps: float, gamma: float, kappa: float) -> float:
    """phi'(0+) from the closed form Phi(x) = A sqrt(x) K_kappa(c x^(1/(2 kappa))).

    For gamma = 1 - 1/kappa the decaying solution of Phi'' = 2 lam x^(-1-gamma) Phi
    is sqrt(x) times a modified Bessel function of the second kind of index
    kappa in the variable c x^s with s = (1-gamma)/2 = 1/(2 kappa) and
    c = kappa sqrt(8 lam) (the decaying branch; the first-kind branch grows).
    Matching value and slope to the affine piece 1 + v x at eps gives
    v = g'(eps) / (g(eps) - eps g'(eps)).
    """
    if abs(gamma - (1.0 - 1.0 / kappa)) > 1e-12:
        raise ValueError(f"index mismatch: gamma={gamma} is not 1 - 1/kappa for kappa={kappa}")
    if lam == 0.0:
        return 0.0
    s = 1.0 / (2.0 * kappa)
    c = kappa * np.sqrt(8.0 * lam)

    def g_and_deriv(x):
        w = c * x**s
        k = kv(kappa, w)
        kprime = -0.5 * (kv(kappa - 1.0, w) + kv(kappa + 1.0, w))
        gval = np.sqrt(x) * k
        gder = 0.5 / np.sqrt(x) * k + np.sqrt(x) * kprime * c * s * x ** (s - 1.0)
        return gval, gder

    gv, gd = g_and_deriv(eps)
    denom = gv - eps * gd
    if denom <= 0:
        raise RuntimeError("branch selection failure: matching denominator nonpositive")
    return float(gd / denom)
