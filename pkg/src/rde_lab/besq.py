"""Squared Bessel (BESQ) samplers and the identities built on them.

Transitions for dimension d >= 0 are exact in law (noncentral chi-square);
the only d < 0 functional needed anywhere, the hitting time of 0, is
simulated by Euler-Maruyama with absorption.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np
from scipy.special import gammaincc, gammaln

from .rng import RngStream


@dataclass(frozen=True)
class BesqSpec:
    """Dimension and start of a squared Bessel process.

    ``dimension_d`` may be any real (negative dimensions are only simulated
    until absorption at 0); ``start`` is the initial squared value.
    """

    dimension_d: float
    start: float

    def __post_init__(self):
        if self.start < 0:
            raise ValueError(f"start must be >= 0, got {self.start}")


@dataclass
class ProcessPath:
    """A path sampled on a uniform time grid."""

    dt: float
    values: np.ndarray
    absorbed_at: float | None = None

    @property
    def times(self) -> np.ndarray:
        return self.dt * np.arange(len(self.values))


def besq_step(x, d: float, dt: float, stream: RngStream):
    """One exact-in-law BESQ(d) transition over time dt, vectorized in x.

    For d >= 0 the transition X_{t+dt} | X_t = x is dt times a noncentral
    chi-square of dimension d and noncentrality x/dt, which is exact; 0 is
    absorbing when d = 0. ``dt`` may be an array aligned with ``x``.
    """
    if d < 0:
        raise ValueError("exact transitions require d >= 0; use hitting-time simulation for d < 0")
    x = np.asarray(x, dtype=float)
    dt = np.asarray(dt, dtype=float)
    if np.any(dt <= 0):
        raise ValueError("dt must be > 0")
    if np.any(x < 0):
        raise ValueError("BESQ state must be >= 0")
    return dt * stream.noncentral_chisq(d, x / dt, size=np.broadcast_shapes(x.shape, dt.shape))


def sample_s_infinity(
    kappa: float,
    stream: RngStream,
    size: int = 1,
    dt_min: float = 1e-4,
    dt_max: float = 0.05,
    dt_rel: float = 0.002,
    hard_cap: float = 1e7,
):
    """Draws of S(infinity) as the absorption time at 0 of BESQ(2-2k) from 4.

    Euler-Maruyama with a state-proportional step (never coarser than
    ``dt_rel * x``, never finer than ``dt_min``); the zero crossing is
    located by linear interpolation within the absorbing step, so the
    hitting-time bias is first order in the local step.
    """
    if kappa <= 0:
        raise ValueError(f"kappa must be > 0, got {kappa}")
    d = 2.0 - 2.0 * kappa
    x = np.full(size, 4.0)
    t = np.zeros(size)
    out = np.empty(size)
    alive = np.arange(size)
    while alive.size:
        step = np.clip(dt_rel * x, dt_min, dt_max)
        g = stream.gaussian(alive.size)
        x_new = x + d * step + 2.0 * np.sqrt(x * step) * g
        hit = x_new <= 0.0
        if np.any(hit):
            frac = x[hit] / (x[hit] - x_new[hit])
            out[alive[hit]] = t[hit] + frac * step[hit]
        keep = ~hit
        x, t, alive = x_new[keep], t[keep] + step[keep], alive[keep]
        if alive.size and t.min() > hard_cap:
            raise RuntimeError(
                f"{alive.size} BESQ({d}) paths not absorbed by t={hard_cap:g}; "
                "check kappa > 0 and step configuration"
            )
    return out


def sup_exceedance(u_values, n: int, stream: RngStream, dt: float = 1e-4, start: float = 1.0):
    """Estimated P(sup_t Z_t > u) for BESQ(0) started at ``start``.

    Since the process is a nonnegative martingale absorbed at 0, the exact
    probability is start/u.  Paths are advanced by exact transitions on a
    grid of step dt and stopped on absorption or on exceeding max(u);
    discrete monitoring can only miss excursions between grid points, a
    first-order-in-dt bias budgeted in the tolerance of downstream checks.
    """
    u_values = np.asarray(u_values, dtype=float)
    cap = float(u_values.max())
    z = np.full(n, float(start))
    zmax = z.copy()
    stream_ = stream
    while True:
        active = (z > 0.0) & (zmax <= cap)
        if not np.any(active):
            break
        z[active] = besq_step(z[active], 0.0, dt, stream_)
        np.maximum(zmax, z, out=zmax)
    return np.array([np.mean(zmax > u) for u in u_values])


def dufresne_density(x, kappa: float):
    """Density of S(infinity): an inverse-Gamma law, 2^k/Gamma(k) e^{-2/x} x^{-(k+1)}."""
    if kappa <= 0:
        raise ValueError(f"kappa must be > 0, got {kappa}")
    x = np.asarray(x, dtype=float)
    if np.any(x <= 0):
        raise ValueError("density is supported on x > 0")
    logpdf = kappa * np.log(2.0) - gammaln(kappa) - 2.0 / x - (kappa + 1.0) * np.log(x)
    return np.exp(logpdf)


def dufresne_cdf(x, kappa: float):
    """CDF of S(infinity); equals the upper regularized Gamma function Q(k, 2/x)."""
    if kappa <= 0:
        raise ValueError(f"kappa must be > 0, got {kappa}")
    x = np.asarray(x, dtype=float)
    out = np.zeros(np.shape(x))
    pos = x > 0
    out = np.where(pos, gammaincc(kappa, 2.0 / np.where(pos, x, 1.0)), 0.0)
    return out


def dufresne_mean(kappa: float) -> float:
    """E S(infinity) = 2/(k-1), finite only for k > 1."""
    if kappa <= 1:
        raise ValueError("mean of S(infinity) is finite only for kappa > 1")
    return 2.0 / (kappa - 1.0)


def lamperti_transform(bm_values: np.ndarray, dt: float, zeta: float):
    """Map a driftless Brownian path into a Bessel(2+2*zeta) path started at 2.

    Given B on a uniform grid (B(0) = 0), returns ``(clock, r)`` where
    ``clock`` is the additive functional A(t) = int_0^t exp(B + zeta*s/2) ds
    (trapezoid) and ``r = 2 exp((B + zeta*t/2)/2)`` evaluated along the grid,
    so that exp(B(t) + zeta*t/2) = r^2(A(t))/4 holds exactly by construction.
    Works on batches: ``bm_values`` may be (n_paths, n_steps+1).
    """
    b = np.atleast_2d(np.asarray(bm_values, dtype=float))
    if not np.allclose(b[:, 0], 0.0):
        raise ValueError("Brownian input must start at 0")
    t = dt * np.arange(b.shape[1])
    w = b + 0.5 * zeta * t
    e = np.exp(w)
    clock = np.zeros_like(e)
    clock[:, 1:] = np.cumsum(0.5 * (e[:, 1:] + e[:, :-1]) * dt, axis=1)
    r = 2.0 * np.exp(0.5 * w)
    if np.ndim(bm_values) == 1:
        return clock[0], r[0]
    return clock, r


def lamperti_marginal(clock: np.ndarray, r: np.ndarray, u: float):
    """Value of the transformed path at clock time ``u`` (per row), by interpolation.

    Rows whose clock never reaches ``u`` raise; extend the Brownian horizon
    instead of truncating.
    """
    clock = np.atleast_2d(clock)
    r = np.atleast_2d(r)
    if np.any(clock[:, -1] < u):
        raise ValueError("clock horizon short of requested time; extend the input paths")
    idx = np.argmax(clock >= u, axis=1)
    i0 = np.maximum(idx - 1, 0)
    c0 = np.take_along_axis(clock, i0[:, None], 1)[:, 0]
    c1 = np.take_along_axis(clock, idx[:, None], 1)[:, 0]
    r0 = np.take_along_axis(r, i0[:, None], 1)[:, 0]
    r1 = np.take_along_axis(r, idx[:, None], 1)[:, 0]
    frac = np.where(c1 > c0, (u - c0) / np.where(c1 > c0, c1 - c0, 1.0), 0.0)
    return r0 + frac * (r1 - r0)


def sample_perpetuity(
    d: float,
    b: float,
    stream: RngStream,
    size: int = 1,
    horizon: float | None = None,
    dt0: float = 1e-3,
    dt_rel: float = 0.02,
    quiet_level: float = 1e-8,
    quiet_span: float = 1.0,
):
    """Draws of int_0^inf R(s)^{-b} ds for R a Bessel(d) process from 2, d > 2.

    The squared process is advanced by exact transitions on a geometrically
    growing time grid; the integral uses the trapezoid rule. Integration
    stops once the integrand has stayed below ``quiet_level`` for a span of
    ``quiet_span`` on every path (transient growth R ~ sqrt(ds) makes the
    remaining tail negligible); an explicit ``horizon`` is flagged if the
    last 10% of accumulated mass exceeds 1% of the total.
    """
    if d <= 2 or b <= 2:
        raise ValueError("requires d > 2 (transient) and b > 2 (integrable tail)")
    x = np.full(size, 4.0)  # R(0) = 2
    t = 0.0
    integ = np.zeros(size)
    f_prev = x ** (-b / 2.0)
    quiet_since = np.zeros(size)
    tail_mark = None
    tail_at_mark = None
    while True:
        step = max(dt0, dt_rel * t)
        x = besq_step(x, d, step, stream)
        f = x ** (-b / 2.0)
        integ += 0.5 * (f + f_prev) * step
        f_prev = f
        t += step
        quiet_since = np.where(f < quiet_level, quiet_since + step, 0.0)
        if horizon is not None:
            if tail_mark is None and t >= 0.9 * horizon:
                tail_mark = t
                tail_at_mark = integ.copy()
            if t >= horizon:
                if tail_at_mark is not None:
                    share = np.max((integ - tail_at_mark) / np.maximum(integ, 1e-300))
                    if share > 0.01:
                        warnings.warn(
                            f"perpetuity horizon {horizon:g} too small: last 10% of the "
                            f"range carries up to {share:.2%} of the integral",
                            stacklevel=2,
                        )
                break
        elif np.all(quiet_since >= quiet_span):
            break
        if t > 1e9:
            raise RuntimeError("perpetuity integration failed to quiesce")
    return integ


def perpetuity_reference_cdf(y, d: float, b: float):
    """CDF of the perpetuity's law: a Dufresne variable of index (d-2)/(b-2),
    scaled by 1/(2^{b-2} (b-2)^2)."""
    scale = 1.0 / (2.0 ** (b - 2.0) * (b - 2.0) ** 2)
    return dufresne_cdf(np.asarray(y, dtype=float) / scale, (d - 2.0) / (b - 2.0))


def perpetuity_reference_mean(d: float, b: float) -> float:
    scale = 1.0 / (2.0 ** (b - 2.0) * (b - 2.0) ** 2)
    return scale * dufresne_mean((d - 2.0) / (b - 2.0))
