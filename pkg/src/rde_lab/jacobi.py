"""Jacobi diffusions on [0,1], the Warren-Yor ratio identity, the Upsilon and
Lambda functionals behind the tail exponent, and the first-crossing time of
1/2 from the entrance boundary.

The driving SDE is dY = 2 sqrt(Y(1-Y)) dB + (d1 - (d1+d2) Y) dt. Both 0 and 1
are entrance boundaries for d1, d2 >= 2: the process can start there but not
return. The Euler scheme clamps to [1e-12, 1-1e-12] and halves the step
tenfold whenever a path sits within 0.01 of either boundary, where the
square-root diffusion coefficient degenerates.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np
from scipy.integrate import quad
from scipy.special import gammaln

from .besq import ProcessPath, besq_step
from .rng import RngStream
from .stats import TailCurve

CLAMP_LO = 1e-12
CLAMP_HI = 1.0 - 1e-12


@dataclass
class JacobiSpec:
    d1: float
    d2: float
    y0: float
    dt: float

    def __post_init__(self):
        if self.d1 <= 0 or self.d2 <= 0:
            raise ValueError(f"dimensions must be positive, got ({self.d1}, {self.d2})")
        if not (0.0 <= self.y0 <= 1.0):
            raise ValueError(f"y0 must lie in [0,1], got {self.y0}")
        if self.dt <= 0:
            raise ValueError(f"dt must be positive, got {self.dt}")


@dataclass
class UpsilonResult:
    r: float
    value: float
    saturated: bool = False


def _upsilon_integrand(y):
    return y / (1.0 - y) ** 2


def _advance(y, d1, d2, dt, stream):
    """One global Euler step of size dt, vectorized.

    Returns (y_next, ups_inc) where ups_inc is the within-step trapezoid
    accumulation of Y/(1-Y)^2. Paths within 0.01 of a boundary are
    substepped: tenfold Euler near 0 (degenerate diffusion, vanishing
    integrand) and via exact squared-Bessel transitions near 1, where the
    integrand explodes like (1-Y)^-2 and any Euler step can overshoot the
    boundary and poison the integral with the clamp value.
    """
    out = np.empty_like(y)
    ups = np.zeros_like(y)
    near1 = y > 0.99
    near0 = (y < 0.01) & ~near1
    mid = ~(near1 | near0)

    if np.any(mid):
        ym = y[mid]
        drift = d1 - (d1 + d2) * ym
        y2 = ym + drift * dt + 2.0 * np.sqrt(ym * (1.0 - ym) * dt) * stream.gaussian(ym.size)
        # An Euler step from inside the bulk can still jump past 1; cap it
        # just inside the boundary layer (not at the hard clamp, where the
        # integrand is ~1e24) and let the next step's exact BESQ substeps
        # resolve the excursion.
        np.clip(y2, CLAMP_LO, 0.995, out=y2)
        out[mid] = y2
        ups[mid] = 0.5 * (_upsilon_integrand(ym) + _upsilon_integrand(y2)) * dt

    if np.any(near0):
        sub = y[near0].copy()
        acc = np.zeros_like(sub)
        h = dt / 10.0
        f_prev = _upsilon_integrand(sub)
        for _ in range(10):
            drift = d1 - (d1 + d2) * sub
            sub = sub + drift * h + 2.0 * np.sqrt(sub * (1.0 - sub) * h) * stream.gaussian(sub.size)
            np.clip(sub, CLAMP_LO, 0.995, out=sub)
            f_cur = _upsilon_integrand(sub)
            acc += 0.5 * (f_prev + f_cur) * h
            f_prev = f_cur
        out[near0] = sub
        ups[near0] = acc

    if np.any(near1):
        # Near y = 1 the gap z = 1 - Y satisfies dz = (d2 - (d1+d2)z) dt
        # + 2 sqrt(z(1-z)) dB, which is a squared Bessel of dimension d2 up
        # to O(z) corrections.  An Euler step can overshoot the boundary no
        # matter how small the substep (the noise scale is proportional to
        # z itself), and the clamp value then feeds 1/z^2 ~ 1e24 into the
        # integral.  The exact BESQ transition never crosses zero, so we use
        # it for the boundary layer.
        z = 1.0 - y[near1]
        acc = np.zeros_like(z)
        h = dt / 10.0
        f_prev = _upsilon_integrand(1.0 - z)
        for _ in range(10):
            z = besq_step(z, d2, h, stream)
            np.clip(z, CLAMP_LO, 1.0, out=z)
            f_cur = _upsilon_integrand(1.0 - z)
            acc += 0.5 * (f_prev + f_cur) * h
            f_prev = f_cur
        out[near1] = 1.0 - z
        ups[near1] = acc

    return out, ups


def _em_advance(y, d1, d2, dt, stream):
    """One Euler step, vectorized, boundary-substepped; integrand discarded."""
    y2, _ = _advance(y, d1, d2, dt, stream)
    return y2


def simulate_jacobi(spec: JacobiSpec, horizon: float, stream: RngStream) -> ProcessPath:
    """One Jacobi path on a uniform grid of step spec.dt."""
    n = int(np.round(horizon / spec.dt))
    values = np.empty(n + 1)
    values[0] = spec.y0
    y = np.array([float(spec.y0)])
    for i in range(1, n + 1):
        y = _em_advance(y, spec.d1, spec.d2, spec.dt, stream)
        values[i] = y[0]
    return ProcessPath(dt=spec.dt, values=values)


def jacobi_marginal(spec: JacobiSpec, t: float, stream: RngStream, n: int) -> np.ndarray:
    """n independent draws of Y(t), no path storage."""
    steps = int(np.round(t / spec.dt))
    y = np.full(n, float(spec.y0))
    for _ in range(steps):
        y = _em_advance(y, spec.d1, spec.d2, spec.dt, stream)
    return y


def upsilon_of(path: ProcessPath, r: float) -> UpsilonResult:
    """Upsilon(r) = int_0^r Y/(1-Y)^2 ds by the trapezoid rule on the path."""
    n = int(np.round(r / path.dt))
    if n > len(path.values) - 1:
        raise ValueError(f"path horizon {(len(path.values) - 1) * path.dt:g} < r={r}")
    y = path.values[: n + 1]
    saturated = bool(np.any(y >= 1.0 - 1e-9))
    if saturated:
        warnings.warn("path within clamping tolerance of 1; Upsilon integrand capped", stacklevel=2)
    integrand = y / (1.0 - np.minimum(y, CLAMP_HI)) ** 2
    value = float(np.trapz(integrand, dx=path.dt))
    return UpsilonResult(r=r, value=value, saturated=saturated)


def lambda_clock(r1sq_path: ProcessPath, r2sq_path: ProcessPath, r: float) -> float:
    """Lambda(r) = int_0^r du/(R1^2 + R2^2) from stored squared-Bessel paths."""
    if r == 0.0:
        return 0.0
    if r1sq_path.dt != r2sq_path.dt:
        raise ValueError("paths must share a time step")
    n = int(np.round(r / r1sq_path.dt))
    if n > len(r1sq_path.values) - 1 or n > len(r2sq_path.values) - 1:
        raise ValueError("paths do not cover [0, r]")
    s = r1sq_path.values[: n + 1] + r2sq_path.values[: n + 1]
    return float(np.trapz(1.0 / s, dx=r1sq_path.dt))


def lambda_clock_limit(kappa: float, r: float, stream: RngStream, n: int) -> np.ndarray:
    """n draws of Lambda(r)/log r with R1^2 + R2^2 an exact BESQ(4+2k) chain
    from 4 on a geometric time grid (the clock integrand decays like 1/u, so
    geometric refinement near 0 with coarsening beyond is the natural grid)."""
    d = 4.0 + 2.0 * kappa
    t_min = 1e-4
    cells = int(np.ceil(np.log(r / t_min) / np.log(1.05))) + 1
    grid = np.concatenate(([0.0], t_min * 1.05 ** np.arange(cells)))
    grid = np.minimum(grid, r)
    v = np.full(n, 4.0)
    acc = np.zeros(n)
    f_prev = 1.0 / v
    for i in range(1, grid.size):
        dt = grid[i] - grid[i - 1]
        if dt == 0.0:
            break
        v = besq_step(v, d, dt, stream)
        f_cur = 1.0 / v
        acc += 0.5 * (f_prev + f_cur) * dt
        f_prev = f_cur
    return acc / np.log(r)


def warren_yor_check(kappa: float, s_star: float, n: int, stream: RngStream, dt: float = 1e-3):
    """Samples both sides of the time-changed ratio identity.

    R1^2 ~ BESQ(2) from 0 and R2^2 ~ BESQ(2+2k) from 4 are advanced by exact
    transitions; the clock Lambda(t) = int dt/(R1^2+R2^2) is accumulated until
    it crosses s_star and the ratio R1^2/(R1^2+R2^2) is linearly interpolated
    at the crossing. Returns (ratio_draws, jacobi_draws).

    Raises if any path fails to reach the inverse clock within the horizon.
    """
    if kappa <= 1:
        raise ValueError(f"kappa must exceed 1, got {kappa}")
    d2 = 2.0 + 2.0 * kappa
    r1 = np.zeros(n)
    r2 = np.full(n, 4.0)
    clock = np.zeros(n)
    ratio = np.full(n, np.nan)
    alive = np.arange(n)
    ratio_prev = r1 / (r1 + r2)
    clock_prev = clock.copy()
    t = 0.0
    horizon = 200.0
    while alive.size and t < horizon:
        r1 = besq_step(r1, 2.0, dt, stream)
        r2 = besq_step(r2, d2, dt, stream)
        t += dt
        clock = clock + dt / (r1 + r2)
        ratio_cur = r1 / (r1 + r2)
        crossed = clock >= s_star
        if np.any(crossed):
            frac = (s_star - clock_prev[crossed]) / (clock[crossed] - clock_prev[crossed])
            ratio[alive[crossed]] = ratio_prev[crossed] + frac * (
                ratio_cur[crossed] - ratio_prev[crossed]
            )
        keep = ~crossed
        r1, r2 = r1[keep], r2[keep]
        clock, clock_prev = clock[keep], clock[keep].copy()
        ratio_prev = ratio_cur[keep]
        alive = alive[keep]
    if alive.size:
        raise RuntimeError(
            f"{alive.size} paths did not reach inverse clock {s_star} within horizon {horizon}"
        )
    spec = JacobiSpec(d1=2.0, d2=d2, y0=0.0, dt=dt)
    jac = jacobi_marginal(spec, s_star, stream, n)
    return ratio, jac


def tail_upsilon(
    kappa: float, u: float, r_grid, n: int, stream: RngStream, dt: float = 1e-3
) -> TailCurve:
    """Tail curve p_hat(r) = P(Upsilon(r) > u r) for the (2, 2+2k) Jacobi
    process from the entrance boundary, one long path per replica serving
    every r in the grid by continuation."""
    r_grid = np.asarray(sorted(r_grid), dtype=float)
    if r_grid.size < 3:
        raise ValueError("r_grid needs at least 3 points for a slope fit")
    u_min = (1.0 + kappa) / (kappa * (kappa - 1.0))
    if u <= u_min:
        raise ValueError(f"u must exceed (1+k)/(k(k-1)) = {u_min:g}, got {u}")
    d1, d2 = 2.0, 2.0 + 2.0 * kappa
    y = np.full(n, CLAMP_LO)
    ups = np.zeros(n)
    hits = np.zeros(r_grid.size, dtype=np.int64)
    t = 0.0
    k = 0
    steps_per_r = np.round(r_grid / dt).astype(np.int64)
    step = 0
    while k < r_grid.size:
        y, inc = _advance(y, d1, d2, dt, stream)
        ups += inc
        step += 1
        t += dt
        while k < r_grid.size and step >= steps_per_r[k]:
            hits[k] = int(np.count_nonzero(ups > u * r_grid[k]))
            k += 1
    return TailCurve(r=r_grid, n=np.full(r_grid.size, n, dtype=np.int64), hits=hits, u=u)


def sample_t_half(
    kappa: float,
    stream: RngStream,
    size: int,
    y0_start: float = 0.0,
    dt0: float = 1e-3,
    growth: float = 1.002,
    horizon: float = 1e15,
    straggler_tol: float = 1e-4,
) -> np.ndarray:
    """Draws of the first-crossing time of 1/2 by the (2, 2+2k) Jacobi process
    from the entrance boundary at 0.

    Euler schemes on the degenerate SDE carry an O(sqrt(dt)) crossing bias, so
    this samples through the ratio construction instead: R1^2 ~ BESQ(2) from
    4 y0/(1-y0) and R2^2 ~ BESQ(2+2k) from 4 advance by exact transitions, and
    T_1/2 is the accumulated clock int dt/(R1^2+R2^2) when R1^2 first reaches
    R2^2, linearly interpolated at the crossing. The step grows geometrically:
    large clock values live at exponentially large natural times where the
    integrand is smooth, so coarser late steps cost no accuracy.

    ``y0_start`` 0 is the exact entrance; a small positive value mimics an
    interior start for boundary-insensitivity experiments.
    """
    if not (0.0 <= y0_start <= 0.01):
        raise ValueError(f"y0_start should be 0 or a small positive stand-in, got {y0_start}")
    d2 = 2.0 + 2.0 * kappa
    r1 = np.full(size, 4.0 * y0_start / (1.0 - y0_start))
    r2 = np.full(size, 4.0)
    clock = np.zeros(size)
    out = np.full(size, np.nan)
    alive = np.arange(size)
    inv_prev = 1.0 / (r1 + r2)
    diff_prev = r1 - r2
    clock_prev = clock.copy()
    t = 0.0
    dt = dt0
    while alive.size:
        if t >= horizon:
            # clock-tail mass decays exponentially; a tiny censored fraction
            # shifts the mean by far less than the Monte Carlo error
            if alive.size <= straggler_tol * size:
                warnings.warn(
                    f"censored {alive.size}/{size} straggler paths at the horizon cap "
                    f"{horizon:g} (clock value assigned)",
                    stacklevel=2,
                )
                out[alive] = clock
                break
            raise RuntimeError(f"{alive.size} paths below 1/2 at the horizon cap {horizon}")
        r1 = besq_step(r1, 2.0, dt, stream)
        r2 = besq_step(r2, d2, dt, stream)
        t += dt
        inv_cur = 1.0 / (r1 + r2)
        clock = clock + 0.5 * (inv_prev + inv_cur) * dt
        diff_cur = r1 - r2
        crossed = diff_cur >= 0.0
        # discrete monitoring misses within-step excursions of R1^2 - R2^2
        # above 0 and would bias T upward by O(sqrt(dt)); a Brownian-bridge
        # correction restores them (increment variance 4(R1^2+R2^2) dt)
        var = 4.0 * (r1 + r2) * dt
        with np.errstate(over="ignore"):
            p_bridge = np.exp(-2.0 * diff_prev * diff_cur / var)
        hidden = (~crossed) & (stream.uniform(diff_cur.size) < p_bridge)
        crossed = crossed | hidden
        if np.any(crossed):
            frac = np.where(
                hidden[crossed],
                0.5,
                -diff_prev[crossed] / (diff_cur[crossed] - diff_prev[crossed]),
            )
            out[alive[crossed]] = clock_prev[crossed] + frac * (
                clock[crossed] - clock_prev[crossed]
            )
        keep = ~crossed
        r1, r2 = r1[keep], r2[keep]
        clock = clock[keep]
        clock_prev = clock.copy()
        inv_prev = inv_cur[keep]
        diff_prev = diff_cur[keep]
        alive = alive[keep]
        dt *= growth
    return out


def t_half_moment_series(kappa: float, n_terms: int):
    """Partial sum of E_0(T_1/2) = (1/2) sum_{n>=1} G(1+n+k)/G(2+k) / (2^n n n!)
    with a geometric remainder bound from the last term ratio.

    Returns (value, remainder_bound).
    """
    if kappa <= 1:
        raise ValueError(f"kappa must exceed 1, got {kappa}")
    if n_terms < 1:
        raise ValueError("n_terms must be at least 1")
    ns = np.arange(1, n_terms + 1, dtype=float)
    log_terms = (
        gammaln(1.0 + ns + kappa)
        - gammaln(2.0 + kappa)
        - ns * np.log(2.0)
        - np.log(ns)
        - gammaln(ns + 1.0)
    )
    terms = np.exp(log_terms)
    total = float(terms.sum()) / 2.0
    m = float(n_terms)
    ratio = (1.0 + m + 1.0 + kappa - 1.0) / (2.0 * (m + 1.0)) * (m / (m + 1.0))
    if ratio >= 1.0:
        bound = np.inf
    else:
        bound = float(terms[-1] * ratio / (1.0 - ratio)) / 2.0
    return total, bound


def hypergeom_laplace_check(kappa: float, theta: float, n: int, stream: RngStream):
    """MC Laplace transform E_0 exp(-2 theta T_1/2) against 1/F(a,b;1;1/2)
    with a, b the roots of z^2 - (1+k) z + theta.

    Returns (mc, closed_form, rel_error).
    """
    if theta < 0:
        raise ValueError("theta must be nonnegative")
    disc = (1.0 + kappa) ** 2 - 4.0 * theta
    if disc < 0:
        raise ValueError(f"(a, b) complex: need theta <= (1+k)^2/4 = {(1 + kappa) ** 2 / 4:g}")
    from .specialfn import hypergeom_2f1

    a = ((1.0 + kappa) - np.sqrt(disc)) / 2.0
    b = ((1.0 + kappa) + np.sqrt(disc)) / 2.0
    closed = 1.0 / hypergeom_2f1(a, b, 1.0, 0.5)
    draws = sample_t_half(kappa, stream, n)
    mc = float(np.mean(np.exp(-2.0 * theta * draws)))
    return mc, float(closed), abs(mc - closed) / closed


def scale_function_y(y: float, kappa: float) -> float:
    """S_Y(y) = int_{1/2}^y dx / (x (1-x)^(k+1)) by adaptive quadrature."""
    if not (0.0 < y < 1.0):
        raise ValueError(f"y must lie in (0,1), got {y}")
    val, _ = quad(lambda x: 1.0 / (x * (1.0 - x) ** (kappa + 1.0)), 0.5, y, limit=200)
    return float(val)


def u_clock(path: ProcessPath, kappa: float) -> np.ndarray:
    """U(t) = 4 int_0^t ds / (Y (1-Y)^(2k+1)) cumulatively along the path."""
    y = np.clip(path.values, CLAMP_LO, CLAMP_HI)
    integrand = 4.0 / (y * (1.0 - y) ** (2.0 * kappa + 1.0))
    inc = 0.5 * (integrand[1:] + integrand[:-1]) * path.dt
    return np.concatenate(([0.0], np.cumsum(inc)))
