"""Statistical verdicts: KS distances, tail curves, log-log slope fits.

Thresholds are explicit constants supplied by the caller and derived from the
asymptotic KS null distribution at the stated sample sizes; nothing here
computes a p-value silently.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np


@dataclass
class EmpiricalSample:
    """A batch of i.i.d. draws with provenance for reports."""

    values: np.ndarray
    seed: int | None = None
    generator: str = ""

    @property
    def n(self) -> int:
        return len(self.values)


@dataclass
class KsResult:
    statistic: float
    n1: int
    n2: int | None
    pass_threshold: float

    @property
    def verdict(self) -> bool:
        return self.statistic < self.pass_threshold


def ks_threshold(n1: int, n2: int | None = None, alpha: float = 0.01) -> float:
    """Asymptotic null quantile: c(alpha) * sqrt(1/n1 [+ 1/n2]),
    c(alpha) = sqrt(-log(alpha/2)/2)."""
    c = np.sqrt(-np.log(alpha / 2.0) / 2.0)
    inv = 1.0 / n1 + (1.0 / n2 if n2 else 0.0)
    return float(c * np.sqrt(inv))


def _values(x) -> np.ndarray:
    if isinstance(x, EmpiricalSample):
        return np.asarray(x.values, dtype=float)
    return np.asarray(x, dtype=float)


def ks_two_sample(a, b, pass_threshold: float) -> KsResult:
    """Sup distance between two empirical CDFs."""
    a = np.sort(_values(a))
    b = np.sort(_values(b))
    if a.size < 50 or b.size < 50:
        raise ValueError(f"samples too small for a KS verdict: {a.size}, {b.size}")
    allv = np.concatenate([a, b])
    cdf_a = np.searchsorted(a, allv, side="right") / a.size
    cdf_b = np.searchsorted(b, allv, side="right") / b.size
    stat = float(np.max(np.abs(cdf_a - cdf_b)))
    return KsResult(statistic=stat, n1=a.size, n2=b.size, pass_threshold=pass_threshold)


def ks_one_sample(a, cdf, pass_threshold: float) -> KsResult:
    """Sup distance between an empirical CDF and a reference CDF callable."""
    a = np.sort(_values(a))
    if a.size < 50:
        raise ValueError(f"sample too small for a KS verdict: {a.size}")
    f = np.asarray(cdf(a), dtype=float)
    i = np.arange(1, a.size + 1)
    stat = float(max(np.max(i / a.size - f), np.max(f - (i - 1) / a.size)))
    return KsResult(statistic=stat, n1=a.size, n2=None, pass_threshold=pass_threshold)


@dataclass
class TailCurve:
    """Rare-event estimates p_hat(r) = P(functional(r) > u r) on a grid of r."""

    r: np.ndarray
    n: np.ndarray
    hits: np.ndarray
    u: float = np.nan

    @property
    def p_hat(self) -> np.ndarray:
        return self.hits / self.n

    @property
    def stderr(self) -> np.ndarray:
        p = self.p_hat
        return np.sqrt(p * (1.0 - p) / self.n)


@dataclass
class SlopeFit:
    """Weighted least squares of log p_hat on log r."""

    log_r: np.ndarray
    log_p: np.ndarray
    weights: np.ndarray
    slope: float
    slope_stderr: float
    intercept: float


def fit_loglog_slope(curve: TailCurve) -> SlopeFit:
    """Fit the tail exponent: regression of log p_hat on log r, weighted by
    the inverse delta-method variance of log p_hat (n p / (1-p)).

    The reported standard error comes from the binomial error propagation,
    not from residual scatter, so it stays positive on exact fits.
    """
    usable = curve.hits > 0
    if np.count_nonzero(usable) < 3:
        raise ValueError(
            f"slope fit needs at least 3 grid points with hits > 0, have "
            f"{int(np.count_nonzero(usable))}"
        )
    if np.any(~usable):
        import warnings

        warnings.warn(
            f"dropping {int(np.count_nonzero(~usable))} zero-count cells from the slope fit",
            stacklevel=2,
        )
    r = np.asarray(curve.r, dtype=float)[usable]
    n = np.asarray(curve.n, dtype=float)[usable]
    p = (np.asarray(curve.hits, dtype=float) / np.asarray(curve.n, dtype=float))[usable]
    x = np.log(r)
    y = np.log(p)
    w = n * p / np.maximum(1.0 - p, 1e-12)
    sw = w.sum()
    xbar = (w * x).sum() / sw
    ybar = (w * y).sum() / sw
    sxx = (w * (x - xbar) ** 2).sum()
    slope = (w * (x - xbar) * (y - ybar)).sum() / sxx
    intercept = ybar - slope * xbar
    return SlopeFit(
        log_r=x,
        log_p=y,
        weights=w,
        slope=float(slope),
        slope_stderr=float(1.0 / np.sqrt(sxx)),
        intercept=float(intercept),
    )


def empirical_cf(values, t: float) -> complex:
    """Empirical characteristic function at frequency t."""
    v = _values(values)
    return complex(np.mean(np.exp(1j * t * v)))


def mean_with_stderr(values):
    v = _values(values)
    return float(np.mean(v)), float(np.std(v, ddof=1) / np.sqrt(v.size))
