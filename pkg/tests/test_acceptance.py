"""End-to-end acceptance suite.

Every test prints one pass/fail line (bypassing capture) and then asserts.
Replica counts follow the documented desk scale; heavy experiments use
eight worker processes, and every statistic is reproducible from the frozen
seeds below.
"""

import filecmp
import subprocess
import sys

import numpy as np
import pytest

from rde_lab import besq, checks, jacobi
from rde_lab.rng import RngStream

SEED = 7
WORKERS = 8


def _cfg(**kw):
    kw.setdefault("seed", SEED)
    kw.setdefault("workers", WORKERS)
    return checks.RunConfig(**kw)


@pytest.fixture
def announce(capsys):
    def _announce(num, ok, text):
        with capsys.disabled():
            print(f"criterion {num:2d}: {'PASS' if ok else 'FAIL'} — {text}", flush=True)
        assert ok, f"criterion {num} failed: {text}"

    return _announce


def test_criterion_01_dufresne(announce):
    res = checks.check_dufresne(_cfg(replicas=50000))
    announce(1, res.verdict,
             f"Dufresne law, KS={res.statistic:.4f} (<0.015), mean within 2% at n=5e4")


def test_criterion_02_getoor_sharpe(announce):
    res = checks.check_getoor_sharpe(_cfg(replicas=10**6))
    announce(2, res.verdict,
             f"Getoor-Sharpe transform, rel err={res.statistic:.2e} (<0.005) at n=1e6")


def test_criterion_03_ray_knight(announce):
    res = checks.check_ray_knight(_cfg(replicas=20000))
    announce(3, res.verdict,
             f"Ray-Knight I, Exp(2) KS={res.statistic:.4f} (<0.03), mean within 3%, "
             "2e4 paths at dt=1e-4")


def test_criterion_04_biane_yor(announce):
    res = checks.check_biane_yor(_cfg(replicas=10**5))
    announce(4, res.verdict,
             f"Biane-Yor stable(1/2), two-sample KS={res.statistic:.4f} (<0.02) at n=1e5")


def test_criterion_05_cauchy(announce):
    res = checks.check_cauchy(_cfg(replicas=10**5))
    announce(5, res.verdict,
             f"Cauchy identity, two-sample KS={res.statistic:.4f} (<0.03) at n=1e5")


def test_criterion_06_warren_yor_and_additivity(announce):
    wy = checks.check_warren_yor(_cfg(replicas=10**5))
    add = checks.check_besq_additivity(_cfg(replicas=10**5))
    announce(6, wy.verdict and add.verdict,
             f"Warren-Yor KS={wy.statistic:.4f} (<0.02), "
             f"BESQ additivity KS={add.statistic:.4f} (<0.02) at n=1e5")


def test_criterion_07_t_half_moment(announce):
    closed = (5.0 + 2.0 * np.log(2.0)) / 12.0
    series, _ = jacobi.t_half_moment_series(2.0, 50)
    series_ok = abs(series - closed) < 1e-6
    res = checks.check_t_half(_cfg(replicas=10**5))
    announce(7, res.verdict and series_ok,
             f"first-passage moment, MC rel err={res.statistic:.4f} (<0.02), "
             f"series-vs-resummation gap={abs(series - closed):.1e} (<1e-6)")


def test_criterion_08_hypergeometric_laplace(announce):
    res = checks.check_hypergeom(_cfg(replicas=10**5))
    announce(8, res.verdict,
             f"hypergeometric Laplace transform, rel err={res.statistic:.2e} (<0.01) at n=1e5")


def test_criterion_09_upsilon_tail(announce):
    slope = checks.check_upsilon_tail(_cfg(replicas=10**5))
    ratio = checks.check_upsilon_ratio(_cfg())
    announce(9, slope.verdict and ratio.verdict,
             f"tail exponent: fitted slope={slope.statistic:.3f} (-0.5 +/- 0.35); "
             f"halving ratio={ratio.statistic:.3f} ({ratio.detail})")


def test_criterion_10_speed(announce):
    fast = checks.check_speed(_cfg(replicas=200))
    ctrl = checks.check_speed_control(_cfg())
    announce(10, fast.verdict and ctrl.verdict,
             f"speed: mean X(t)/t={fast.statistic:.3f} (in [0.45,0.55]); "
             f"sub-ballistic control mean={ctrl.statistic:.4f} (|.|<0.02)")


def test_criterion_11_hitting_tails(announce):
    res = checks.check_hitting_tail(_cfg(replicas=10**4))
    announce(11, res.verdict,
             f"hitting-time tails (informational): slope={res.statistic:.3f} "
             f"(in [-1,0]), {res.detail}")


def test_criterion_12_sturm_liouville(announce):
    res = checks.check_sturm(_cfg(replicas=10**5))
    announce(12, res.verdict,
             f"Sturm-Liouville: MC rel err={res.statistic:.4f} (<0.02), {res.detail} (<5e-3)")


def test_criterion_13_sup_law(announce):
    res = checks.check_sup_law(_cfg(replicas=12000))
    announce(13, res.verdict,
             f"BESQ(0) sup law: worst rel err={res.statistic:.4f} (<0.05) over u in 2,4,8")


def test_criterion_14_perpetuity(announce):
    ks = checks.check_perpetuity(_cfg(replicas=10**4))
    draws = besq.sample_perpetuity(6.0, 4.0, RngStream(SEED, 950), size=2 * 10**4)
    # heavy-tail diagnostic: the single largest draw's share of the p-th
    # moment sum vanishes when the moment is finite (p < index 2) and stays
    # macroscopic when it diverges (p > 2), where the sum is max-dominated
    share = lambda p: float(np.max(draws**p) / np.sum(draws**p))
    stable_lo = share(1.0) < 0.05
    diverges = share(4.0) > 0.1
    announce(14, ks.verdict and stable_lo and diverges,
             f"perpetuity: KS={ks.statistic:.4f} (<0.03); max-share of moment sum "
             f"p=1: {share(1.0):.4f} (<0.05), p=4: {share(4.0):.4f} (>0.1)")


def test_criterion_15_determinism(announce, tmp_path):
    # full registry at coarse steps; CSV bodies must match across worker counts
    cfgfile = tmp_path / "run.cfg"
    cfgfile.write_text("dt.jacobi_dt=0.01\ndt.drive_dt=0.05\ndt.control_t=100\n")
    dirs = []
    for workers in (1, 8):
        out = tmp_path / f"w{workers}"
        subprocess.run(
            [sys.executable, "-m", "rde_lab.cli", "all",
             "--config", str(cfgfile), "--replicas", "256", "--seed", str(SEED),
             "--workers", str(workers), "--out", str(out)],
            check=False, capture_output=True)
        dirs.append(out)
    names = sorted(p.name for p in dirs[0].iterdir() if p.suffix == ".csv")
    assert names, "no CSV artifacts produced"
    same, diff, funny = filecmp.cmpfiles(dirs[0], dirs[1], names, shallow=False)
    announce(15, not diff and not funny,
             f"workers 1 vs 8: {len(same)} CSV bodies byte-identical"
             + (f"; mismatched: {diff + funny}" if diff or funny else ""))
