"""Batch entry point: run verification suites, write CSV/JSON artifacts.

Artifacts are pure functions of (config, seed): CSV bodies are byte-identical
across worker counts, and wall-clock data lives only in the JSON metadata
block.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from dataclasses import dataclass, field

from . import __version__
from .checks import REGISTRY, CheckResult, RunConfig, checks_for

COMMANDS = ("verify", "tails", "speed", "sturm", "all")


def _fmt(x) -> str:
    return f"{float(x):.17g}"


@dataclass
class VerificationReport:
    checks: list
    overall: bool
    metadata: dict = field(default_factory=dict)

    def to_json(self) -> str:
        body = {
            "metadata": self.metadata,
            "checks": [
                {
                    "name": c.name,
                    "paper_anchor": c.anchor,
                    "statistic": c.statistic,
                    "threshold": c.threshold,
                    "verdict": c.verdict,
                    "n": c.n,
                    "runtime": c.runtime,
                    "detail": c.detail,
                }
                for c in self.checks
            ],
            "overall": self.overall,
        }
        return json.dumps(body, indent=2)


def list_checks():
    """Every registered check as (name, anchor, suites), in registry order."""
    return [(c.name, c.anchor, c.suites) for c in REGISTRY.values()]


def _write_ks_csv(path: str, results: list):
    with open(path, "w") as f:
        f.write("check,n1,n2,statistic,threshold,verdict\n")
        for c in results:
            verdict = "pass" if c.verdict else "fail"
            f.write(f"{c.name},{c.n},{c.n2},{_fmt(c.statistic)},{_fmt(c.threshold)},{verdict}\n")


def _write_tail_csv(path: str, curve):
    with open(path, "w") as f:
        f.write("r,n,hits,p_hat,stderr\n")
        for r, n, hits, p, se in zip(curve.r, curve.n, curve.hits, curve.p_hat, curve.stderr):
            f.write(f"{_fmt(r)},{int(n)},{int(hits)},{_fmt(p)},{_fmt(se)}\n")


def _write_samples_csv(path: str, values):
    with open(path, "w") as f:
        f.write("value\n")
        for v in values:
            f.write(_fmt(v) + "\n")


def write_artifacts(out_dir: str, results: list):
    os.makedirs(out_dir, exist_ok=True)
    _write_ks_csv(os.path.join(out_dir, "ks.csv"), results)
    for c in results:
        if c.curve is not None:
            stem = "tails" if c.name == "upsilon-tail" else c.name.replace("-", "_") + "_tails"
            _write_tail_csv(os.path.join(out_dir, stem + ".csv"), c.curve)
        if c.samples is not None:
            _write_samples_csv(
                os.path.join(out_dir, c.name.replace("-", "_") + "_samples.csv"), c.samples
            )


def run(cfg: RunConfig) -> VerificationReport:
    """Execute the configured suite, write artifacts, return the report."""
    selected = checks_for(cfg.command, cfg.suite)
    results: list[CheckResult] = []
    t0 = time.time()
    for reg in selected:
        res = reg.fn(cfg)
        results.append(res)
        tag = "PASS" if res.verdict else "FAIL"
        extra = f" [{res.detail}]" if res.detail else ""
        print(
            f"[{tag}] {res.name}: statistic={res.statistic:.6g} "
            f"threshold={res.threshold:.6g} n={res.n} ({res.runtime:.1f}s){extra}",
            flush=True,
        )
    write_artifacts(cfg.output_dir, results)
    report = VerificationReport(
        checks=results,
        overall=all(c.verdict for c in results),
        metadata={
            "timestamp": time.strftime("%Y-%m-%dT%H:%M:%S%z"),
            "elapsed_s": time.time() - t0,
            "seed": cfg.seed,
            "command": cfg.command,
            "workers": cfg.workers,
            "version": __version__,
        },
    )
    with open(os.path.join(cfg.output_dir, "report.json"), "w") as f:
        f.write(report.to_json() + "\n")
    return report


def _parse_config_file(path: str) -> dict:
    """Flat key=value file; blank lines and #-comments ignored."""
    out = {}
    with open(path) as f:
        for i, raw in enumerate(f, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise ValueError(f"{path}:{i}: expected key=value, got {line!r}")
            key, _, value = line.partition("=")
            out[key.strip()] = value.strip()
    return out


def _float_list(text: str) -> list:
    return [float(tok) for tok in text.split(",") if tok.strip()]


def build_config(args) -> RunConfig:
    raw = _parse_config_file(args.config) if args.config else {}
    known = {"kappa", "seed", "replicas", "workers", "out", "suite", "r_grid"}
    for key in raw:
        if key not in known and not key.startswith("dt."):
            raise ValueError(f"unknown config key {key!r} (known: {sorted(known)} and dt.*)")
    dt_overrides = {k[3:]: float(v) for k, v in raw.items() if k.startswith("dt.")}

    def pick(cli_val, key, cast, default):
        if cli_val is not None:
            return cli_val
        if key in raw:
            return cast(raw[key])
        return default

    suite = args.suite if args.suite is not None else raw.get("suite")
    if isinstance(suite, str):
        suite = [s.strip() for s in suite.split(",") if s.strip()]
    out_dir = pick(args.out, "out", str, None) or os.environ.get("RDE_LAB_OUT", ".")
    return RunConfig(
        command=args.command,
        kappa=pick(args.kappa, "kappa", float, None),
        seed=pick(args.seed, "seed", int, 7),
        replicas=pick(args.replicas, "replicas", int, None),
        workers=pick(args.workers, "workers", int, 1),
        dt_overrides=dt_overrides,
        output_dir=out_dir,
        suite=suite,
        r_grid=_float_list(raw["r_grid"]) if "r_grid" in raw else None,
    )


def make_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="rde-lab",
        description="Monte Carlo verification suites for diffusion in a drifted "
        "Brownian potential",
    )
    p.add_argument("command", choices=COMMANDS + ("list-checks",))
    p.add_argument("--config", help="flat key=value config file")
    p.add_argument("--kappa", type=float, help="drift parameter override")
    p.add_argument("--seed", type=int, help="master seed (default 7)")
    p.add_argument("--replicas", type=int, help="replica count override for every check")
    p.add_argument("--workers", type=int, help="worker processes (default 1)")
    p.add_argument("--out", help="output directory (fallback: $RDE_LAB_OUT, then cwd)")
    p.add_argument("--suite", help="comma-separated check names to run")
    return p


def main(argv=None) -> int:
    args = make_parser().parse_args(argv)
    if args.suite is not None:
        args.suite = [s.strip() for s in args.suite.split(",") if s.strip()]
    if args.command == "list-checks":
        for name, anchor, suites in list_checks():
            print(f"{name:24s} [{','.join(suites)}] {anchor}")
        return 0
    try:
        cfg = build_config(args)
        report = run(cfg)
    except KeyError as exc:
        print(f"error: {exc.args[0]}", file=sys.stderr)
        return 1
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    print("overall:", "PASS" if report.overall else "FAIL")
    return 0 if report.overall else 2


if __name__ == "__main__":
    sys.exit(main())
