"""Command-line front end.

Subcommands:
  density  -- finite-n eigenvalue density on a grid -> CSV + manifest
  limit    -- limit-law density f_c on a grid -> CSV + manifest
  sample   -- Metropolis draws -> archive + summary JSON + manifest
  verify   -- run the verification suite -> table (stdout) and optional JSON

Exit codes: 0 success, 2 parameter/domain error, 3 verification failure.
Every output file is accompanied by a JSON manifest recording the command,
parameters, seed, version and wall clock, so runs are reproducible.
"""

import argparse
import json
import math
import sys
import time
from dataclasses import asdict, dataclass, field

import numpy as np

from . import __version__, kernels
from .exceptions import DomainError
from .finite_spectrum import EnsembleParams, density_curve
from .limit_law import LimitLaw, limit_cdf, limit_density
from .sampler import (
    SamplerConfig,
    empirical_cdf,
    extreme_stats,
    ks_distance,
    mcmc_sample,
    write_draw_archive,
)

_MANIFEST_SCHEMA = "chiralrmt/run-manifest-v1"


@dataclass
class RunManifest:
    """Reproducibility record written alongside every output file."""

    command: str
    parameters: dict
    seed: int | None
    outputs: list[str]
    wall_clock_s: float
    version: str = __version__
    kernel_backend: str = field(default_factory=kernels.backend)
    schema: str = _MANIFEST_SCHEMA


def _write_manifest(path, manifest: RunManifest) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(asdict(manifest), fh, indent=2)
        fh.write("\n")


def _parse_grid(spec: str) -> np.ndarray:
    try:
        lo_s, hi_s, count_s = spec.split(":")
        lo, hi, count = float(lo_s), float(hi_s), int(count_s)
    except ValueError as exc:
        raise DomainError(f"grid must be lo:hi:count, got {spec!r}") from exc
    if count < 2 or not hi > lo:
        raise DomainError(f"grid needs hi > lo and count >= 2, got {spec!r}")
    return np.linspace(lo, hi, count)


def _write_csv(path, header: str, columns) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(header + "\n")
        for row in zip(*columns):
            fh.write(",".join(f"{v:.17g}" for v in row) + "\n")


def _cmd_density(args) -> int:
    t0 = time.perf_counter()
    params = EnsembleParams(args.n, args.mu)
    grid = _parse_grid(args.grid)
    scaling = {"raw": "raw", "sqrtn": "sqrt_n"}[args.scaling]
    curve = density_curve(params, grid, scaling)
    _write_csv(args.out, "t,density", (curve.abscissae, curve.values))
    manifest = RunManifest(
        command="density",
        parameters={"n": params.n, "mu": params.mu, "grid": args.grid, "scaling": args.scaling},
        seed=None,
        outputs=[args.out],
        wall_clock_s=time.perf_counter() - t0,
    )
    _write_manifest(args.out + ".manifest.json", manifest)
    return 0


def _cmd_limit(args) -> int:
    t0 = time.perf_counter()
    law = LimitLaw(args.c)
    grid = _parse_grid(args.grid)
    values = limit_density(law, grid)
    _write_csv(args.out, "t,f_c", (grid, values))
    manifest = RunManifest(
        command="limit",
        parameters={"c": law.c, "a": law.a, "b": law.b, "grid": args.grid},
        seed=None,
        outputs=[args.out],
        wall_clock_s=time.perf_counter() - t0,
    )
    _write_manifest(args.out + ".manifest.json", manifest)
    return 0


def _cmd_sample(args) -> int:
    t0 = time.perf_counter()
    params = EnsembleParams(args.n, args.mu)
    config = SamplerConfig(
        sweeps=args.sweeps,
        burn_in=args.burn_in,
        proposal_scale=args.proposal_scale,
        seed=args.seed,
        chains=args.chains,
        thin=args.thin,
    )
    draws = mcmc_sample(params, config)
    write_draw_archive(args.out, params, draws)

    scale = 1.0 / math.sqrt(params.n)
    law = LimitLaw(max(params.mu, 0.0) / params.n)
    ecdf = empirical_cdf(draws, scale)
    ks = ks_distance(ecdf, lambda t: limit_cdf(law, t))
    extremes = extreme_stats(draws, scale)
    manifest = RunManifest(
        command="sample",
        parameters={
            "n": params.n,
            "mu": params.mu,
            "sweeps": config.sweeps,
            "burn_in": config.burn_in,
            "thin": config.thin,
            "chains": config.chains,
            "proposal_scale": config.proposal_scale,
        },
        seed=config.seed,
        outputs=[args.out, args.out + ".summary.json"],
        wall_clock_s=time.perf_counter() - t0,
    )
    summary = {
        "schema": "chiralrmt/sample-summary-v1",
        "draws": len(draws),
        "acceptance_rate": float(np.mean([d.acceptance_rate for d in draws])),
        "ks_vs_limit": ks,
        "lambda_max_scaled": asdict(extremes.lambda_max),
        "lambda_min_scaled": asdict(extremes.lambda_min),
        "manifest": asdict(manifest),
    }
    with open(args.out + ".summary.json", "w", encoding="utf-8") as fh:
        json.dump(summary, fh, indent=2)
        fh.write("\n")
    _write_manifest(args.out + ".manifest.json", manifest)
    return 0


def _cmd_verify(args) -> int:
    from .verify import run_verification

    report = run_verification(args.level)
    print(report.format_table())
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(report.to_json())
            fh.write("\n")
    return 0 if report.passed else 3


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="chiralrmt",
        description="Eigenvalue densities and log-gas sampling for the "
        "determinant-weighted Gaussian Hermitian ensemble.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("density", help="finite-n eigenvalue density on a grid")
    p.add_argument("--n", type=int, required=True, help="matrix dimension")
    p.add_argument("--mu", type=float, required=True, help="determinant exponent (> -1/2)")
    p.add_argument("--grid", required=True, help="lo:hi:count (use --grid=-8:8:401 for negative lo)")
    p.add_argument("--scaling", choices=["raw", "sqrtn"], default="raw")
    p.add_argument("--out", required=True, help="output CSV path")
    p.set_defaults(func=_cmd_density)

    p = sub.add_parser("limit", help="limit-law density f_c on a grid")
    p.add_argument("--c", type=float, required=True, help="limit ratio mu/n (>= 0)")
    p.add_argument("--grid", required=True, help="lo:hi:count")
    p.add_argument("--out", required=True, help="output CSV path")
    p.set_defaults(func=_cmd_limit)

    p = sub.add_parser("sample", help="Metropolis sampling of the joint eigenvalue law")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--mu", type=float, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--sweeps", type=int, default=3000, help="total sweeps per chain")
    p.add_argument("--burn-in", type=int, default=2000, dest="burn_in")
    p.add_argument("--thin", type=int, default=10, help="record one draw every thin sweeps")
    p.add_argument("--chains", type=int, default=1)
    p.add_argument("--proposal-scale", type=float, default=0.4, dest="proposal_scale")
    p.add_argument("--out", required=True, help="draw archive path")
    p.set_defaults(func=_cmd_sample)

    p = sub.add_parser("verify", help="run the verification suite")
    p.add_argument("--level", choices=["fast", "full"], default="fast")
    p.add_argument("--out", default=None, help="optional JSON report path")
    p.set_defaults(func=_cmd_verify)

    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code else 0
    try:
        return args.func(args)
    except DomainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
