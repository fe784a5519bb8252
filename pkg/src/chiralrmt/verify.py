"""Verification suite: every shipped claim checked against an independent
oracle (quadrature, exact identities, or Monte Carlo statistics).

``fast`` runs the deterministic numerical checks (seconds); ``full`` adds
the Monte Carlo checks (minutes).  Each check reports the measured numbers
so a failure is diagnosable from the report alone.
"""

import json
import math
import tempfile
import time
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import kernels
from .finite_spectrum import (
    EnsembleParams,
    density,
    density_mass_quadrature,
    kernel,
    laplace_tau_quadrature,
    laplace_tau_scaled,
    moment,
)
from .limit_law import LimitLaw, bessel_integral_identity, endpoints, limit_laplace
from .quadrature import adaptive_quad, gauss_legendre, graded_edges, panel_points
from .sampler import SamplerConfig, b_n_value, concentration_check, extreme_stats, mcmc_sample

__all__ = ["CheckResult", "VerificationReport", "run_verification", "REGISTERED_CHECKS"]


@dataclass
class CheckResult:
    check_id: str
    description: str
    passed: bool
    detail: str
    seconds: float


@dataclass
class VerificationReport:
    level: str
    results: list[CheckResult] = field(default_factory=list)
    wall_clock: float = 0.0

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.results)

    def to_dict(self) -> dict:
        return {
            "schema": "chiralrmt/verification-report-v1",
            "level": self.level,
            "passed": self.passed,
            "wall_clock_s": self.wall_clock,
            "kernel_backend": kernels.backend(),
            "checks": [
                {
                    "id": r.check_id,
                    "description": r.description,
                    "passed": r.passed,
                    "detail": r.detail,
                    "seconds": round(r.seconds, 3),
                }
                for r in self.results
            ],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    def format_table(self) -> str:
        lines = []
        width = max(len(r.check_id) for r in self.results) if self.results else 10
        for r in self.results:
            mark = "PASS" if r.passed else "FAIL"
            lines.append(f"{mark}  {r.check_id:<{width}}  [{r.seconds:7.2f}s]  {r.detail}")
        summary = "all checks passed" if self.passed else "SOME CHECKS FAILED"
        lines.append(f"{'-' * 24}\nlevel={self.level}  total={self.wall_clock:.1f}s  {summary}")
        return "\n".join(lines)


# --------------------------------------------------------------------------
# Deterministic checks
# --------------------------------------------------------------------------


def check_orthonormality():
    """Gram matrices of the first 41 weighted Laguerre functions ~ identity."""
    worst = 0.0
    kmax = 40
    for alpha in (-0.4, 0.0, 0.5, 3.0):
        upper = 40.0 + 10.0 * kmax
        x, w = panel_points(graded_edges(0.0, upper, sing_exp=alpha), 200)
        block = kernels.phi_block(kmax, alpha, np.ascontiguousarray(x))
        gram = (block * w) @ block.T
        worst = max(worst, float(np.max(np.abs(gram - np.eye(kmax + 1)))))
    return worst <= 1e-10, f"max |Gram - I| = {worst:.3e} (tol 1e-10)"


_MASS_GRID = [(n, mu) for n in (1, 2, 5, 10, 25, 50) for mu in (0.0, 0.5, 2.0, 10.0)]


def check_unit_mass_and_trace():
    """Density mass ~ 1 and kernel-diagonal trace ~ n for a parameter grid."""
    worst_mass = 0.0
    worst_trace = 0.0
    for n, mu in _MASS_GRID:
        params = EnsembleParams(n, mu)
        worst_mass = max(worst_mass, abs(density_mass_quadrature(params) - 1.0))
        upper = params.support_cutoff()
        trace = 2.0 * adaptive_quad(
            lambda x: kernel(params, x, x), 0.0, upper, tol=1e-9, npts=32, sing_exp=2.0 * mu
        )
        worst_trace = max(worst_trace, abs(trace - n))
    ok = worst_mass <= 1e-8 and worst_trace <= 1e-6
    return ok, f"max |mass-1| = {worst_mass:.2e} (tol 1e-8), max |trace-n| = {worst_trace:.2e} (tol 1e-6)"


_LAPLACE_CASES = [
    (1, 0.0, 0.3),
    (1, 0.3, 0.2),
    (2, 0.0, 0.5),
    (2, 2.0, -1.0),
    (5, 0.5, 2.0),
    (5, 8.0, -3.0),
    (7, 0.2, -2.0 + 1.0j),
    (7, 0.0, 3.0 + 1.0j),
    (11, 0.0, 3.0),
    (11, 2.0, 5.0 - 2.0j),
    (20, 3.0, 0.5 + 2.0j),
    (20, 0.5, 10.0),
    (20, 10.0, -5.0),
    (30, 2.0, 15.0),
    (30, 0.0, -0.5 + 4.0j),
    (30, 25.0, 2.0),
    (50, 10.0, 5.0),
    (50, 25.0, 25.0),
    (50, 0.0, 12.0 + 3.0j),
    (50, 2.0, -2.0),
]


def check_laplace_closed_form():
    """Hypergeometric closed form of the squared-spectrum transform vs quadrature."""
    worst = 0.0
    for n, mu, s in _LAPLACE_CASES:
        params = EnsembleParams(n, mu)
        closed = laplace_tau_scaled(params, s)
        quad = laplace_tau_quadrature(params, s)
        worst = max(worst, abs(closed - quad) / abs(quad))
    return worst <= 1e-7, f"max relative gap over {len(_LAPLACE_CASES)} cases = {worst:.2e} (tol 1e-7)"


_BESSEL_CASES = [
    (-1.0, 1.0, 0.0),
    (-1.0, 1.0, 1.0),
    (-1.0, 1.0, 2.5),
    (-1.0, 1.0, -1.0 + 1.0j),
    (0.0, 4.0, -0.5),
    (0.0, 2.0, 1.0),  # the c = 0 squared-spectrum support
    (0.26794919243112275, 3.7320508075688776, 2.0),  # the c = 1 squared-spectrum support
    (-3.0, -1.0, 1.0j),
    (2.0, 7.5, 0.3),
    (-0.5, 0.5, 3.0),
]


def check_bessel_identity():
    """Semicircle Laplace identity: quadrature side vs Bessel-series side."""
    worst = 0.0
    for a, b, s in _BESSEL_CASES:
        lhs, rhs = bessel_integral_identity(a, b, s)
        worst = max(worst, abs(lhs - rhs) / abs(lhs))
    return worst <= 1e-10, f"max relative gap over {len(_BESSEL_CASES)} triples = {worst:.2e} (tol 1e-10)"


def _finite_cdf_positive(params: EnsembleParams, pos_grid: np.ndarray) -> np.ndarray:
    """CDF of the sqrt(n)-scaled spectral measure on a positive grid."""
    sn = math.sqrt(params.n)
    xs, ws = gauss_legendre(24)
    edges = np.concatenate([[0.0], sn * pos_grid])
    lo = edges[:-1]
    hi = edges[1:]
    mid = 0.5 * (lo + hi)
    half = 0.5 * (hi - lo)
    nodes = mid[:, None] + half[:, None] * xs[None, :]
    vals = density(params, nodes.ravel()).reshape(nodes.shape)
    return 0.5 + np.cumsum((vals * ws[None, :]).sum(axis=1) * half)


def _limit_cdf_positive(law: LimitLaw, pos_grid: np.ndarray) -> np.ndarray:
    from .limit_law import limit_cdf

    return np.array([limit_cdf(law, t) for t in pos_grid])


def scaled_ks_distance(params: EnsembleParams, law: LimitLaw, grid_size: int = 2000) -> float:
    """KS distance between the scaled finite-n CDF and the limit CDF.

    Both CDFs are symmetric, so the supremum over the real line equals the
    supremum over the positive half-grid.
    """
    pos = np.linspace(1e-6, law.b + 0.3, grid_size)
    return float(np.max(np.abs(_finite_cdf_positive(params, pos) - _limit_cdf_positive(law, pos))))


def check_weak_convergence():
    """KS(scaled finite-n law, limit law) nonincreasing in n and <= 0.02 at n=200."""
    details = []
    ok = True
    for c in (0.0, 0.1, 1.0):
        law = LimitLaw(c)
        ks = [scaled_ks_distance(EnsembleParams(n, c * n), law) for n in (20, 50, 100, 200)]
        mono = all(ks[i + 1] <= ks[i] for i in range(len(ks) - 1))
        ok = ok and mono and ks[-1] <= 0.02
        details.append(f"c={c}: " + "->".join(f"{k:.2e}" for k in ks) + f" mono={mono}")
    return ok, "; ".join(details) + " (tol 0.02 at n=200)"


def check_laplace_limit_agreement():
    """Finite-n transform at n=400 vs the limit transform, absolute 0.01."""
    worst = 0.0
    worst_case = None
    for c in (0.0, 1.0):
        law = LimitLaw(c)
        params = EnsembleParams(400, 400.0 * c)
        for s in (-2.0, -1.0, 0.0, 1.0, 2.0):
            gap = abs(laplace_tau_scaled(params, s) - limit_laplace(law, s))
            if gap > worst:
                worst, worst_case = gap, (c, s)
    return worst <= 0.01, f"max |finite - limit| = {worst:.4f} at (c, s)={worst_case} (tol 0.01)"


def check_b_n_sequence():
    """Finite-n edge scale vs the limit endpoint at n = 1000, c = 1."""
    gap = abs(b_n_value(EnsembleParams(1000, 1000.0)) - endpoints(1.0)[1])
    return gap <= 0.05, f"|b_n - b| = {gap:.4f} (tol 0.05)"


def check_second_moment():
    """Quadrature second moment pinned to n/2 + mu."""
    worst = 0.0
    for n, mu in _MASS_GRID:
        params = EnsembleParams(n, mu)
        worst = max(worst, abs(moment(params, 2) - (n / 2.0 + mu)))
    return worst <= 1e-8, f"max |moment(2) - (n/2 + mu)| = {worst:.2e} (tol 1e-8)"


def check_limit_curve_data():
    """The limit-curve CLI output: support endpoints, edge zeros, c=0 semicircle."""
    from . import cli

    problems = []
    with tempfile.TemporaryDirectory() as tmp:
        for c in (0.0, 0.1, 1.0):
            out = Path(tmp) / f"fc_{c}.csv"
            rc = cli.main(
                ["limit", "--c", str(c), "--grid=-2.2:2.2:1001", "--out", str(out)]
            )
            if rc != 0:
                problems.append(f"c={c}: exit code {rc}")
                continue
            data = np.loadtxt(out, delimiter=",", skiprows=1)
            t, f = data[:, 0], data[:, 1]
            a, b = endpoints(c)
            spacing = t[1] - t[0]
            support = np.abs(t[f > 0.0])
            if support.size == 0:
                problems.append(f"c={c}: empty support")
                continue
            if abs(support.max() - b) > spacing:
                problems.append(f"c={c}: outer endpoint {support.max():.4f} != b={b:.4f}")
            if abs(support.min() - a) > spacing:
                problems.append(f"c={c}: inner endpoint {support.min():.4f} != a={a:.4f}")
            outside = (np.abs(t) > b + spacing) | (np.abs(t) < a - spacing)
            if np.any(f[outside] != 0.0):
                problems.append(f"c={c}: nonzero density outside the support")
            if c == 0.0:
                inside = np.abs(t) <= b
                ref = np.sqrt(np.maximum(2.0 - t[inside] ** 2, 0.0)) / math.pi
                gap = float(np.max(np.abs(f[inside] - ref)))
                if gap > 1e-12:
                    problems.append(f"c=0: semicircle mismatch {gap:.2e}")
    if problems:
        return False, "; ".join(problems)
    return True, "supports match endpoint formulas; c=0 curve is the semicircle to 1e-12"


# --------------------------------------------------------------------------
# Monte Carlo checks
# --------------------------------------------------------------------------

_EDGE_SEED = 20260809
_CONC_SEED = 20260810


def check_edge_convergence():
    """Scaled extreme eigenvalues approach the support endpoints (c = 1).

    The n = 100 mean must land in [b - 0.15, b + 0.05] over 100 independent
    draws, and the sequence of means over n in {20, 50, 100} must climb
    toward b monotonically within error bars (mirrored for the minimum).
    """
    b = endpoints(1.0)[1]
    sizes = (20, 50, 100)
    means_max = {}
    means_min = {}
    ses = {}
    for n in sizes:
        params = EnsembleParams(n, float(n))
        config = SamplerConfig(
            sweeps=2010, burn_in=2000, thin=10, chains=100, seed=_EDGE_SEED + n
        )
        draws = mcmc_sample(params, config)
        stats = extreme_stats(draws, 1.0 / math.sqrt(n))
        means_max[n] = stats.lambda_max.mean
        means_min[n] = stats.lambda_min.mean
        ses[n] = stats.lambda_max.sd / math.sqrt(len(draws))
    in_band = b - 0.15 <= means_max[100] <= b + 0.05
    in_band_min = -b - 0.05 <= means_min[100] <= -b + 0.15
    climbing = all(
        means_max[hi] >= means_max[lo] - 2.0 * (ses[lo] + ses[hi])
        for lo, hi in zip(sizes, sizes[1:])
    )
    falling = all(
        means_min[hi] <= means_min[lo] + 2.0 * (ses[lo] + ses[hi])
        for lo, hi in zip(sizes, sizes[1:])
    )
    toward = abs(means_max[100] - b) < abs(means_max[20] - b)
    toward_min = abs(means_min[100] + b) < abs(means_min[20] + b)
    ok = in_band and in_band_min and climbing and falling and toward and toward_min
    seq = ", ".join(f"n={n} {means_max[n]:.4f}" for n in sizes)
    detail = (
        f"mean max/sqrt(n): {seq} (band at n=100 [{b - 0.15:.4f}, {b + 0.05:.4f}]); "
        f"mean min/sqrt(n): n=100 {means_min[100]:.4f}; monotone={climbing and falling}"
    )
    return ok, detail


def check_concentration():
    """Empirical tail of the clipped-identity statistic under its Gaussian bound."""
    params = EnsembleParams(100, 100.0)
    config = SamplerConfig(sweeps=2010, burn_in=2000, thin=10, chains=400, seed=_CONC_SEED)
    res = concentration_check(params, config, "clipped_identity", eps=0.2)
    limit = res.bound + 3.0 * res.binomial_se
    ok = res.empirical_tail <= limit
    return ok, (
        f"tail = {res.empirical_tail:.4f} over {res.draws_used} draws, "
        f"bound = {res.bound:.4f} + 3se = {limit:.4f}"
    )


REGISTERED_CHECKS = [
    ("orthonormality", "Gram matrix of weighted Laguerre functions vs identity", check_orthonormality, "fast"),
    ("unit-mass-trace", "density mass = 1 and kernel trace = n", check_unit_mass_and_trace, "fast"),
    ("laplace-closed-form", "squared-spectrum transform: closed form vs quadrature", check_laplace_closed_form, "fast"),
    ("bessel-identity", "semicircle Laplace identity lhs vs rhs", check_bessel_identity, "fast"),
    ("weak-convergence", "KS distance of scaled finite-n law to limit law", check_weak_convergence, "fast"),
    ("laplace-limit", "finite-n transform at n=400 vs limit transform", check_laplace_limit_agreement, "fast"),
    ("edge-convergence", "sampled extreme eigenvalues near support endpoints", check_edge_convergence, "full"),
    ("b-n-sequence", "finite-n edge scale b_n vs limit endpoint", check_b_n_sequence, "fast"),
    ("concentration", "Lipschitz statistic tail under Gaussian bound", check_concentration, "full"),
    ("second-moment", "quadrature second moment equals n/2 + mu", check_second_moment, "fast"),
    ("limit-curve-data", "limit-curve CLI data: supports, edges, semicircle", check_limit_curve_data, "fast"),
]


def run_verification(level: str = "fast") -> VerificationReport:
    """Run the verification suite at the requested level ('fast' or 'full')."""
    if level not in ("fast", "full"):
        raise ValueError(f"unknown level {level!r}; expected 'fast' or 'full'")
    report = VerificationReport(level=level)
    t_start = time.perf_counter()
    for check_id, description, fn, tier in REGISTERED_CHECKS:
        if tier == "full" and level != "full":
            continue
        t0 = time.perf_counter()
        try:
            passed, detail = fn()
        except Exception as exc:  # a crashed check is a failed check
            passed, detail = False, f"raised {type(exc).__name__}: {exc}"
        report.results.append(
            CheckResult(
                check_id=check_id,
                description=description,
                passed=bool(passed),
                detail=detail,
                seconds=time.perf_counter() - t0,
            )
        )
    report.wall_clock = time.perf_counter() - t_start
    return report
