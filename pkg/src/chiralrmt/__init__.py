"""Numerics for the determinant-weighted Gaussian Hermitian ensemble
|det x|^(2 mu) e^(-tr x^2): exact finite-n eigenvalue densities and their
Laplace transforms, the deformed-semicircle limit law, and Metropolis
sampling of the joint eigenvalue density with empirical convergence and
concentration checks.
"""

__version__ = "0.1.0"

from .exceptions import DomainError, QuadratureError
from .finite_spectrum import (
    DensityCurve,
    EnsembleParams,
    density,
    density_curve,
    density_mass_quadrature,
    kernel,
    laplace_tau_quadrature,
    laplace_tau_scaled,
    moment,
    partial_laplace,
)
from .kernels import backend as kernel_backend
from .limit_law import (
    LimitLaw,
    bessel_integral_identity,
    endpoints,
    g_density,
    limit_cdf,
    limit_density,
    limit_laplace,
    limit_quantile,
)
from .sampler import (
    ConcentrationResult,
    EmpiricalCdf,
    ExtremeStats,
    SamplerConfig,
    SpectrumDraw,
    b_n_value,
    concentration_check,
    empirical_cdf,
    extreme_stats,
    ks_distance,
    log_joint_density,
    mcmc_sample,
    read_draw_archive,
    write_draw_archive,
)
from .specfun import (
    HermiteOrder,
    LaguerreOrder,
    bessel_F,
    hermite_fn,
    hyp2f1_terminating,
    laguerre_fn,
    laguerre_fn_sequence,
    log_gamma,
)
from .verify import VerificationReport, run_verification

__all__ = [
    "__version__",
    "DomainError",
    "QuadratureError",
    "EnsembleParams",
    "DensityCurve",
    "density",
    "kernel",
    "moment",
    "partial_laplace",
    "laplace_tau_scaled",
    "density_curve",
    "density_mass_quadrature",
    "laplace_tau_quadrature",
    "LimitLaw",
    "endpoints",
    "limit_density",
    "limit_cdf",
    "limit_quantile",
    "limit_laplace",
    "g_density",
    "bessel_integral_identity",
    "SamplerConfig",
    "SpectrumDraw",
    "EmpiricalCdf",
    "ExtremeStats",
    "ConcentrationResult",
    "log_joint_density",
    "mcmc_sample",
    "empirical_cdf",
    "ks_distance",
    "b_n_value",
    "extreme_stats",
    "concentration_check",
    "write_draw_archive",
    "read_draw_archive",
    "LaguerreOrder",
    "HermiteOrder",
    "log_gamma",
    "laguerre_fn",
    "laguerre_fn_sequence",
    "hermite_fn",
    "bessel_F",
    "hyp2f1_terminating",
    "kernel_backend",
    "VerificationReport",
    "run_verification",
]
