"""Orthonormal generalized Laguerre and Hermite functions and the two
terminating series used by the spectral closed forms.

The Laguerre family phi_k^a(x) = sqrt(k!/Gamma(k+a+1)) x^{a/2} e^{-x/2} L_k^a(x)
is evaluated through the normalized recurrence applied to the weighted
functions themselves, which keeps every intermediate on the O(1) scale of an
orthonormal family.  The Hermite family follows from the parity split

    psi_{2m}^mu(x)   = (-1)^m |x|^{1/2} phi_m^{mu-1/2}(x^2)
    psi_{2m+1}^mu(x) = (-1)^m sign(x) |x|^{1/2} phi_m^{mu+1/2}(x^2)
"""

import math
from dataclasses import dataclass

import numpy as np

from . import kernels
from .exceptions import DomainError

__all__ = [
    "LaguerreOrder",
    "HermiteOrder",
    "log_gamma",
    "laguerre_fn",
    "laguerre_fn_sequence",
    "hermite_fn",
    "bessel_F",
    "hyp2f1_terminating",
]

_SERIES_RTOL = 1e-17  # term/partial-sum cutoff, leaves headroom under 1e-14


@dataclass(frozen=True)
class LaguerreOrder:
    """Degree k >= 0 and parameter alpha > -1 of a Laguerre function."""

    k: int
    alpha: float

    def __post_init__(self):
        if int(self.k) != self.k or self.k < 0:
            raise DomainError(f"degree must be a nonnegative integer, got {self.k}")
        if not self.alpha > -1.0:
            raise DomainError(f"Laguerre parameter must exceed -1, got {self.alpha}")


@dataclass(frozen=True)
class HermiteOrder:
    """Degree k >= 0 and weight exponent mu > -1/2 of a Hermite function."""

    k: int
    mu: float

    def __post_init__(self):
        if int(self.k) != self.k or self.k < 0:
            raise DomainError(f"degree must be a nonnegative integer, got {self.k}")
        if not self.mu > -0.5:
            raise DomainError(f"weight exponent must exceed -1/2, got {self.mu}")


def log_gamma(x: float) -> float:
    """Natural log of Gamma(x) for x > 0."""
    if not x > 0.0:
        raise DomainError(f"log_gamma requires x > 0, got {x}")
    return math.lgamma(x)


def _as_positive_array(x) -> np.ndarray:
    return np.ascontiguousarray(np.asarray(x, dtype=float))


def laguerre_fn(order: LaguerreOrder, x: float) -> float:
    """Orthonormal weighted Laguerre function phi_k^alpha(x), x >= 0.

    At x = 0 the function diverges for alpha < 0 (reported as a domain
    error); for alpha = 0 it equals 1 for every degree and for alpha > 0
    it vanishes.
    """
    k, alpha = order.k, order.alpha
    if math.isnan(x) or x < 0.0:
        raise DomainError(f"Laguerre functions are defined on x >= 0, got {x}")
    if math.isinf(x):
        return 0.0  # e^{-x/2} decay wins
    if x == 0.0:
        if alpha < 0.0:
            raise DomainError("phi diverges like x^(alpha/2) at x = 0 for alpha < 0")
        return 1.0 if alpha == 0.0 else 0.0
    block = kernels.phi_block(k, alpha, _as_positive_array([x]))
    return float(block[k, 0])


def laguerre_fn_sequence(kmax: int, alpha: float, x) -> np.ndarray:
    """[phi_0^alpha(x), ..., phi_kmax^alpha(x)] via the weighted recurrence.

    Scalar ``x`` yields a (kmax+1,) vector; an array yields a
    (kmax+1, len(x)) block.  O(kmax) per abscissa and overflow-safe for
    x up to ~10*kmax.
    """
    order = LaguerreOrder(kmax, alpha)  # validates
    raw = np.asarray(x, dtype=float)
    scalar = raw.ndim == 0
    arr = np.ascontiguousarray(np.atleast_1d(raw))
    if np.any(arr < 0.0):
        raise DomainError("Laguerre functions are defined on x >= 0")
    if np.any(arr == 0.0):
        if alpha < 0.0:
            raise DomainError("phi diverges like x^(alpha/2) at x = 0 for alpha < 0")
        out = np.empty((kmax + 1, arr.size))
        zero = arr == 0.0
        out[:, zero] = 1.0 if alpha == 0.0 else 0.0
        if np.any(~zero):
            out[:, ~zero] = kernels.phi_block(kmax, alpha, np.ascontiguousarray(arr[~zero]))
    else:
        out = kernels.phi_block(order.k, alpha, arr)
    return out[:, 0] if scalar else out


def _hermite_even_at_zero(m: int, mu: float) -> float:
    # limit of |x|^mu * (bounded) as x -> 0
    if mu > 0.0:
        return 0.0
    sign = -1.0 if m % 2 else 1.0
    if mu < 0.0:
        return sign * math.inf
    # mu = 0: (-1)^m sqrt(Gamma(m+1/2)/m!) / sqrt(pi)
    return sign * math.exp(0.5 * (math.lgamma(m + 0.5) - math.lgamma(m + 1.0)) - 0.5 * math.log(math.pi))


def _hermite_near_zero(m: int, mu: float, x: float, odd: bool) -> float:
    # |x| so small that x^2 underflows: psi_{2m} ~ (-1)^m |x|^mu w_m and
    # psi_{2m+1} ~ (-1)^m sign(x) |x|^(mu+1) w'_m, with the w's from L_m(0)
    alpha = mu + 0.5 if odd else mu - 0.5
    exponent = mu + 1.0 if odd else mu
    log_w = 0.5 * (math.lgamma(m + alpha + 1.0) - math.lgamma(m + 1.0)) - math.lgamma(alpha + 1.0)
    sign = -1.0 if m % 2 else 1.0
    if odd:
        sign *= math.copysign(1.0, x)
    return sign * math.exp(exponent * math.log(abs(x)) + log_w)


def hermite_fn(order: HermiteOrder, x: float) -> float:
    """Orthonormal generalized Hermite function psi_k^mu(x) on the real line."""
    k, mu = order.k, order.mu
    m = k // 2
    odd = k % 2 == 1
    if x == 0.0:
        return 0.0 if odd else _hermite_even_at_zero(m, mu)
    u = x * x
    if u == 0.0:
        return _hermite_near_zero(m, mu, x, odd)
    phi = laguerre_fn(LaguerreOrder(m, mu + 0.5 if odd else mu - 0.5), u)
    sign = -1.0 if m % 2 else 1.0
    if odd:
        sign *= math.copysign(1.0, x)
    return sign * math.sqrt(abs(x)) * phi


def bessel_F(z: complex) -> complex:
    """Entire series F(z) = sum_k z^(2k) / (k! (k+1)!)."""
    z = complex(z)
    z2 = z * z
    term = 1.0 + 0.0j
    acc = 1.0 + 0.0j
    k = 0
    while True:
        term = term * z2 / ((k + 1.0) * (k + 2.0))
        acc += term
        k += 1
        if abs(term) <= _SERIES_RTOL * abs(acc):
            return acc
        if k > 1000:  # unreachable for any representable argument of interest
            raise RuntimeError("bessel_F series did not terminate")


def hyp2f1_terminating(m: int, b: float, z: complex) -> complex:
    """Terminating Gauss series 2F1(-m, b, 2; z), a degree-m polynomial in z.

    Summed with Kahan compensation; the Pochhammer ratios are built
    iteratively so no factorial is ever formed.
    """
    if int(m) != m or m < 0:
        raise DomainError(f"series order must be a nonnegative integer, got {m}")
    z = complex(z)
    coef = 1.0 + 0.0j
    acc = 0.0 + 0.0j
    comp = 0.0 + 0.0j
    for j in range(m + 1):
        y = coef - comp
        t = acc + y
        comp = (t - acc) - y
        acc = t
        coef = coef * (j - m) * (b + j) / ((2.0 + j) * (j + 1.0)) * z
    return acc
