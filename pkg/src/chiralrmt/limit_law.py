"""The limiting spectral law: a deformed semicircle on [-b,-a] U [a,b].

For c = lim mu_n / n >= 0 the scaled eigenvalue density converges to

    f_c(t) = sqrt((t^2 - a^2)(b^2 - t^2)) / (pi |t|),
    a^2, b^2 = 1 + c -/+ sqrt(1 + 2c),

which degenerates to the semicircle of radius sqrt(2) at c = 0.  The squared
law g_c(t) = sqrt((t - a^2)(b^2 - t)) / pi on [a^2, b^2] carries the Laplace
transform; its closed form uses the entire series
F(z) = sum z^(2k)/(k!(k+1)!), i.e. a Bessel-type function of z^2.  CDF values
are obtained by adaptive quadrature after the trigonometric substitution
u = (a^2+b^2)/2 + R sin(theta), which removes both square-root endpoints and
the 1/t pole at c = 0.
"""

import cmath
import math
from dataclasses import dataclass, field

import numpy as np

from .exceptions import DomainError
from .quadrature import gauss_legendre
from .specfun import bessel_F

__all__ = [
    "LimitLaw",
    "endpoints",
    "limit_density",
    "limit_cdf",
    "limit_quantile",
    "limit_laplace",
    "g_density",
    "bessel_integral_identity",
]


def endpoints(c: float) -> tuple[float, float]:
    """Support endpoints (a, b) of the limit law for c >= 0.

    a^2 = 1 + c - sqrt(1 + 2c) cancels catastrophically for small c; the
    conjugate form a^2 = c^2 / b^2, i.e. a = c/b, is exact.
    """
    if c < 0.0:
        raise DomainError(f"the limit ratio c must be nonnegative, got {c}")
    b = math.sqrt(1.0 + c + math.sqrt(1.0 + 2.0 * c))
    return c / b, b


@dataclass(frozen=True)
class LimitLaw:
    """Limit ratio c with the derived support endpoints a < b.

    Satisfies a*b = c and a^2 + b^2 = 2(1+c) exactly.
    """

    c: float
    a: float = field(init=False)
    b: float = field(init=False)

    def __post_init__(self):
        a, b = endpoints(self.c)
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)


def limit_density(law: LimitLaw, t) -> float | np.ndarray:
    """Density f_c at t (scalar or array); zero off the support and at its edges."""
    arr = np.asarray(t, dtype=float)
    scalar = arr.ndim == 0
    arr = np.atleast_1d(arr)
    a2 = law.a * law.a
    b2 = law.b * law.b
    t2 = arr * arr
    out = np.zeros(arr.shape)
    if law.a == 0.0:
        inside = t2 < b2
        out[inside] = np.sqrt(b2 - t2[inside]) / math.pi
    else:
        inside = (t2 > a2) & (t2 < b2)
        out[inside] = np.sqrt((t2[inside] - a2) * (b2 - t2[inside])) / (
            math.pi * np.abs(arr[inside])
        )
    return float(out[0]) if scalar else out


def _half_mass(law: LimitLaw, x: float, npts: int = 96) -> float:
    """integral of f_c over (a, min(x, b)] for x >= 0, via the sin substitution."""
    if x <= law.a:
        return 0.0
    center = 1.0 + law.c
    radius = math.sqrt(1.0 + 2.0 * law.c)
    arg = (min(x, law.b) ** 2 - center) / radius
    theta = math.asin(min(1.0, max(-1.0, arg)))
    hw = 0.5 * (theta + 0.5 * math.pi)
    xs, ws = gauss_legendre(npts)
    th = -0.5 * math.pi + hw * (xs + 1.0)
    if law.a == 0.0:
        # center == radius: cos^2/(1+sin) simplifies, removing the 0/0 endpoint
        vals = radius / (2.0 * math.pi) * (1.0 - np.sin(th))
    else:
        u = center + radius * np.sin(th)
        vals = (radius * np.cos(th)) ** 2 / (2.0 * math.pi * u)
    return hw * float(np.dot(ws, vals))


def limit_cdf(law: LimitLaw, t) -> float | np.ndarray:
    """CDF of the limit law, by adaptive quadrature of the density.

    The node count is doubled until two estimates agree to 1e-12, well inside
    the 1e-10 contract (the substituted integrand is analytic, so the first
    doubling already reaches rounding level).
    """
    arr = np.asarray(t, dtype=float)
    scalar = arr.ndim == 0
    out = np.empty(np.atleast_1d(arr).shape)
    for i, ti in enumerate(np.atleast_1d(arr)):
        if ti <= -law.b:
            out[i] = 0.0
        elif ti >= law.b:
            out[i] = 1.0
        elif ti == 0.0:
            out[i] = 0.5
        else:
            out[i] = 0.5 + math.copysign(_half_mass_adaptive(law, abs(float(ti))), ti)
    return float(out[0]) if scalar else out


def _half_mass_adaptive(law: LimitLaw, x: float, tol: float = 1e-12) -> float:
    prev = _half_mass(law, x, npts=48)
    for npts in (96, 192, 384):
        cur = _half_mass(law, x, npts=npts)
        if abs(cur - prev) <= tol:
            return cur
        prev = cur
    return prev


def limit_quantile(law: LimitLaw, q: float) -> float:
    """Inverse CDF by bisection on [-b, b]."""
    if not 0.0 < q < 1.0:
        raise DomainError(f"quantile level must lie in (0, 1), got {q}")
    lo, hi = -law.b, law.b
    for _ in range(80):
        mid = 0.5 * (lo + hi)
        if limit_cdf(law, mid) < q:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def limit_laplace(law: LimitLaw, s: complex) -> complex:
    """Laplace transform of the squared-spectrum limit g_c (entire in s)."""
    s = complex(s)
    return (0.5 + law.c) * cmath.exp((1.0 + law.c) * s) * bessel_F(
        0.5 * s * math.sqrt(1.0 + 2.0 * law.c)
    )


def g_density(law: LimitLaw, t) -> float | np.ndarray:
    """Density g_c(t) = sqrt((t - a^2)(b^2 - t))/pi on [a^2, b^2], else 0.

    Related to f_c by |t| f_c(t) = g_c(t^2) on the support.
    """
    arr = np.asarray(t, dtype=float)
    scalar = arr.ndim == 0
    arr = np.atleast_1d(arr)
    a2 = law.a * law.a
    b2 = law.b * law.b
    out = np.zeros(arr.shape)
    inside = (arr > a2) & (arr < b2)
    out[inside] = np.sqrt((arr[inside] - a2) * (b2 - arr[inside])) / math.pi
    return float(out[0]) if scalar else out


def bessel_integral_identity(alpha: float, beta: float, s: complex) -> tuple[complex, complex]:
    """Both sides of the semicircle Laplace identity on [alpha, beta].

    lhs = (1/pi) int_alpha^beta e^{st} sqrt((t-alpha)(beta-t)) dt, by
    quadrature after t = mid + hw sin(theta); rhs is the closed form
    (1/2) hw^2 e^{s mid} F(hw s / 2) with hw = (beta-alpha)/2.  Both values
    are returned so the identity itself is checkable.
    """
    if not alpha < beta:
        raise DomainError(f"need alpha < beta, got ({alpha}, {beta})")
    s = complex(s)
    mid = 0.5 * (alpha + beta)
    hw = 0.5 * (beta - alpha)

    def lhs_at(npts: int) -> complex:
        xs, ws = gauss_legendre(npts)
        th = 0.5 * math.pi * xs
        t = mid + hw * np.sin(th)
        vals = np.exp(s * t) * (hw * np.cos(th)) ** 2 * (0.5 * math.pi)
        return complex(np.dot(ws, vals)) / math.pi

    prev = lhs_at(48)
    for npts in (96, 192, 384):
        cur = lhs_at(npts)
        if abs(cur - prev) <= 1e-13 * max(1.0, abs(cur)):
            break
        prev = cur
    lhs = cur
    rhs = 0.5 * hw * hw * cmath.exp(mid * s) * bessel_F(0.5 * hw * s)
    return lhs, rhs
