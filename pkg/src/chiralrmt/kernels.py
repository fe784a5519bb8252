"""Hot numeric kernels with numba-compiled and pure-numpy implementations.

Two kernel families dominate runtime: the normalized three-term recurrence
for the weighted orthonormal Laguerre functions (evaluated at every
quadrature node, to degree ~n/2), and the per-coordinate Metropolis sweeps
of the log-gas sampler (O(n) work per proposed move).

Each kernel exists in two functionally equivalent variants collected in
``NUMPY_IMPLS`` and ``NUMBA_IMPLS``.  The active variant is chosen once at
import time: numba is used when it imports cleanly and the environment
variable ``CHIRALRMT_NO_NUMBA`` is unset (or set to 0/false).  Output is
deterministic for a fixed RNG stream within either backend; the two
backends agree to rounding but are not guaranteed bit-identical because
floating-point summation order differs.

All Laguerre kernels require strictly positive abscissae; argument
validation and the x = 0 limits live in the calling modules.
"""

import math
import os

import numpy as np

__all__ = [
    "backend",
    "phi_sumsq",
    "phi_pairsum",
    "phi_block",
    "log_joint",
    "sweep_block",
    "NUMPY_IMPLS",
    "NUMBA_IMPLS",
    "NUMBA_AVAILABLE",
]


def _numba_requested() -> bool:
    flag = os.environ.get("CHIRALRMT_NO_NUMBA", "").strip().lower()
    return flag in ("", "0", "false", "no")


# ---------------------------------------------------------------------------
# Pure numpy implementations.  The recurrence evaluates the weighted function
#   phi_k(u) = sqrt(k!/Gamma(k+a+1)) u^{a/2} e^{-u/2} L_k^a(u)
# directly, so no intermediate quantity grows beyond the O(1) scale of the
# orthonormal family; raw L_k^a would overflow near k ~ 1000.
# ---------------------------------------------------------------------------


def _phi_sumsq_np(m, alpha, u):
    """sum_{k=0..m} phi_k^alpha(u)^2 for u > 0 elementwise; zeros for m < 0."""
    if m < 0:
        return np.zeros_like(u)
    lg = math.lgamma(alpha + 1.0)
    prev = np.exp(0.5 * alpha * np.log(u) - 0.5 * u - 0.5 * lg)
    acc = prev * prev
    if m == 0:
        return acc
    cur = (alpha + 1.0 - u) / math.sqrt(alpha + 1.0) * prev
    acc = acc + cur * cur
    for k in range(1, m):
        nxt = ((2.0 * k + 1.0 + alpha - u) * cur - math.sqrt(k * (k + alpha)) * prev) / math.sqrt(
            (k + 1.0) * (k + 1.0 + alpha)
        )
        prev = cur
        cur = nxt
        acc = acc + cur * cur
    return acc


def _phi_pairsum_np(m, alpha, u, v):
    """sum_{k=0..m} phi_k^alpha(u) phi_k^alpha(v) elementwise (u, v > 0)."""
    if m < 0:
        return np.zeros_like(u)
    lg = math.lgamma(alpha + 1.0)
    pu = np.exp(0.5 * alpha * np.log(u) - 0.5 * u - 0.5 * lg)
    pv = np.exp(0.5 * alpha * np.log(v) - 0.5 * v - 0.5 * lg)
    acc = pu * pv
    if m == 0:
        return acc
    cu = (alpha + 1.0 - u) / math.sqrt(alpha + 1.0) * pu
    cv = (alpha + 1.0 - v) / math.sqrt(alpha + 1.0) * pv
    acc = acc + cu * cv
    for k in range(1, m):
        c1 = 2.0 * k + 1.0 + alpha
        c2 = math.sqrt(k * (k + alpha))
        c3 = math.sqrt((k + 1.0) * (k + 1.0 + alpha))
        nu = ((c1 - u) * cu - c2 * pu) / c3
        nv = ((c1 - v) * cv - c2 * pv) / c3
        pu, cu = cu, nu
        pv, cv = cv, nv
        acc = acc + cu * cv
    return acc


def _phi_block_np(kmax, alpha, u):
    """(kmax+1, len(u)) array of phi_k^alpha(u) values, u > 0."""
    out = np.empty((kmax + 1, u.shape[0]))
    lg = math.lgamma(alpha + 1.0)
    out[0] = np.exp(0.5 * alpha * np.log(u) - 0.5 * u - 0.5 * lg)
    if kmax == 0:
        return out
    out[1] = (alpha + 1.0 - u) / math.sqrt(alpha + 1.0) * out[0]
    for k in range(1, kmax):
        out[k + 1] = (
            (2.0 * k + 1.0 + alpha - u) * out[k] - math.sqrt(k * (k + alpha)) * out[k - 1]
        ) / math.sqrt((k + 1.0) * (k + 1.0 + alpha))
    return out


def _log_joint_np(x, two_mu):
    """Unnormalized log joint eigenvalue density; -inf on the excluded set."""
    ax = np.abs(x)
    if np.any(ax == 0.0):
        return -math.inf
    val = -float(np.dot(x, x))
    if two_mu != 0.0:
        val += two_mu * float(np.sum(np.log(ax)))
    n = x.shape[0]
    for i in range(n - 1):
        d = np.abs(x[i + 1 :] - x[i])
        if np.any(d == 0.0):
            return -math.inf
        val += 2.0 * float(np.sum(np.log(d)))
    return val


def _sweep_block_np(x, two_mu, step, normals, uniforms):
    """Run normals.shape[0] Metropolis sweeps in place; returns accepted moves.

    One sweep proposes a Gaussian move per coordinate; the acceptance ratio
    touches only the O(n) interaction terms of the moved coordinate.
    """
    n = x.shape[0]
    accepts = 0
    for s in range(normals.shape[0]):
        zrow = normals[s]
        urow = uniforms[s]
        for i in range(n):
            xi = x[i]
            xp = xi + step * zrow[i]
            if xp == xi:
                accepts += 1
                continue
            if xp == 0.0:
                continue
            dn = np.abs(x - xp)
            dn[i] = 1.0
            if np.any(dn == 0.0):
                continue
            do = np.abs(x - xi)
            do[i] = 1.0
            d = (
                xi * xi
                - xp * xp
                + two_mu * (math.log(abs(xp)) - math.log(abs(xi)))
                + 2.0 * (float(np.sum(np.log(dn))) - float(np.sum(np.log(do))))
            )
            if d >= 0.0 or urow[i] < math.exp(d):
                x[i] = xp
                accepts += 1
    return accepts


NUMPY_IMPLS = {
    "phi_sumsq": _phi_sumsq_np,
    "phi_pairsum": _phi_pairsum_np,
    "phi_block": _phi_block_np,
    "log_joint": _log_joint_np,
    "sweep_block": _sweep_block_np,
}


# ---------------------------------------------------------------------------
# Numba twins.  Compiled lazily on first call; cache=True persists the
# compilation across processes.
# ---------------------------------------------------------------------------

NUMBA_AVAILABLE = False
NUMBA_IMPLS = None

try:
    from numba import njit

    NUMBA_AVAILABLE = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    njit = None

if NUMBA_AVAILABLE:

    @njit(cache=True, nogil=True)
    def _recurrence_coeffs(m, alpha):
        # hoisted k-dependent coefficients; the inner element loop must not
        # recompute square roots
        c1 = np.empty(m)
        c2 = np.empty(m)
        c3 = np.empty(m)
        for k in range(1, m):
            c1[k] = 2.0 * k + 1.0 + alpha
            c2[k] = math.sqrt(k * (k + alpha))
            c3[k] = math.sqrt((k + 1.0) * (k + 1.0 + alpha))
        return c1, c2, c3

    @njit(cache=True, nogil=True)
    def _phi_sumsq_nb(m, alpha, u):
        # k-outer / element-inner so the element loops vectorize; the serial
        # dependency is only along k
        n = u.shape[0]
        acc = np.empty(n)
        if m < 0:
            for i in range(n):
                acc[i] = 0.0
            return acc
        lg = math.lgamma(alpha + 1.0)
        d0 = math.sqrt(alpha + 1.0)
        c1, c2, c3 = _recurrence_coeffs(m, alpha)
        prev = np.empty(n)
        cur = np.empty(n)
        for i in range(n):
            prev[i] = math.exp(0.5 * alpha * math.log(u[i]) - 0.5 * u[i] - 0.5 * lg)
            acc[i] = prev[i] * prev[i]
        if m >= 1:
            for i in range(n):
                cur[i] = (alpha + 1.0 - u[i]) / d0 * prev[i]
                acc[i] += cur[i] * cur[i]
            for k in range(1, m):
                c1k, c2k, c3k = c1[k], c2[k], c3[k]
                for i in range(n):
                    nxt = ((c1k - u[i]) * cur[i] - c2k * prev[i]) / c3k
                    prev[i] = cur[i]
                    cur[i] = nxt
                    acc[i] += nxt * nxt
        return acc

    @njit(cache=True, nogil=True)
    def _phi_pairsum_nb(m, alpha, u, v):
        n = u.shape[0]
        acc = np.empty(n)
        if m < 0:
            for i in range(n):
                acc[i] = 0.0
            return acc
        lg = math.lgamma(alpha + 1.0)
        d0 = math.sqrt(alpha + 1.0)
        c1, c2, c3 = _recurrence_coeffs(m, alpha)
        pu = np.empty(n)
        pv = np.empty(n)
        cu = np.empty(n)
        cv = np.empty(n)
        for i in range(n):
            pu[i] = math.exp(0.5 * alpha * math.log(u[i]) - 0.5 * u[i] - 0.5 * lg)
            pv[i] = math.exp(0.5 * alpha * math.log(v[i]) - 0.5 * v[i] - 0.5 * lg)
            acc[i] = pu[i] * pv[i]
        if m >= 1:
            for i in range(n):
                cu[i] = (alpha + 1.0 - u[i]) / d0 * pu[i]
                cv[i] = (alpha + 1.0 - v[i]) / d0 * pv[i]
                acc[i] += cu[i] * cv[i]
            for k in range(1, m):
                c1k, c2k, c3k = c1[k], c2[k], c3[k]
                for i in range(n):
                    nu = ((c1k - u[i]) * cu[i] - c2k * pu[i]) / c3k
                    nv = ((c1k - v[i]) * cv[i] - c2k * pv[i]) / c3k
                    pu[i] = cu[i]
                    cu[i] = nu
                    pv[i] = cv[i]
                    cv[i] = nv
                    acc[i] += nu * nv
        return acc

    @njit(cache=True, nogil=True)
    def _phi_block_nb(kmax, alpha, u):
        n = u.shape[0]
        out = np.empty((kmax + 1, n))
        lg = math.lgamma(alpha + 1.0)
        d0 = math.sqrt(alpha + 1.0)
        c1, c2, c3 = _recurrence_coeffs(kmax, alpha)
        for i in range(n):
            out[0, i] = math.exp(0.5 * alpha * math.log(u[i]) - 0.5 * u[i] - 0.5 * lg)
        if kmax >= 1:
            for i in range(n):
                out[1, i] = (alpha + 1.0 - u[i]) / d0 * out[0, i]
            for k in range(1, kmax):
                c1k, c2k, c3k = c1[k], c2[k], c3[k]
                for i in range(n):
                    out[k + 1, i] = ((c1k - u[i]) * out[k, i] - c2k * out[k - 1, i]) / c3k
        return out

    @njit(cache=True, nogil=True)
    def _log_joint_nb(x, two_mu):
        n = x.shape[0]
        val = 0.0
        for i in range(n):
            if x[i] == 0.0:
                return -math.inf
            val += -x[i] * x[i] + two_mu * math.log(abs(x[i]))
        for i in range(n - 1):
            for j in range(i + 1, n):
                d = x[i] - x[j]
                if d == 0.0:
                    return -math.inf
                val += 2.0 * math.log(abs(d))
        return val

    @njit(cache=True, nogil=True)
    def _sweep_block_nb(x, two_mu, step, normals, uniforms):
        n = x.shape[0]
        accepts = 0
        for s in range(normals.shape[0]):
            for i in range(n):
                xi = x[i]
                xp = xi + step * normals[s, i]
                if xp == xi:
                    accepts += 1
                    continue
                if xp == 0.0:
                    continue
                ok = True
                acc = 0.0
                for j in range(n):
                    if j == i:
                        continue
                    d = xp - x[j]
                    if d == 0.0:
                        ok = False
                        break
                    acc += math.log(abs(d)) - math.log(abs(xi - x[j]))
                if not ok:
                    continue
                delta = (
                    xi * xi
                    - xp * xp
                    + two_mu * (math.log(abs(xp)) - math.log(abs(xi)))
                    + 2.0 * acc
                )
                if delta >= 0.0 or uniforms[s, i] < math.exp(delta):
                    x[i] = xp
                    accepts += 1
        return accepts

    NUMBA_IMPLS = {
        "phi_sumsq": _phi_sumsq_nb,
        "phi_pairsum": _phi_pairsum_nb,
        "phi_block": _phi_block_nb,
        "log_joint": _log_joint_nb,
        "sweep_block": _sweep_block_nb,
    }


_USE_NUMBA = NUMBA_AVAILABLE and _numba_requested()
_ACTIVE = NUMBA_IMPLS if _USE_NUMBA else NUMPY_IMPLS

phi_sumsq = _ACTIVE["phi_sumsq"]
phi_pairsum = _ACTIVE["phi_pairsum"]
phi_block = _ACTIVE["phi_block"]
log_joint = _ACTIVE["log_joint"]
sweep_block = _ACTIVE["sweep_block"]


def backend() -> str:
    """Name of the kernel backend selected at import time."""
    return "numba" if _USE_NUMBA else "numpy"
