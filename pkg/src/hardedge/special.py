"""Complete elliptic integrals and the hard-edge large-deviation rate function.

Conventions
-----------
Elliptic integrals use the parameter convention

.. math::

    K(m) = \\int_0^{\\pi/2} \\frac{dx}{\\sqrt{1 - m\\sin^2 x}}, \\qquad
    E(m) = \\int_0^{\\pi/2} \\sqrt{1 - m\\sin^2 x}\\,dx, \\qquad m < 1,

and :math:`\\mathcal H(m) = (1-m)K(m) - E(m)`.  The density map is

.. math::

    \\gamma(\\nu) = \\begin{cases}
      \\frac{\\mathcal H(\\nu)}{8}\\int_{-\\infty}^{\\nu}\\mathcal H^{-2}(x)\\,dx, & \\nu < 0,\\\\
      1/(2\\pi), & \\nu = 0,\\\\
      \\frac{\\mathcal H(\\nu)}{8}\\int_{1}^{\\nu}\\mathcal H^{-2}(x)\\,dx, & 0 < \\nu < 1,\\\\
      0, & \\nu = 1,
    \\end{cases}

and the rate function is :math:`I(\\rho) = \\nu/2 + \\rho\\,\\mathcal H(\\nu)` with
:math:`\\nu = \\gamma^{-1}(\\rho/4)`.

Two independent evaluations of :math:`\\gamma` are provided.  The default
(``method="gauss"``) uses an arithmetic-geometric-mean evaluation of K and E,
a power series for :math:`\\mathcal H` near 0 and composite Gauss–Legendre
quadrature after changes of variable that make every integrand smooth and every
interval finite.  ``method="tanh-sinh"`` integrates in extended precision with
:mod:`mpmath`'s elliptic functions and double-exponential quadrature.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import mpmath
import numpy as np
from scipy import integrate, optimize

from .errors import AccuracyError, DomainError

INV_TWO_PI = 1.0 / (2.0 * math.pi)
SERIES_RADIUS = 0.25
GAMMA_TOL = 1e-8

_C2 = 16.0 / math.pi ** 2  # H^{-2} ~ C2/x^2 - C1/x near 0
_C1 = 4.0 / math.pi ** 2
_LN4_M1 = math.log(4.0) - 1.0
_W_ASYMPTOTIC = 60.0
_U_TAIL = 45.0


# --------------------------------------------------------------------------
# K, E, H


def _agm_ke(m, m1):
    """K and E for ``0 <= m < 1`` given ``m`` and its complement ``m1 = 1 - m``."""
    a = np.ones_like(m1)
    b = np.sqrt(m1)
    acc = 0.5 * m
    # first gap from m directly; later gaps by c' = c^2 / (2 (a + b)), free of a - b cancellation
    c = 0.5 * m / (1.0 + b)
    p = 1.0
    for _ in range(64):
        a, b = 0.5 * (a + b), np.sqrt(a * b)
        acc = acc + p * c * c
        p *= 2.0
        if np.all(c <= 1e-17 * a):
            break
        c = 0.5 * c * c / (a + b)
    K = 0.5 * np.pi / a
    return K, K * (1.0 - acc)


def _ke(m, m1=None):
    m = np.asarray(m, dtype=float)
    m1 = 1.0 - m if m1 is None else np.asarray(m1, dtype=float)
    m, m1 = np.broadcast_arrays(m, m1)
    K = np.empty(m.shape)
    E = np.empty(m.shape)
    pos = m >= 0
    if pos.any():
        K[pos], E[pos] = _agm_ke(m[pos], m1[pos])
    neg = ~pos
    if neg.any():
        # imaginary-modulus transformation onto (0, 1)
        q1 = 1.0 / m1[neg]
        kk, ee = _agm_ke(-m[neg] * q1, q1)
        r = np.sqrt(q1)
        K[neg], E[neg] = kk * r, ee / r
    return K, E


def _quad_ke(m):
    m = np.atleast_1d(np.asarray(m, dtype=float))
    K = np.array([integrate.quad(lambda x, v=v: 1.0 / math.sqrt(1.0 - v * math.sin(x) ** 2), 0, math.pi / 2,
                                 epsabs=1e-14, epsrel=1e-13, limit=200)[0] for v in m.ravel()])
    E = np.array([integrate.quad(lambda x, v=v: math.sqrt(1.0 - v * math.sin(x) ** 2), 0, math.pi / 2,
                                 epsabs=1e-14, epsrel=1e-13, limit=200)[0] for v in m.ravel()])
    return K.reshape(m.shape), E.reshape(m.shape)


def _out(x, scalar):
    return float(x) if scalar else x


def _check_method(method):
    if method not in ("agm", "quad"):
        raise ValueError(f"unknown method {method!r}")


def ellip_K(m, method: str = "agm"):
    """Complete elliptic integral of the first kind, ``K(m)`` for ``m < 1``.

    Parameters
    ----------
    m : float or array_like
        Parameter; negative values are allowed.
    method : {"agm", "quad"}
        Arithmetic-geometric mean (default) or adaptive quadrature of the
        defining integral.

    Raises
    ------
    DomainError
        If any ``m >= 1``.
    """
    _check_method(method)
    arr = np.asarray(m, dtype=float)
    if np.any(~(arr < 1)):
        raise DomainError("K(m) requires m < 1")
    K, _ = _ke(arr) if method == "agm" else _quad_ke(arr)
    return _out(K.reshape(arr.shape), arr.ndim == 0)


def ellip_E(m, method: str = "agm"):
    """Complete elliptic integral of the second kind, ``E(m)`` for ``m <= 1``.

    ``E(1) = 1`` by continuity.  See :func:`ellip_K` for ``method``.
    """
    _check_method(method)
    arr = np.asarray(m, dtype=float)
    if np.any(~(arr <= 1)):
        raise DomainError("E(m) requires m <= 1")
    one = arr == 1
    safe = np.where(one, 0.0, arr)
    _, E = _ke(safe) if method == "agm" else _quad_ke(safe)
    E = np.where(one, 1.0, E.reshape(arr.shape))
    return _out(E, arr.ndim == 0)


@lru_cache(maxsize=None)
def _h_series(n_terms: int = 64):
    """Coefficients ``s_k`` with ``H(m) = -(pi m / 4) sum_k s_k m^k``."""
    a = np.empty(n_terms + 2)
    e = np.empty(n_terms + 2)
    a[0] = e[0] = 1.0
    for n in range(1, n_terms + 2):
        r = (n - 0.5) / n
        a[n] = a[n - 1] * r * r
        e[n] = e[n - 1] * (n - 1.5) * (n - 0.5) / (n * n)
    h = a[1:] - a[:-1] - e[1:]  # coefficient of m^n in (2/pi) H, n >= 1
    return -2.0 * h


def _series_s(x):
    """``S(x) = H(x) / (-pi x / 4)`` and ``D2 = S - 1 - x/8`` for ``|x| <= 1/4``."""
    s = _h_series()
    x = np.asarray(x, dtype=float)
    d2 = np.zeros_like(x)
    for c in s[:1:-1]:
        d2 = d2 * x + c
    d2 = d2 * x * x
    return 1.0 + 0.125 * x + d2, d2


def _H_core(m, m1=None):
    m = np.asarray(m, dtype=float)
    m1 = 1.0 - m if m1 is None else np.asarray(m1, dtype=float)
    small = np.abs(m) <= SERIES_RADIUS
    H = np.empty(m.shape)
    if small.any():
        S, _ = _series_s(m[small])
        H[small] = -0.25 * np.pi * m[small] * S
    big = ~small
    if big.any():
        mb, m1b = m[big], m1[big]
        one = m1b == 0
        K, E = _ke(np.where(one, 0.0, mb), np.where(one, 1.0, m1b))
        H[big] = np.where(one, -1.0, m1b * K - E)
    return H


def script_H(m):
    """``H(m) = (1 - m) K(m) - E(m)`` for ``m <= 1``, with ``H(1) = -1``.

    Near ``m = 0`` the two terms cancel to ``-pi m / 4``; for ``|m| <= 1/4`` a
    power series is summed instead of forming the difference.
    """
    arr = np.asarray(m, dtype=float)
    if np.any(~(arr <= 1)):
        raise DomainError("H(m) requires m <= 1")
    return _out(_H_core(arr), arr.ndim == 0)


@dataclass(frozen=True)
class EllipticValue:
    """``K``, ``E`` and ``H = (1 - m) K - E`` at one parameter ``m < 1``."""

    m: float
    K: float
    E: float
    H: float


def elliptic_value(m: float) -> EllipticValue:
    K = ellip_K(m)
    E = ellip_E(m)
    return EllipticValue(float(m), K, E, (1.0 - m) * K - E)


# --------------------------------------------------------------------------
# gamma, Gauss–Legendre route


@lru_cache(maxsize=None)
def _gl_nodes(order):
    return np.polynomial.legendre.leggauss(order)


def _gl(f, edges, order):
    x0, w0 = _gl_nodes(order)
    total = 0.0
    for lo, hi in zip(edges[:-1], edges[1:]):
        if hi <= lo:
            continue
        half, mid = 0.5 * (hi - lo), 0.5 * (hi + lo)
        total += half * float(np.dot(w0, f(mid + half * x0)))
    return total


def _edges(lo, hi, interior):
    return [lo] + [p for p in interior if lo < p < hi] + [hi]


def _remainder(x):
    """``H^{-2}(x) - C2/x^2 + C1/x`` for ``|x| <= 1/4``, free of cancellation."""
    S, d2 = _series_s(x)
    d = S - 1.0
    q = d / x
    return _C2 * (-2.0 * d2 / (x * x) - q * q + 0.5 * q + 0.25 * d * q) / (S * S)


def _upper_integrand(u):
    # x = 1 - e^{-u}: int_x^1 H^{-2} = int e^{-u} H^{-2} du
    m1 = np.exp(-u)
    H = _H_core(-np.expm1(-u), m1)
    return m1 / (H * H)


def _upper_integral(nu, order):
    """``int_nu^1 H^{-2}(x) dx`` for ``1/4 <= nu < 1``."""
    u0 = -math.log1p(-nu)
    top = max(_U_TAIL, u0 + 40.0)
    edges = _edges(u0, top, [0.5, 1, 2, 3, 5, 8, 12, 17, 23, 30, 37, 45, 55, 65, 75])
    return _gl(_upper_integrand, edges, order)


def _k_minus_e(w):
    """``K(mu) - E(mu)`` at ``mu = 1 - e^{-w}``."""
    w = np.asarray(w, dtype=float)
    out = _LN4_M1 + 0.5 * w
    near = w <= _W_ASYMPTOTIC
    if near.any():
        m1 = np.exp(-w[near])
        K, E = _ke(-np.expm1(-w[near]), m1)
        out[near] = K - E
    return out


def _lower_integrand(s):
    # s = 1/w, w = log(1 - x): int_{-inf}^x H^{-2} = int ds / (s (K - E))^2
    d = s * _k_minus_e(1.0 / s)
    return 1.0 / (d * d)


def _lower_integral(nu, order):
    """``int_{-inf}^nu H^{-2}(x) dx`` for ``nu <= -1/4``."""
    top = 1.0 / math.log1p(-nu)
    edges = _edges(0.0, top, [0.05, 0.1, 0.2, 0.3, 0.5, 0.75, 1.0, 1.5, 2.0, 3.0, 4.0])
    return _gl(_lower_integrand, edges, order)


@lru_cache(maxsize=None)
def _anchor_upper(order):
    return _upper_integral(SERIES_RADIUS, order)


@lru_cache(maxsize=None)
def _anchor_lower(order):
    return _lower_integral(-SERIES_RADIUS, order)


def _gamma_gauss(nu, order):
    if nu >= SERIES_RADIUS:
        return -float(_H_core(np.array(nu))) * _upper_integral(nu, order) / 8.0
    if nu <= -SERIES_RADIUS:
        w0 = math.log1p(-nu)
        H = math.exp(0.5 * w0) * float(_k_minus_e(np.array([w0]))[0])
        return H * _lower_integral(nu, order) / 8.0
    # near zero: gamma = (pi S / 32) * (nu * integral), with the 1/nu pole removed analytically
    S = float(_series_s(np.array(nu))[0])
    lo, hi = (nu, SERIES_RADIUS) if nu > 0 else (-SERIES_RADIUS, nu)
    r = _gl(_remainder, [lo, hi], order)
    a = abs(nu)
    if nu > 0:
        rest = _anchor_upper(order) + r - 4.0 * _C2 + _C1 * (math.log(a) - math.log(SERIES_RADIUS))
    else:
        rest = _anchor_lower(order) + r - 4.0 * _C2 - _C1 * (math.log(a) - math.log(SERIES_RADIUS))
    return math.pi * S / 32.0 * (_C2 + a * rest)


# --------------------------------------------------------------------------
# gamma, tanh-sinh route


def _mp_H(x):
    if x == 1:
        return mpmath.mpf(-1)
    return (1 - x) * mpmath.ellipk(x) - mpmath.ellipe(x)


def _geometric_points(lo, hi, ratio=2):
    pts = [lo]
    while pts[-1] * ratio < hi:
        pts.append(pts[-1] * ratio)
    pts.append(hi)
    return pts


def _gamma_tanh_sinh(nu, dps=30):
    with mpmath.workdps(dps):
        x = mpmath.mpf(nu)
        if nu > 0:
            f = lambda t: 1 / _mp_H(t) ** 2
            val, err = mpmath.quad(f, _geometric_points(x, mpmath.mpf(1)), error=True)
            scale = -_mp_H(x) / 8
        else:
            # w = log(1 - t); the tail beyond w_max uses K - E = w/2 + log 4 - 1 + O(w e^{-w})
            w0 = mpmath.log1p(-x)
            w_max = mpmath.mpf(200)
            f = lambda w: mpmath.exp(w) / _mp_H(-mpmath.expm1(w)) ** 2
            pts = _geometric_points(w0, min(mpmath.mpf(1), w_max)) + [2, 4, 8, 16, 32, 64, 128, w_max]
            pts = sorted(set(p for p in pts if p >= w0))
            val, err = mpmath.quad(f, pts, error=True)
            val += 4 / (w_max + 2 * (mpmath.log(4) - 1))
            scale = _mp_H(x) / 8
        return float(scale * val), float(abs(scale) * err)


# --------------------------------------------------------------------------
# public gamma API


def _gamma_with_bound(nu, method, tol, order=24):
    if not math.isfinite(nu) and nu != -math.inf:
        raise DomainError(f"nu must be a real number, got {nu}")
    if nu > 1:
        raise DomainError(f"gamma requires nu <= 1, got {nu}")
    if nu == 1:
        return 0.0, 0.0
    if nu == 0:
        return INV_TWO_PI, 0.0
    if nu == -math.inf:
        return math.inf, 0.0
    if method == "gauss":
        g1 = _gamma_gauss(nu, order)
        g2 = _gamma_gauss(nu, 2 * order)
        value, bound = g2, abs(g2 - g1)
    elif method == "tanh-sinh":
        value, bound = _gamma_tanh_sinh(nu)
    else:
        raise ValueError(f"unknown method {method!r}")
    if not (bound <= tol * max(1.0, abs(value))):
        raise AccuracyError(f"gamma({nu}) missed tolerance {tol:.1e}", bound)
    return value, bound


def gamma_fn(nu, method: str = "gauss", tol: float = GAMMA_TOL):
    """Density map ``gamma(nu)`` for ``nu <= 1``.

    Continuous and strictly decreasing, with ``gamma(0) = 1/(2 pi)``,
    ``gamma(1) = 0`` and ``gamma(nu) ~ sqrt(1 - nu)/4`` as ``nu -> -inf``.

    Parameters
    ----------
    nu : float or array_like
    method : {"gauss", "tanh-sinh"}
        Quadrature route; the two share no nodes and no elliptic-function code.
    tol : float
        Required bound on the quadrature error (relative above 1).

    Raises
    ------
    DomainError
        If ``nu > 1``.
    AccuracyError
        If the error estimate exceeds ``tol``.
    """
    arr = np.asarray(nu, dtype=float)
    vals = np.array([_gamma_with_bound(float(v), method, tol)[0] for v in arr.ravel()]).reshape(arr.shape)
    return _out(vals, arr.ndim == 0)


def gamma_inv(r: float, tol: float = 1e-13) -> float:
    """Inverse of :func:`gamma_fn` on ``[0, inf)``.

    ``r > 1/(2 pi)`` maps to ``nu < 0``, ``0 < r < 1/(2 pi)`` to ``nu in (0, 1)``.
    """
    r = float(r)
    if not (r >= 0 and math.isfinite(r)):
        raise DomainError(f"gamma_inv requires a finite r >= 0, got {r}")
    if r == 0:
        return 1.0
    if abs(r - INV_TWO_PI) <= 1e-15 * INV_TWO_PI:
        return 0.0
    f = lambda v: _gamma_with_bound(v, "gauss", GAMMA_TOL)[0] - r
    if r > INV_TWO_PI:
        lo = -1.0
        while f(lo) <= 0:
            lo *= 4.0
        return optimize.brentq(f, lo, 0.0, xtol=tol * max(1.0, abs(lo)), rtol=1e-15, maxiter=200)
    return optimize.brentq(f, 0.0, 1.0, xtol=tol, rtol=1e-15, maxiter=200)


def _clip_roundoff(value):
    # the minimum is exactly 0; only rounding can push it below
    return 0.0 if -1e-12 < value < 0 else value


@dataclass(frozen=True)
class RateEvaluation:
    """One evaluation of the rate function at density ``rho``."""

    rho: float
    nu: float
    gamma_at_nu: float
    I_bess: float
    quadrature_error_bound: float

    @property
    def I_sine(self) -> float:
        """The bulk rate at density ``rho / 4``, ``I_bess / 32``."""
        return self.I_bess / 32.0


def rate_bess(rho: float) -> RateEvaluation:
    """Hard-edge rate function ``I(rho) = nu/2 + rho H(nu)``, ``nu = gamma^{-1}(rho/4)``.

    Zero exactly at ``rho = 2/pi`` and equal to ``1/2`` at ``rho = 0``.
    """
    rho = float(rho)
    if not (rho >= 0 and math.isfinite(rho)):
        raise DomainError(f"rho must be a finite nonnegative number, got {rho}")
    nu = gamma_inv(rho / 4.0)
    g, bound = _gamma_with_bound(nu, "gauss", GAMMA_TOL)
    value = 0.5 * nu + rho * float(_H_core(np.array(nu)))
    return RateEvaluation(rho, nu, g, _clip_roundoff(value), bound)


def rate_sine(rho_s: float) -> float:
    """Bulk rate function at density ``rho_s``: ``nu/64 + rho_s H(nu)/8``, ``nu = gamma^{-1}(rho_s)``.

    Evaluated directly rather than by rescaling :func:`rate_bess`, so comparing
    ``32 * rate_sine(rho/4)`` with ``rate_bess(rho)`` exercises two arithmetic paths.
    """
    rho_s = float(rho_s)
    if not (rho_s >= 0 and math.isfinite(rho_s)):
        raise DomainError(f"rho_s must be a finite nonnegative number, got {rho_s}")
    nu = gamma_inv(rho_s)
    value = nu / 64.0 + rho_s * float(_H_core(np.array(nu))) / 8.0
    return _clip_roundoff(value)
