"""The log-Lambert-W transformed chi-squared family.

A chi-squared variable X with ``nu`` degrees of freedom is pushed through
the convex map ``y = theta1 - theta2 log(x) + theta3 x`` (``theta2, theta3 >
0``).  The map attains its minimum ``y_min`` at ``x_star = theta2/theta3``;
every level ``y > y_min`` has exactly two preimages, obtained from the two
real branches of the Lambert W function.  This module provides the exact
distribution of Y = g(X): density, distribution function, quantiles,
characteristic function, moment generating function and cumulants, plus the
plain chi-squared/gamma base distributions the transform acts on.

Scalar arguments give float results; array-likes give arrays.
"""
from __future__ import annotations

import math
import numbers
from dataclasses import dataclass

import numpy as np

from . import _backend as _K
from .errors import ConvergenceError, DomainError

__all__ = [
    "Theta",
    "BaseDistribution",
    "LWChiSquared",
    "CumulantSet",
    "transform",
    "branch_solutions",
    "lw_cdf",
    "lw_pdf",
    "lw_quantile",
    "transformed_cdf",
    "transformed_pdf",
    "transformed_quantile",
    "chi2_base",
    "gamma_base",
    "chi2_quantile",
    "standard_lw_chi2",
    "lw_chi2_cf",
    "lw_chi2_mgf",
    "lw_chi2_cumulants",
]

_LOG2 = 0.6931471805599453094172321


def _finite_real(name, value):
    if isinstance(value, bool) or not isinstance(value, numbers.Real):
        raise DomainError(f"{name} must be a real number, got {value!r}")
    value = float(value)
    if not math.isfinite(value):
        raise DomainError(f"{name} must be finite, got {value!r}")
    return value


def _positive_real(name, value):
    value = _finite_real(name, value)
    if value <= 0.0:
        raise DomainError(f"{name} must be positive, got {value!r}")
    return value


@dataclass(frozen=True)
class Theta:
    """Transform parameters (theta1, theta2, theta3), theta2 and theta3 > 0."""

    theta1: float
    theta2: float
    theta3: float

    def __post_init__(self):
        object.__setattr__(self, "theta1", _finite_real("theta1", self.theta1))
        object.__setattr__(self, "theta2", _positive_real("theta2", self.theta2))
        object.__setattr__(self, "theta3", _positive_real("theta3", self.theta3))

    @property
    def x_at_min(self):
        """Location of the transform's minimum, theta2 / theta3."""
        return self.theta2 / self.theta3

    @property
    def y_min(self):
        """Minimum value of the transform over x > 0."""
        return self.theta1 + self.theta2 - self.theta2 * math.log(self.x_at_min)

    def as_tuple(self):
        return (self.theta1, self.theta2, self.theta3)


def _as_theta(theta):
    if isinstance(theta, Theta):
        return theta
    if isinstance(theta, (tuple, list)) and len(theta) == 3:
        return Theta(*theta)
    raise DomainError(
        f"expected a Theta or a (theta1, theta2, theta3) triple, got {theta!r}"
    )


@dataclass(frozen=True)
class BaseDistribution:
    """A base distribution on (0, inf): a name plus cdf/pdf callables."""

    name: str
    cdf: object
    pdf: object


@dataclass(frozen=True)
class LWChiSquared:
    """Distribution of the transformed variable Y = g_theta(X), X ~ chi2(nu)."""

    nu: float
    theta: Theta

    def __post_init__(self):
        object.__setattr__(self, "nu", _positive_real("nu", self.nu))
        object.__setattr__(self, "theta", _as_theta(self.theta))

    @property
    def y_min(self):
        return self.theta.y_min


def _as_lw(d):
    if not isinstance(d, LWChiSquared):
        raise DomainError(f"expected an LWChiSquared instance, got {d!r}")
    return d


@dataclass(frozen=True)
class CumulantSet:
    """Cumulants of an LWChiSquared (or combination) distribution.

    ``kappa`` holds cumulants 1..n as requested; the named statistics are
    always derived from the first four.
    """

    kappa: tuple
    mean: float
    variance: float
    skewness: float
    kurtosis_excess_ratio: float


def standard_lw_chi2(nu):
    """The standardized family member: theta = (nu(log nu - 1), nu, 1).

    This choice puts the transform minimum at y_min = 0 and makes Y the
    exact likelihood-ratio statistic ``x - nu - nu log(x/nu)`` of a
    chi-squared scale test.
    """
    nu = _positive_real("nu", nu)
    return LWChiSquared(nu, Theta(nu * (math.log(nu) - 1.0), nu, 1.0))


# ---------------------------------------------------------------------------
# the transform and its inversion
# ---------------------------------------------------------------------------

def transform(theta, x):
    """Evaluate y = theta1 - theta2 log(x) + theta3 x for x > 0.

    ``x = 0`` gives ``+inf`` (the limit); negative x raises DomainError.
    """
    theta = _as_theta(theta)
    scalar = np.ndim(x) == 0
    arr = np.asarray(x, dtype=np.float64)
    if np.any(np.isnan(arr)) or np.any(arr < 0.0):
        raise DomainError("transform requires x >= 0")
    with np.errstate(divide="ignore"):
        y = theta.theta1 - theta.theta2 * np.log(arr) + theta.theta3 * arr
    return float(y) if scalar else y


def _delta_from_y(theta, y_arr, y_min):
    """(y - y_min)/theta2 clamped at zero; assumes validation already done."""
    return np.maximum((y_arr - y_min) / theta.theta2, 0.0)


def branch_solutions(theta, y):
    """Both preimages (x_lower, x_upper) of a level y >= y_min.

    ``x_lower`` lies in (0, x_at_min], ``x_upper`` in [x_at_min, inf); the
    two coincide exactly at ``y = y_min``.  Values of y below ``y_min`` by
    more than ``1e-12 * (1 + |y_min|)`` raise DomainError; tiny rounding
    shortfalls clamp to the minimum.
    """
    theta = _as_theta(theta)
    scalar = np.ndim(y) == 0
    arr = np.asarray(y, dtype=np.float64)
    ym = theta.y_min
    if np.any(np.isnan(arr)):
        raise DomainError("branch_solutions requires numeric y")
    grace = 1e-12 * (1.0 + abs(ym))
    if np.any(arr < ym - grace):
        raise DomainError(
            f"y below the transform minimum {ym!r} is outside the support"
        )
    delta = _delta_from_y(theta, arr, ym)
    uL, uU, _, _ = _K.branch_pair(delta)
    xs = theta.x_at_min
    xl, xu = xs * uL, xs * uU
    if scalar:
        return float(xl), float(xu)
    return xl, xu


# ---------------------------------------------------------------------------
# distribution function, density, quantile
# ---------------------------------------------------------------------------

def lw_cdf(d, y):
    """P(Y <= y) for Y ~ LWChiSquared.  Zero below y_min, tends to 1."""
    d = _as_lw(d)
    scalar = np.ndim(y) == 0
    arr = np.asarray(y, dtype=np.float64)
    if np.any(np.isnan(arr)):
        raise DomainError("lw_cdf requires numeric y")
    ym = d.theta.y_min
    a = 0.5 * d.nu
    halfxs = 0.5 * d.theta.x_at_min

    if scalar:
        yv = float(arr)
        if yv <= ym:
            return 0.0
        if math.isinf(yv):
            return 1.0
        uL, uU, _, _ = _K.branch_pair(np.float64((yv - ym) / d.theta.theta2))
        lo = _K.pgamma(a, halfxs * float(uL))
        hi = _K.pgamma(a, halfxs * float(uU))
        return min(max(hi - lo, 0.0), 1.0)

    out = np.zeros(arr.shape, dtype=np.float64)
    inf_mask = np.isinf(arr) & (arr > 0)
    out[inf_mask] = 1.0
    live = (arr > ym) & ~inf_mask
    if np.any(live):
        delta = (arr[live] - ym) / d.theta.theta2
        uL, uU, _, _ = _K.branch_pair(delta)
        both = _K.pgamma_arr(np.float64(a), halfxs * np.concatenate([uL, uU]))
        n = uL.size
        out[live] = np.clip(both[n:] - both[:n], 0.0, 1.0)
    return out


def lw_pdf(d, y):
    """Density of Y ~ LWChiSquared.

    Zero below y_min, ``+inf`` at exactly y_min (the density has an
    integrable inverse-square-root singularity there).
    """
    d = _as_lw(d)
    scalar = np.ndim(y) == 0
    arr = np.atleast_1d(np.asarray(y, dtype=np.float64))
    if np.any(np.isnan(arr)):
        raise DomainError("lw_pdf requires numeric y")
    ym = d.theta.y_min
    th2 = d.theta.theta2
    xs = d.theta.x_at_min
    a = 0.5 * d.nu
    lga = _K.lgamma_real(a)

    out = np.zeros(arr.shape, dtype=np.float64)
    live = (arr >= ym) & np.isfinite(arr)
    if np.any(live):
        delta = (arr[live] - ym) / th2
        uL, uU, vL, vU = _K.branch_pair(delta)
        with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
            # x f(x) = (x/2)^a e^(-x/2) / Gamma(a) evaluated in log space
            lxfL = a * np.log(0.5 * xs * uL) - 0.5 * xs * uL - lga
            lxfU = a * np.log(0.5 * xs * uU) - 0.5 * xs * uU - lga
            termL = np.exp(lxfL) / (th2 * (-vL))
            termU = np.exp(lxfU) / (th2 * vU)
        # x_lower underflow: the weight -v_L is 1, the mass term is 0
        termL = np.where(uL == 0.0, 0.0, termL)
        vals = termL + termU
        # exactly at the minimum both weights vanish: density diverges
        vals = np.where(delta == 0.0, np.inf, vals)
        out[live] = vals
    return float(out[0]) if scalar else out.reshape(np.shape(y))


def lw_quantile(d, p, tol=1e-9):
    """Quantile function: the y with lw_cdf(d, y) = p, for 0 <= p < 1.

    ``p = 0`` returns y_min.  Solved by bracket doubling plus bisection to
    absolute tolerance ``tol`` in y.
    """
    d = _as_lw(d)
    if isinstance(tol, bool) or not isinstance(tol, numbers.Real) \
            or not math.isfinite(tol) or not 0.0 < tol <= 0.1:
        raise DomainError("lw_quantile requires 0 < tol <= 0.1")
    tol = float(tol)
    scalar = np.ndim(p) == 0
    parr = np.atleast_1d(np.asarray(p, dtype=np.float64))
    if np.any(np.isnan(parr)) or np.any(parr < 0.0) or np.any(parr >= 1.0):
        raise DomainError("lw_quantile requires 0 <= p < 1")
    ym = d.theta.y_min
    th2 = d.theta.theta2

    out = np.full(parr.shape, ym, dtype=np.float64)
    live = parr > 0.0
    if np.any(live):
        pt = parr[live]
        width = np.full(pt.shape, th2)
        for _ in range(200):
            need = lw_cdf(d, ym + width) < pt
            if not np.any(need):
                break
            width[need] *= 2.0
        else:
            raise ConvergenceError("lw_quantile: bracket doubling failed")
        lo = np.zeros(pt.shape)
        hi = width
        # bisect on the offset from y_min
        while np.max(hi - lo) > tol:
            mid = 0.5 * (lo + hi)
            if np.all((mid == lo) | (mid == hi)):
                break  # interval at floating-point resolution
            below = lw_cdf(d, ym + mid) < pt
            lo = np.where(below, mid, lo)
            hi = np.where(below, hi, mid)
        out[live] = ym + 0.5 * (lo + hi)
    return float(out[0]) if scalar else out.reshape(np.shape(p))


# ---------------------------------------------------------------------------
# base distributions
# ---------------------------------------------------------------------------

def _gamma_cdf_pdf(alpha, scale):
    lga = _K.lgamma_real(alpha)
    lscale = math.log(scale)

    def cdf(x):
        scalar = np.ndim(x) == 0
        arr = np.asarray(x, dtype=np.float64)
        if np.any(np.isnan(arr)):
            raise DomainError("cdf requires numeric x")
        res = np.where(
            np.asarray(arr > 0.0),
            _K.pgamma_arr(np.float64(alpha), np.maximum(arr, 0.0) / scale),
            0.0,
        )
        return float(res) if scalar else res

    def pdf(x):
        scalar = np.ndim(x) == 0
        arr = np.asarray(x, dtype=np.float64)
        if np.any(np.isnan(arr)):
            raise DomainError("pdf requires numeric x")
        with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
            lp = ((alpha - 1.0) * np.log(arr) - arr / scale
                  - alpha * lscale - lga)
            res = np.where(np.asarray(arr > 0.0), np.exp(lp), 0.0)
        if np.any(arr == 0.0):
            at0 = math.inf if alpha < 1.0 else (
                1.0 / scale if alpha == 1.0 else 0.0)
            res = np.where(arr == 0.0, at0, res)
        return float(res) if scalar else res

    return cdf, pdf


def chi2_base(nu):
    """The chi-squared(nu) base distribution as cdf/pdf callables."""
    nu = _positive_real("nu", nu)
    cdf, pdf = _gamma_cdf_pdf(0.5 * nu, 2.0)
    return BaseDistribution(name=f"chi-squared(nu={nu:g})", cdf=cdf, pdf=pdf)


def gamma_base(alpha, beta):
    """The Gamma(alpha, scale=beta) base distribution as cdf/pdf callables."""
    alpha = _positive_real("alpha", alpha)
    beta = _positive_real("beta", beta)
    cdf, pdf = _gamma_cdf_pdf(alpha, beta)
    return BaseDistribution(
        name=f"gamma(alpha={alpha:g}, beta={beta:g})", cdf=cdf, pdf=pdf
    )


def _as_base(base):
    if not isinstance(base, BaseDistribution):
        raise DomainError(f"expected a BaseDistribution instance, got {base!r}")
    return base


def transformed_cdf(base, theta, y):
    """CDF of Y = g_theta(X) for X ~ base: base.cdf(x_upper) - base.cdf(x_lower).

    The generic-base route; ``lw_cdf`` is the closed-form chi-squared
    specialization.  The base cdf callable must accept float64 arrays.
    """
    base = _as_base(base)
    theta = _as_theta(theta)
    scalar = np.ndim(y) == 0
    arr = np.asarray(y, dtype=np.float64)
    if np.any(np.isnan(arr)):
        raise DomainError("transformed_cdf requires numeric y")
    ym = theta.y_min
    out = np.zeros(arr.shape, dtype=np.float64)
    inf_mask = np.isinf(arr) & (arr > 0)
    out[inf_mask] = 1.0
    live = (arr > ym) & ~inf_mask
    if np.any(live):
        uL, uU, _, _ = _K.branch_pair((arr[live] - ym) / theta.theta2)
        xs = theta.x_at_min
        out[live] = np.clip(
            np.asarray(base.cdf(xs * uU)) - np.asarray(base.cdf(xs * uL)),
            0.0,
            1.0,
        )
    return float(out) if scalar else out


def transformed_pdf(base, theta, y):
    """Density of Y = g_theta(X) for X ~ base (generic-base route).

    The two preimages contribute base.pdf(x) times the inverse slope
    ``x / |theta3 x - theta2|``; at exactly ``y_min`` the density is
    ``+inf`` (integrable inverse-square-root singularity), below it zero.
    """
    base = _as_base(base)
    theta = _as_theta(theta)
    scalar = np.ndim(y) == 0
    arr = np.atleast_1d(np.asarray(y, dtype=np.float64))
    if np.any(np.isnan(arr)):
        raise DomainError("transformed_pdf requires numeric y")
    ym = theta.y_min
    th2 = theta.theta2
    xs = theta.x_at_min
    out = np.zeros(arr.shape, dtype=np.float64)
    live = (arr >= ym) & np.isfinite(arr)
    if np.any(live):
        delta = (arr[live] - ym) / th2
        uL, uU, vL, vU = _K.branch_pair(delta)
        with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
            termL = np.asarray(base.pdf(xs * uL)) * (xs * uL) / (th2 * (-vL))
            termU = np.asarray(base.pdf(xs * uU)) * (xs * uU) / (th2 * vU)
        # x_lower underflow: the slope weight vanishes faster than any pdf pole
        termL = np.where(uL == 0.0, 0.0, termL)
        vals = termL + termU
        vals = np.where(delta == 0.0, np.inf, vals)
        out[live] = vals
    return float(out[0]) if scalar else out.reshape(np.shape(y))


def transformed_quantile(base, theta, p, tol=1e-9):
    """Quantile of Y = g_theta(X) for X ~ base, for 0 <= p < 1.

    ``p = 0`` returns ``y_min``; bracket doubling plus bisection, as in
    ``lw_quantile``.
    """
    base = _as_base(base)
    theta = _as_theta(theta)
    scalar = np.ndim(p) == 0
    parr = np.atleast_1d(np.asarray(p, dtype=np.float64))
    if np.any(np.isnan(parr)) or np.any(parr < 0.0) or np.any(parr >= 1.0):
        raise DomainError("transformed_quantile requires 0 <= p < 1")
    ym = theta.y_min
    out = np.full(parr.shape, ym, dtype=np.float64)
    live = parr > 0.0
    if np.any(live):
        pt = parr[live]
        width = np.full(pt.shape, theta.theta2)
        for _ in range(200):
            need = transformed_cdf(base, theta, ym + width) < pt
            if not np.any(need):
                break
            width[need] *= 2.0
        else:
            raise ConvergenceError("transformed_quantile: bracket doubling failed")
        lo = np.zeros(pt.shape)
        hi = width
        while np.max(hi - lo) > tol:
            mid = 0.5 * (lo + hi)
            below = transformed_cdf(base, theta, ym + mid) < pt
            lo = np.where(below, mid, lo)
            hi = np.where(below, hi, mid)
        out[live] = ym + 0.5 * (lo + hi)
    return float(out[0]) if scalar else out.reshape(np.shape(p))


def chi2_quantile(nu, p):
    """Quantile of the chi-squared(nu) distribution (scalar or array p)."""
    nu = _positive_real("nu", nu)
    scalar = np.ndim(p) == 0
    parr = np.asarray(p, dtype=np.float64)
    if np.any(np.isnan(parr)) or np.any(parr < 0.0) or np.any(parr >= 1.0):
        raise DomainError("chi2_quantile requires 0 <= p < 1")
    a = 0.5 * nu
    flat = parr.ravel()
    hi0 = nu + 40.0 * math.sqrt(2.0 * nu) + 40.0
    while _K.pgamma(a, 0.5 * hi0) < float(np.max(flat, initial=0.0)):
        hi0 *= 2.0
    lo = np.zeros(flat.shape)
    hi = np.full(flat.shape, hi0)
    for _ in range(90):
        mid = 0.5 * (lo + hi)
        below = _K.pgamma_arr(np.float64(a), 0.5 * mid) < flat
        lo = np.where(below, mid, lo)
        hi = np.where(below, hi, mid)
    res = np.where(flat == 0.0, 0.0, 0.5 * (lo + hi)).reshape(parr.shape)
    return float(res) if scalar else res


# ---------------------------------------------------------------------------
# characteristic function, MGF, cumulants
# ---------------------------------------------------------------------------

def lw_chi2_cf(d, t):
    """Characteristic function E[exp(itY)] evaluated in log space.

    For s = nu/2 - i t theta2 the value is
    ``exp(i t theta1) Gamma(s) / (Gamma(nu/2) 2^(nu/2) (1/2 - i t theta3)^s)``;
    the principal logarithms never cross a branch cut because both Gamma
    arguments keep positive real part.
    """
    d = _as_lw(d)
    scalar = np.ndim(t) == 0
    arr = np.asarray(t, dtype=np.float64)
    if np.any(np.isnan(arr)) or np.any(np.isinf(arr)):
        raise DomainError("lw_chi2_cf requires finite real t")
    a = 0.5 * d.nu
    th1, th2, th3 = d.theta.as_tuple()
    s = a - 1j * th2 * arr
    logcf = (
        1j * arr * th1
        + _K.loggamma_complex(s)
        - _K.lgamma_real(a)
        - a * _LOG2
        - s * np.log(0.5 - 1j * th3 * arr)
    )
    out = np.exp(logcf)
    out = np.where(arr == 0.0, 1.0 + 0.0j, out)
    return complex(out) if scalar else out


def mgf_upper_limit(d):
    """Supremum of the MGF's convergence interval: min(nu/theta2, 1/theta3)/2."""
    d = _as_lw(d)
    return 0.5 * min(d.nu / d.theta.theta2, 1.0 / d.theta.theta3)


def lw_chi2_mgf(d, t):
    """Moment generating function E[exp(tY)] for t < mgf_upper_limit(d)."""
    d = _as_lw(d)
    scalar = np.ndim(t) == 0
    arr = np.asarray(t, dtype=np.float64)
    if np.any(np.isnan(arr)) or np.any(np.isinf(arr)):
        raise DomainError("lw_chi2_mgf requires finite real t")
    tmax = mgf_upper_limit(d)
    if np.any(arr >= tmax):
        raise DomainError(
            f"lw_chi2_mgf diverges for t >= {tmax!r} (got a value at or beyond it)"
        )
    a = 0.5 * d.nu
    th1, th2, th3 = d.theta.as_tuple()
    s = a - th2 * arr
    logm = (
        arr * th1
        + _K.lgamma_real_arr(s)
        - _K.lgamma_real(a)
        - a * _LOG2
        - s * np.log(0.5 - th3 * arr)
    )
    out = np.exp(logm)
    return float(out) if scalar else out


def lw_chi2_cumulants(d, max_order=4):
    """Exact cumulants 1..max_order (max_order <= 8) of an LWChiSquared.

    kappa_1 = theta1 - theta2 log 2 + nu theta3 - theta2 psi(nu/2); higher
    orders combine the gamma-moment part with polygamma terms:
    kappa_j = 2^(j-1) (j-2)! theta3^(j-1) ((j-1) nu theta3 - j theta2)
              + (-1)^j theta2^j psi^(j-1)(nu/2).
    """
    d = _as_lw(d)
    if isinstance(max_order, bool) or not isinstance(max_order, numbers.Integral):
        raise DomainError(f"max_order must be an integer, got {max_order!r}")
    max_order = int(max_order)
    if not 1 <= max_order <= 8:
        raise DomainError(f"max_order must be in [1, 8], got {max_order}")
    a = 0.5 * d.nu
    th1, th2, th3 = d.theta.as_tuple()
    nu = d.nu
    n_int = max(4, max_order)
    kap = []
    kap.append(th1 - th2 * _LOG2 + nu * th3 - th2 * _K.polygamma_scalar(0, a))
    for j in range(2, n_int + 1):
        gamma_part = (
            2.0 ** (j - 1)
            * math.factorial(j - 2)
            * th3 ** (j - 1)
            * ((j - 1) * nu * th3 - j * th2)
        )
        poly_part = (-1.0) ** j * th2 ** j * _K.polygamma_scalar(j - 1, a)
        kap.append(gamma_part + poly_part)
    k2, k3, k4 = kap[1], kap[2], kap[3]
    return CumulantSet(
        kappa=tuple(kap[:max_order]),
        mean=kap[0],
        variance=k2,
        skewness=k3 / k2 ** 1.5,
        kurtosis_excess_ratio=k4 / (k2 * k2),
    )
