"""Exact likelihood-ratio tests whose statistics are transformed chi-squares.

Three classical Gaussian testing problems have -2 log(likelihood ratio)
statistics of the form ``x - c - b log x`` in a chi-squared quantity x, so
their exact null (and alternative) distributions are single transformed
chi-squared laws or independent sums of them:

* one-sample variance test and confidence intervals,
* joint test of regression coefficients and error variance,
* joint test of the scale parameters of several independent chi-squared
  components (canonical variance-components form).

Quantile-ready distributions come back as :class:`~lwchi2.lwdist.LWChiSquared`
or :class:`~lwchi2.convolve.LinearCombination` objects.
"""
from __future__ import annotations

import math
import numbers
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .convolve import LinearCombination, Term
from .errors import DomainError
from .lwdist import (
    LWChiSquared,
    Theta,
    _finite_real,
    _positive_real,
    branch_solutions,
    lw_quantile,
    standard_lw_chi2,
)

__all__ = [
    "VarCompModel",
    "ConfidenceInterval",
    "variance_lrt_statistic",
    "variance_lrt_null",
    "variance_ci_lrt",
    "variance_ci_minlength",
    "regression_lrt_statistic",
    "regression_lrt_null",
    "canonical_lrt_statistic",
    "canonical_lrt_distribution",
]


@dataclass(frozen=True)
class VarCompModel:
    """Spectral summary of a Gaussian variance-components model.

    ``eigenvalues`` are the distinct covariance-design eigenvalues in
    strictly decreasing order, ``multiplicities`` their multiplicities
    (the chi-squared degrees of freedom), ``sufficient_stats`` the observed
    quadratic forms U_i aggregated per eigenvalue.
    """

    eigenvalues: tuple
    multiplicities: tuple
    sufficient_stats: tuple

    def __post_init__(self):
        eig = tuple(_finite_real("eigenvalue", v) for v in self.eigenvalues)
        if not eig:
            raise DomainError("VarCompModel requires at least one component")
        if any(v < 0 for v in eig):
            raise DomainError("eigenvalues must be nonnegative")
        if any(nxt >= prv for nxt, prv in zip(eig[1:], eig[:-1])):
            raise DomainError("eigenvalues must be strictly decreasing")
        mult = []
        for v in self.multiplicities:
            if isinstance(v, bool) or not isinstance(v, numbers.Integral) or int(v) < 1:
                raise DomainError(
                    f"multiplicities must be positive integers, got {v!r}"
                )
            mult.append(int(v))
        stats = tuple(_finite_real("sufficient statistic", v)
                      for v in self.sufficient_stats)
        if any(v < 0 for v in stats):
            raise DomainError("sufficient statistics must be nonnegative")
        if not len(eig) == len(mult) == len(stats):
            raise DomainError(
                "eigenvalues, multiplicities and sufficient_stats must have "
                "equal lengths"
            )
        object.__setattr__(self, "eigenvalues", eig)
        object.__setattr__(self, "multiplicities", tuple(mult))
        object.__setattr__(self, "sufficient_stats", stats)

    @property
    def n_components(self):
        return len(self.eigenvalues)


@dataclass(frozen=True)
class ConfidenceInterval:
    lower: float
    upper: float
    level: float

    def __post_init__(self):
        lo = _finite_real("lower", self.lower)
        hi = _finite_real("upper", self.upper)
        lev = _finite_real("level", self.level)
        if lo > hi:
            raise DomainError(f"interval bounds out of order: [{lo}, {hi}]")
        if not 0.0 < lev < 1.0:
            raise DomainError(f"level must lie in (0, 1), got {lev}")
        object.__setattr__(self, "lower", lo)
        object.__setattr__(self, "upper", hi)
        object.__setattr__(self, "level", lev)

    @property
    def length(self):
        return self.upper - self.lower


# ---------------------------------------------------------------------------
# one-sample variance test
# ---------------------------------------------------------------------------

def variance_lrt_statistic(s2, sigma0_sq, nu):
    """-2 log LR for H0: sigma^2 = sigma0_sq from S^2 with nu d.o.f.

    Equals ``w - nu - nu log(w / nu)`` with ``w = nu S^2 / sigma0^2``, the
    image of the chi-squared quantity w under the standard transform.
    """
    s2 = _positive_real("s2", s2)
    sigma0_sq = _positive_real("sigma0_sq", sigma0_sq)
    nu = _positive_real("nu", nu)
    r = s2 / sigma0_sq
    return nu * r - nu - nu * math.log(r)


def variance_lrt_null(nu):
    """Exact null law of the variance LRT statistic: standard transform."""
    return standard_lw_chi2(nu)


@lru_cache(maxsize=512)
def _acceptance_roots(nu, alpha, theta):
    """Chi-squared acceptance region [x_lo, x_hi] for a transform law.

    The region {x: theta1 - theta2 log x + theta3 x <= q} with q the
    (1 - alpha) quantile of the transform of chi-squared(nu).
    """
    th = Theta(*theta)
    dist = LWChiSquared(nu=nu, theta=th)
    q = lw_quantile(dist, 1.0 - alpha, tol=1e-12)
    x_lo, x_hi = branch_solutions(th, q)
    return float(x_lo), float(x_hi)


def _variance_ci(s2, nu, alpha, theta):
    s2 = _positive_real("s2", s2)
    nu = _positive_real("nu", nu)
    alpha = _finite_real("alpha", alpha)
    if not 0.0 < alpha < 1.0:
        raise DomainError(f"alpha must lie in (0, 1), got {alpha}")
    x_lo, x_hi = _acceptance_roots(nu, alpha, theta)
    return ConfidenceInterval(
        lower=nu * s2 / x_hi, upper=nu * s2 / x_lo, level=1.0 - alpha,
    )


def variance_ci_lrt(s2, nu, alpha):
    """LRT-inverted (1 - alpha) confidence interval for sigma^2.

    Collects the sigma0^2 values the level-alpha LRT would accept:
    ``[nu S^2 / x_hi, nu S^2 / x_lo]`` with x_lo, x_hi the chi-squared
    acceptance bounds of the standard transform.
    """
    nu_v = _positive_real("nu", nu)
    theta = (nu_v * (math.log(nu_v) - 1.0), nu_v, 1.0)
    return _variance_ci(s2, nu_v, alpha, theta)


def variance_ci_minlength(s2, nu, alpha):
    """Shortest (1 - alpha) confidence interval for sigma^2.

    Minimal length requires x^(nu/2+1) e^(-x/2) to match at the two
    acceptance bounds, i.e. the bounds are branch roots of a transform
    with slope parameter nu + 2 instead of nu (the chi-squared degrees
    of freedom stay nu).
    """
    nu_v = _positive_real("nu", nu)
    theta = ((nu_v + 2.0) * math.log(nu_v) - nu_v, nu_v + 2.0, 1.0)
    return _variance_ci(s2, nu_v, alpha, theta)


# ---------------------------------------------------------------------------
# joint regression test
# ---------------------------------------------------------------------------

def regression_lrt_statistic(y, x_design, beta0, sigma0_sq):
    """-2 log LR for H0: beta = beta0 and sigma^2 = sigma0_sq.

    Splits into ``|X(bhat - beta0)|^2 / sigma0^2`` (chi-squared part) plus
    the standard transform of ``RSS / sigma0^2``.
    """
    sigma0_sq = _positive_real("sigma0_sq", sigma0_sq)
    y = np.asarray(y, dtype=np.float64)
    X = np.asarray(x_design, dtype=np.float64)
    b0 = np.asarray(beta0, dtype=np.float64)
    if y.ndim != 1 or X.ndim != 2 or b0.ndim != 1:
        raise DomainError(
            "expected y (n,), x_design (n, k) and beta0 (k,) arrays"
        )
    n, k = X.shape
    if y.shape[0] != n or b0.shape[0] != k:
        raise DomainError(
            f"shape mismatch: y has {y.shape[0]} rows, x_design "
            f"{X.shape} and beta0 {b0.shape[0]} entries"
        )
    if not (np.all(np.isfinite(y)) and np.all(np.isfinite(X))
            and np.all(np.isfinite(b0))):
        raise DomainError("regression inputs must be finite")
    if not n > k >= 1:
        raise DomainError(f"need n > k >= 1, got n={n}, k={k}")
    qmat, rmat = np.linalg.qr(X)
    col_norms = np.linalg.norm(X, axis=0)
    if np.min(np.abs(np.diag(rmat))) <= 1e-10 * np.max(col_norms):
        raise DomainError("x_design is rank deficient")
    bhat = np.linalg.solve(rmat, qmat.T @ y)
    resid = y - X @ bhat
    rss = float(resid @ resid)
    if rss == 0.0:
        raise DomainError(
            "residual sum of squares is zero; the variance MLE degenerates"
        )
    shift = X @ (bhat - b0)
    w = rss / sigma0_sq
    return float(shift @ shift) / sigma0_sq + w - n - n * math.log(w / n)


def regression_lrt_null(n, k):
    """Exact null law: chi-squared(k) + transform of chi-squared(n - k).

    The transform slope parameter is the full sample size n, while the
    chi-squared carrying the residuals has n - k degrees of freedom.
    """
    for name, v in (("n", n), ("k", k)):
        if isinstance(v, bool) or not isinstance(v, numbers.Integral):
            raise DomainError(f"{name} must be an integer, got {v!r}")
    n, k = int(n), int(k)
    if not n > k >= 1:
        raise DomainError(f"need n > k >= 1, got n={n}, k={k}")
    lw = LWChiSquared(
        nu=float(n - k),
        theta=Theta(n * (math.log(n) - 1.0), float(n), 1.0),
    )
    return LinearCombination((
        Term("chi2", float(k)),
        Term("lw_chi2", lw),
    ))


# ---------------------------------------------------------------------------
# canonical several-scales test
# ---------------------------------------------------------------------------

def _checked_theta_vec(name, vec, n):
    vals = tuple(_finite_real(name, v) for v in np.atleast_1d(np.asarray(vec, dtype=np.float64)))
    if len(vals) != n:
        raise DomainError(
            f"{name} must have one entry per component ({n}), got {len(vals)}"
        )
    if any(v <= 0 for v in vals):
        raise DomainError(f"{name} entries must be positive")
    return vals


def canonical_lrt_statistic(model, theta0):
    """-2 log LR for H0: vartheta_i = theta0_i in U_i ~ vartheta_i chi2(nu_i).

    Sum over components of the standard transform applied to U_i/theta0_i.
    """
    if not isinstance(model, VarCompModel):
        raise DomainError(f"expected VarCompModel, got {model!r}")
    ncomp = model.n_components
    th0 = _checked_theta_vec("theta0", theta0, ncomp)
    if any(u <= 0 for u in model.sufficient_stats):
        raise DomainError(
            "canonical LRT needs strictly positive sufficient statistics"
        )
    total = 0.0
    for u, nu, t0 in zip(model.sufficient_stats, model.multiplicities, th0):
        x = u / t0
        total += x - nu - nu * math.log(x / nu)
    return total


def canonical_lrt_distribution(model, theta0, theta_true=None):
    """Exact law of the canonical LRT statistic.

    Component i contributes the transform (with scale lambda_i =
    theta_true_i / theta0_i) of an independent chi-squared(nu_i); under the
    null all lambda_i = 1 and every term is the standard transform.
    """
    if not isinstance(model, VarCompModel):
        raise DomainError(f"expected VarCompModel, got {model!r}")
    ncomp = model.n_components
    th0 = _checked_theta_vec("theta0", theta0, ncomp)
    if theta_true is None:
        lam = (1.0,) * ncomp
    else:
        tt = _checked_theta_vec("theta_true", theta_true, ncomp)
        lam = tuple(t / t0 for t, t0 in zip(tt, th0))
    terms = []
    for nu, lm in zip(model.multiplicities, lam):
        nu_f = float(nu)
        theta = Theta(nu_f * (math.log(nu_f / lm) - 1.0), nu_f, lm)
        terms.append(Term("lw_chi2", LWChiSquared(nu=nu_f, theta=theta)))
    return LinearCombination(tuple(terms))
