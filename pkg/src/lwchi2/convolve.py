"""Linear combinations of transformed chi-squared variables.

A :class:`LinearCombination` is ``sum_j lambda_j Z_j`` with independent
terms, each either a transformed chi-squared variable (``lw_chi2``) or a
plain chi-squared variable (``chi2``).  Its characteristic function is the
product of the term CFs; distribution function and density come from
Gil-Pelaez inversion:

    F(y) = 1/2 - (1/pi) * int_0^inf Im(e^{-ity} phi(t)) / t dt
    f(y) =        (1/pi) * int_0^inf Re(e^{-ity} phi(t))     dt

The integrand decays like ``t^(-D)`` where each lw_chi2 term contributes
1/2 to D and each chi2 term ``nu/2`` -- transformed terms decay *slowly*
regardless of their degrees of freedom.  When the product decays fast
enough the integral is truncated where ``|phi|`` falls below a floor and
evaluated on Gauss-Legendre panels.  Otherwise the oscillation becomes the
resource: beyond the asymptotic onset the CF's phase grows linearly with
slope ``anchor = sum_j lambda_j y_min_j``, so on half-periods of
``pi / |y - anchor|`` the tail contributions alternate, and Wynn's epsilon
algorithm turns 80 of them into an accurate limit.

All evaluation goes through one batched engine; scalar calls are 1-element
batches.  Quadrature plans and CF node evaluations are cached per
combination, so repeated calls (quantile searches, grids) stay cheap.
"""
from __future__ import annotations

import math
import numbers
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import _backend as _K
from .errors import ConvergenceError, DomainError
from .lwdist import (
    CumulantSet,
    LWChiSquared,
    _finite_real,
    _positive_real,
    lw_chi2_cf,
    lw_chi2_cumulants,
)

__all__ = [
    "Term",
    "LinearCombination",
    "QuadratureSettings",
    "combo_cf",
    "combo_cdf",
    "combo_pdf",
    "combo_quantile",
    "combo_cumulants",
]

_KINDS = ("lw_chi2", "chi2")


@dataclass(frozen=True)
class Term:
    """One summand ``coefficient * Z`` of a linear combination.

    ``kind`` selects what ``dist`` holds: an :class:`LWChiSquared` instance
    (``"lw_chi2"``) or a positive degrees-of-freedom number (``"chi2"``).
    """

    kind: str
    dist: object
    coefficient: float = 1.0

    def __post_init__(self):
        if self.kind not in _KINDS:
            raise DomainError(
                f"Term kind must be one of {_KINDS}, got {self.kind!r}"
            )
        coef = _finite_real("coefficient", self.coefficient)
        if coef == 0.0:
            raise DomainError("Term coefficient must be nonzero")
        object.__setattr__(self, "coefficient", coef)
        if self.kind == "lw_chi2":
            if not isinstance(self.dist, LWChiSquared):
                raise DomainError(
                    "an lw_chi2 term needs an LWChiSquared in 'dist', got "
                    f"{self.dist!r}"
                )
        else:
            object.__setattr__(
                self, "dist", _positive_real("chi2 degrees of freedom", self.dist)
            )


@dataclass(frozen=True)
class LinearCombination:
    """A nonempty tuple of :class:`Term` summed together."""

    terms: tuple

    def __post_init__(self):
        terms = tuple(self.terms)
        if not terms:
            raise DomainError("LinearCombination requires at least one term")
        for t in terms:
            if not isinstance(t, Term):
                raise DomainError(f"expected Term instances, got {t!r}")
        object.__setattr__(self, "terms", terms)


def _as_combo(c):
    if isinstance(c, LinearCombination):
        return c
    if isinstance(c, Term):
        return LinearCombination((c,))
    if isinstance(c, (tuple, list)):
        return LinearCombination(tuple(c))
    raise DomainError(f"expected a LinearCombination, got {c!r}")


@dataclass(frozen=True)
class QuadratureSettings:
    """Accuracy/effort knobs for the CF inversion.

    ``abs_tol`` is the absolute accuracy target for cdf/pdf values;
    ``max_nodes`` caps the number of CF evaluations a single point may
    spend; truncation of the fast path happens where ``|phi|`` drops below
    ``truncation_cf_floor``.
    """

    abs_tol: float = 1e-10
    max_nodes: int = 1_000_000
    truncation_cf_floor: float = 1e-14

    def __post_init__(self):
        abs_tol = _finite_real("abs_tol", self.abs_tol)
        if not 0.0 < abs_tol <= 1e-2:
            raise DomainError(f"abs_tol must lie in (0, 1e-2], got {abs_tol!r}")
        object.__setattr__(self, "abs_tol", abs_tol)
        if (isinstance(self.max_nodes, bool)
                or not isinstance(self.max_nodes, numbers.Integral)
                or int(self.max_nodes) < 1000):
            raise DomainError(
                f"max_nodes must be an integer >= 1000, got {self.max_nodes!r}"
            )
        object.__setattr__(self, "max_nodes", int(self.max_nodes))
        floor = _finite_real("truncation_cf_floor", self.truncation_cf_floor)
        if not 0.0 < floor <= 1e-6:
            raise DomainError(
                f"truncation_cf_floor must lie in (0, 1e-6], got {floor!r}"
            )
        object.__setattr__(self, "truncation_cf_floor", floor)


_DEFAULT_SETTINGS = QuadratureSettings()

# 6-point Gauss-Legendre rule on [-1, 1]
_GL_X = np.array([
    -0.9324695142031521, -0.6612093864662645, -0.2386191860831969,
    0.2386191860831969, 0.6612093864662645, 0.9324695142031521,
])
_GL_W = np.array([
    0.1713244923791704, 0.3607615730481386, 0.4679139345726910,
    0.4679139345726910, 0.3607615730481386, 0.1713244923791704,
])

_PPP = 4.0            # quadrature panels per oscillation wavelength
_T_START = 4.0        # first truncation probe
_FAST_T_CAP = 2.0 ** 18   # beyond this truncation length, switch strategy
_TAIL_HALF_PERIODS = 80
_TAIL_PANELS_PER_HP = 6
_SLOW_T_OSC = 12.0    # slow path starts at >= this many radians of phase
_OMEGA_FLOOR = 1e-9
_MIN_PANELS = 64
_NPAN_QUANTUM = 64    # round panel counts up for plan reuse across calls


# ---------------------------------------------------------------------------
# characteristic function and cumulants
# ---------------------------------------------------------------------------

def _term_cf(term, t):
    """CF of coefficient * Z at real array t."""
    ct = term.coefficient * t
    if term.kind == "lw_chi2":
        return lw_chi2_cf(term.dist, ct)
    with np.errstate(invalid="ignore"):
        return np.exp(-0.5 * term.dist * np.log(1.0 - 2.0j * ct))


def combo_cf(c, t):
    """Characteristic function of the combination at real t (scalar/array)."""
    c = _as_combo(c)
    scalar = np.ndim(t) == 0
    arr = np.asarray(t, dtype=np.float64)
    if np.any(np.isnan(arr)) or np.any(np.isinf(arr)):
        raise DomainError("combo_cf requires finite real t")
    out = np.ones(arr.shape, dtype=np.complex128)
    for term in c.terms:
        out = out * _term_cf(term, arr)
    return complex(out) if scalar else out


def _chi2_kappa(nu, j):
    """j-th cumulant of a chi-squared(nu) variable: 2^(j-1) (j-1)! nu."""
    return 2.0 ** (j - 1) * math.factorial(j - 1) * nu


def combo_cumulants(c, max_order=4):
    """Cumulants of the combination: kappa_j = sum_j lambda^j kappa_j(term)."""
    c = _as_combo(c)
    if isinstance(max_order, bool) or not isinstance(max_order, numbers.Integral):
        raise DomainError(f"max_order must be an integer, got {max_order!r}")
    max_order = int(max_order)
    if not 1 <= max_order <= 8:
        raise DomainError(f"max_order must be in [1, 8], got {max_order}")
    n_int = max(4, max_order)
    kap = np.zeros(n_int)
    for term in c.terms:
        lam = term.coefficient
        if term.kind == "lw_chi2":
            tk = lw_chi2_cumulants(term.dist, n_int).kappa
        else:
            tk = tuple(_chi2_kappa(term.dist, j) for j in range(1, n_int + 1))
        kap += np.array([lam ** j * tk[j - 1] for j in range(1, n_int + 1)])
    k2, k3, k4 = kap[1], kap[2], kap[3]
    return CumulantSet(
        kappa=tuple(kap[:max_order]),
        mean=kap[0],
        variance=k2,
        skewness=k3 / k2 ** 1.5,
        kurtosis_excess_ratio=k4 / (k2 * k2),
    )


@lru_cache(maxsize=256)
def _combo_meta(c):
    """(decay order D, phase anchor, kappa1, kappa2) for a combination."""
    order = 0.0
    anchor = 0.0
    for term in c.terms:
        if term.kind == "lw_chi2":
            order += 0.5
            anchor += term.coefficient * term.dist.theta.y_min
        else:
            order += 0.5 * term.dist
    ks = combo_cumulants(c, 2)
    return order, anchor, ks.mean, ks.variance


# ---------------------------------------------------------------------------
# quadrature plans
# ---------------------------------------------------------------------------

@lru_cache(maxsize=256)
def _truncation_T(c, floor):
    """Smallest power-of-two T (from 4) with |phi(T)| < floor, else None."""
    t = _T_START
    while t <= _FAST_T_CAP:
        if abs(combo_cf(c, t)) < floor:
            return t
        t *= 2.0
    return None


@lru_cache(maxsize=256)
def _asym_onset(c):
    """T beyond which |phi| follows its power-law envelope within 1%."""
    order, _, _, _ = _combo_meta(c)
    t = _T_START
    while t < 2.0 ** 40:
        a0 = abs(combo_cf(c, t))
        a1 = abs(combo_cf(c, 2.0 * t))
        if a0 == 0.0 or a1 == 0.0:
            return t
        ratio = (a1 * (2.0 * t) ** order) / (a0 * t ** order)
        if abs(ratio - 1.0) < 0.01:
            return 2.0 * t
        t *= 2.0
    raise ConvergenceError(
        "combination CF never reached its asymptotic envelope"
    )


@lru_cache(maxsize=64)
def _plan_nodes(c, T, npan):
    """Uniform-panel GL6 nodes on [0, T] with CF values, cached per plan.

    Returns (dt, offsets(6,), weights(6,), cf(npan, 6)) where node (k, m)
    sits at k*dt + offsets[m].
    """
    dt = T / npan
    offs = 0.5 * dt * (_GL_X + 1.0)
    wts = 0.5 * dt * _GL_W
    edges = dt * np.arange(npan)
    tt = (edges[:, None] + offs[None, :]).ravel()
    cf = combo_cf(c, tt).reshape(npan, 6)
    return dt, offs, wts, cf


def _resolution_scale(c, y_arr):
    """Frequency scale the integrand must resolve at each y."""
    _, anchor, k1, k2 = _combo_meta(c)
    return (np.maximum(np.abs(y_arr - k1), np.abs(y_arr - anchor))
            + 2.0 * math.sqrt(k2))


def _npan_for(T, omega_scale):
    raw = int(math.ceil(_PPP * T * omega_scale / (2.0 * math.pi)))
    raw = max(raw, _MIN_PANELS)
    return ((raw + _NPAN_QUANTUM - 1) // _NPAN_QUANTUM) * _NPAN_QUANTUM


def _wynn_vec(S):
    """Wynn epsilon acceleration down each column of S (m sums x n lanes).

    Returns (best estimate, spread) per lane, taken from the even epsilon
    columns where the spread |last - previous| is smallest.
    """
    m, n = S.shape
    best = S[-1].copy()
    best_d = np.abs(S[-1] - S[-2]) if m >= 2 else np.full(n, np.inf)
    pm1 = np.zeros((m + 1, n))
    p0 = S
    k = 0
    while p0.shape[0] >= 2:
        diff = p0[1:] - p0[:-1]
        # a vanished difference means that entry already converged; adding
        # zero keeps the converged value instead of blowing up in 1/diff
        tiny = np.abs(diff) < 1e-300
        p1 = pm1[1:-1] + np.where(tiny, 0.0, 1.0 / np.where(tiny, 1.0, diff))
        k += 1
        if k % 2 == 0 and p1.shape[0] >= 2:
            d = np.abs(p1[-1] - p1[-2])
            upd = d < best_d
            best = np.where(upd, p1[-1], best)
            best_d = np.where(upd, d, best_d)
        pm1, p0 = p0, p1
    return best, best_d


def _assemble(c, T, npan, y, kind):
    """Panel-sum of the Gil-Pelaez integrand over [0, T] for each y.

    Exploits the uniform panel grid: exp(-i t y) factorizes into per-panel
    edge powers (a cumulative product) times six fixed offset phases.
    """
    dt, offs, wts, cf = _plan_nodes(c, T, npan)
    if kind == "cdf":
        tt = dt * np.arange(npan)[:, None] + offs[None, :]
        G = (cf / tt) * wts[None, :]
    else:
        G = cf * wts[None, :]
    out = np.empty(y.size, dtype=np.float64)
    chunk = max(1, int(2_000_000 // max(npan, 1)) or 1)
    take = np.imag if kind == "cdf" else np.real
    for s in range(0, y.size, chunk):
        yc = y[s:s + chunk]
        e_off = np.exp(-1j * offs[:, None] * yc[None, :])         # (6, nc)
        r = np.exp(-1j * dt * yc)                                  # (nc,)
        edge = np.empty((npan, yc.size), dtype=np.complex128)
        edge[0] = 1.0
        if npan > 1:
            np.cumprod(np.broadcast_to(r, (npan - 1, yc.size)), axis=0,
                       out=edge[1:])
        A = G @ e_off                                              # (npan, nc)
        out[s:s + chunk] = take(np.sum(A * edge, axis=0))
    return out


def _tail_sums(c, T, y, omega, kind, base):
    """Cumulative half-period sums of the oscillatory tail beyond T.

    Returns S of shape (TAIL_HALF_PERIODS, n): base + partial integrals
    after each half-period of length pi/omega (per lane).
    """
    nhp = _TAIL_HALF_PERIODS
    npph = _TAIL_PANELS_PER_HP
    # fractional node positions and weights within one half-period
    p = np.arange(nhp * npph)
    lo = p / npph
    frac = (lo[:, None] + (0.5 / npph) * (_GL_X + 1.0)[None, :]).ravel()
    wfrac = np.tile(0.5 / npph * _GL_W, nhp * npph)
    h = math.pi / omega                                            # (n,)
    n = y.size
    vals = np.empty((nhp, n), dtype=np.float64)
    take = np.imag if kind == "cdf" else np.real
    chunk = max(1, int(2_000_000 // frac.size))
    for s in range(0, n, chunk):
        yc = y[s:s + chunk]
        tt = T + frac[:, None] * h[s:s + chunk][None, :]           # (nodes, nc)
        cf = combo_cf(c, tt.ravel()).reshape(tt.shape)
        ig = take(np.exp(-1j * tt * yc[None, :]) * cf)
        if kind == "cdf":
            ig = ig / tt
        ig = ig * (wfrac[:, None] * h[s:s + chunk][None, :])
        hp = ig.reshape(nhp, npph * 6, -1).sum(axis=1)             # (nhp, nc)
        vals[:, s:s + chunk] = hp
    return base[None, :] + np.cumsum(vals, axis=0)


def _gp_values(c, y_arr, kind, settings):
    """Gil-Pelaez integrals (1/pi scaled, before the 1/2 shift) per y."""
    order, anchor, k1, k2 = _combo_meta(c)
    floor = settings.truncation_cf_floor
    out = np.empty(y_arr.size, dtype=np.float64)

    T_fast = _truncation_T(c, floor)
    if T_fast is not None:
        om = _resolution_scale(c, y_arr)
        npan = _npan_for(T_fast, float(np.max(om)))
        if 6 * npan > settings.max_nodes:
            raise ConvergenceError(
                f"resolving the integrand needs {6 * npan} CF nodes, more "
                f"than max_nodes={settings.max_nodes}"
            )
        return _assemble(c, T_fast, npan, y_arr, kind)

    # slow path: truncation is unreachable, ride the oscillation instead
    omega = np.abs(y_arr - anchor)
    if np.any(omega < _OMEGA_FLOOR):
        raise ConvergenceError(
            "evaluation point coincides with the CF phase anchor "
            f"({anchor!r}); the oscillatory tail cannot be resolved there"
        )
    onset = _asym_onset(c)
    T_req = np.maximum(onset, _SLOW_T_OSC / omega)
    # group lanes by power-of-two T so each group shares one cached plan
    T_grp = 2.0 ** np.ceil(np.log2(T_req))
    for Tg in np.unique(T_grp):
        idx = np.flatnonzero(T_grp == Tg)
        yg = y_arr[idx]
        og = omega[idx]
        om_scale = _resolution_scale(c, yg)
        npan = _npan_for(float(Tg), float(np.max(om_scale)))
        budget = 6 * npan + 6 * _TAIL_HALF_PERIODS * _TAIL_PANELS_PER_HP
        if budget > settings.max_nodes:
            raise ConvergenceError(
                f"resolving the integrand needs {budget} CF nodes, more "
                f"than max_nodes={settings.max_nodes}"
            )
        base = _assemble(c, float(Tg), npan, yg, kind)
        S = _tail_sums(c, float(Tg), yg, og, kind, base)
        val, spread = _wynn_vec(S)
        if np.any(spread > 1e-6):
            raise ConvergenceError(
                "oscillatory tail acceleration did not converge "
                f"(worst spread {float(np.max(spread)):.3g})"
            )
        out[idx] = val
    return out


# ---------------------------------------------------------------------------
# public cdf / pdf / quantile
# ---------------------------------------------------------------------------

def _validated_y(arr, what):
    if np.any(np.isnan(arr)) or np.any(np.isinf(arr)):
        raise DomainError(f"{what} requires finite real y")


def combo_cdf(c, y, settings=None):
    """Distribution function of the combination, clipped into [0, 1]."""
    c = _as_combo(c)
    settings = _DEFAULT_SETTINGS if settings is None else settings
    if not isinstance(settings, QuadratureSettings):
        raise DomainError(f"expected QuadratureSettings, got {settings!r}")
    scalar = np.ndim(y) == 0
    arr = np.atleast_1d(np.asarray(y, dtype=np.float64))
    _validated_y(arr, "combo_cdf")
    vals = _gp_values(c, arr.ravel(), "cdf", settings)
    res = np.clip(0.5 - vals / math.pi, 0.0, 1.0).reshape(arr.shape)
    return float(res[0]) if scalar else res.reshape(np.shape(y))


def combo_pdf(c, y, settings=None):
    """Density of the combination.

    Values are accurate to about ``settings.abs_tol``; tiny negative
    results (within ``-abs_tol``, quadrature noise around zero density)
    are reported as computed rather than masked.
    """
    c = _as_combo(c)
    settings = _DEFAULT_SETTINGS if settings is None else settings
    if not isinstance(settings, QuadratureSettings):
        raise DomainError(f"expected QuadratureSettings, got {settings!r}")
    scalar = np.ndim(y) == 0
    arr = np.atleast_1d(np.asarray(y, dtype=np.float64))
    _validated_y(arr, "combo_pdf")
    vals = _gp_values(c, arr.ravel(), "pdf", settings) / math.pi
    res = vals.reshape(arr.shape)
    return float(res[0]) if scalar else res.reshape(np.shape(y))


def combo_quantile(c, p, settings=None):
    """The y with combo_cdf(c, y) = p for 0 < p < 1.

    Bisection on a two-sided bracket around the mean; stops once the cdf at
    the midpoint is within ``2 * abs_tol`` of p.
    """
    c = _as_combo(c)
    settings = _DEFAULT_SETTINGS if settings is None else settings
    if not isinstance(settings, QuadratureSettings):
        raise DomainError(f"expected QuadratureSettings, got {settings!r}")
    scalar = np.ndim(p) == 0
    parr = np.atleast_1d(np.asarray(p, dtype=np.float64))
    if np.any(np.isnan(parr)) or np.any(parr <= 0.0) or np.any(parr >= 1.0):
        raise DomainError("combo_quantile requires 0 < p < 1")
    _, _, k1, k2 = _combo_meta(c)
    sd = math.sqrt(k2)

    def cdf1(yv):
        return combo_cdf(c, float(yv), settings)

    out = np.empty(parr.shape, dtype=np.float64)
    for i, pi in enumerate(parr.ravel()):
        lo, hi = k1 - 20.0 * sd, k1 + 20.0 * sd
        for _ in range(200):
            if cdf1(lo) <= pi:
                break
            lo -= (hi - lo)
        else:
            raise ConvergenceError("combo_quantile: bracketing failed (low)")
        for _ in range(200):
            if cdf1(hi) >= pi:
                break
            hi += (hi - lo)
        else:
            raise ConvergenceError("combo_quantile: bracketing failed (high)")
        val = None
        for _ in range(200):
            mid = 0.5 * (lo + hi)
            fm = cdf1(mid)
            if abs(fm - pi) <= 2.0 * settings.abs_tol:
                val = mid
                break
            if fm < pi:
                lo = mid
            else:
                hi = mid
        if val is None:
            raise ConvergenceError(
                "combo_quantile: bisection exhausted before matching p "
                "within 2*abs_tol"
            )
        out.ravel()[i] = val
    return float(out.ravel()[0]) if scalar else out.reshape(np.shape(p))
