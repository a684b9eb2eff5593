"""Special functions backing the distribution machinery.

All functions accept scalars or array-likes and return a Python ``float``
(or ``complex``) for 0-d input and an ``ndarray`` otherwise.  Domain
violations raise :class:`~lwchi2.errors.DomainError`; NaN input counts as a
domain violation rather than propagating silently.

The numerical work lives in :mod:`lwchi2._backend`; this module owns the
argument validation and the scalar/array calling convention.
"""
import math
import numbers

import numpy as np

from . import _backend as _K
from .errors import DomainError

__all__ = [
    "lambert_w0",
    "lambert_wm1",
    "log_gamma_real",
    "log_gamma_complex",
    "reg_lower_inc_gamma",
    "gen_inc_gamma",
    "polygamma",
]

# Nearest double to -1/e (the literal below is its exact decimal repr); the
# true branch point lies a fraction of an ulp above it.
NEG_INV_E = -0.36787944117144233


def _check_tol(tol):
    if not isinstance(tol, numbers.Real) or not (0.0 < float(tol) <= 1e-6):
        raise DomainError(f"tol must be a small positive real, got {tol!r}")
    return float(tol)


def lambert_w0(z, tol=1e-14):
    """Principal real branch of the Lambert W function.

    Defined for ``z >= -1/e``; satisfies ``W exp(W) = z`` with residual at
    most ``tol * max(1, |z|)``.
    """
    tol = _check_tol(tol)
    if np.ndim(z) == 0:
        z = float(z)
        if math.isnan(z) or z < NEG_INV_E:
            raise DomainError(f"lambert_w0 requires z >= -1/e, got {z!r}")
        return float(_K.lambert_w0(z, tol))
    arr = np.asarray(z, dtype=np.float64)
    if np.any(np.isnan(arr)) or np.any(arr < NEG_INV_E):
        raise DomainError("lambert_w0 requires z >= -1/e for every element")
    return _K.lambert_w0_arr(arr, tol)


def lambert_wm1(z, tol=1e-14):
    """Lower real branch of the Lambert W function.

    Defined for ``-1/e <= z < 0``; satisfies ``W exp(W) = z`` with residual
    at most ``tol * max(1, |z|)``.
    """
    tol = _check_tol(tol)
    if np.ndim(z) == 0:
        z = float(z)
        if math.isnan(z) or z < NEG_INV_E or z >= 0.0:
            raise DomainError(
                f"lambert_wm1 requires -1/e <= z < 0, got {z!r}"
            )
        return float(_K.lambert_wm1(z, tol))
    arr = np.asarray(z, dtype=np.float64)
    if np.any(np.isnan(arr)) or np.any(arr < NEG_INV_E) or np.any(arr >= 0.0):
        raise DomainError("lambert_wm1 requires -1/e <= z < 0 for every element")
    return _K.lambert_wm1_arr(arr, tol)


def log_gamma_real(x):
    """Natural log of the gamma function for real ``x > 0``."""
    if np.ndim(x) == 0:
        x = float(x)
        if math.isnan(x) or x <= 0.0:
            raise DomainError(f"log_gamma_real requires x > 0, got {x!r}")
        return _K.lgamma_real(x)
    arr = np.asarray(x, dtype=np.float64)
    if np.any(np.isnan(arr)) or np.any(arr <= 0.0):
        raise DomainError("log_gamma_real requires x > 0 for every element")
    return _K.lgamma_real_arr(arr)


def _check_gamma_poles(arr):
    on_axis = arr.imag == 0.0
    if np.any(on_axis):
        re = arr.real
        pole = on_axis & (re <= 0.0) & (re == np.floor(re))
        if np.any(pole):
            raise DomainError(
                "log_gamma_complex is undefined at nonpositive integers"
            )


def log_gamma_complex(z):
    """Principal branch of log Gamma for complex ``z`` away from the poles.

    Imaginary part is continuous on the upper/lower half planes and the
    positive real axis; conjugate symmetry ``loggamma(conj z) = conj
    loggamma(z)`` holds by construction.
    """
    if np.ndim(z) == 0:
        arr = np.asarray(complex(z), dtype=np.complex128)
        if np.isnan(arr.real) or np.isnan(arr.imag):
            raise DomainError("log_gamma_complex requires finite z")
        _check_gamma_poles(arr.reshape(1))
        return complex(_K.loggamma_complex(arr))
    arr = np.asarray(z, dtype=np.complex128)
    if np.any(np.isnan(arr.real)) or np.any(np.isnan(arr.imag)):
        raise DomainError("log_gamma_complex requires finite z")
    _check_gamma_poles(arr)
    return _K.loggamma_complex(arr)


def reg_lower_inc_gamma(a, x):
    """Regularized lower incomplete gamma function P(a, x).

    ``a > 0`` and ``x >= 0`` (``x = +inf`` allowed and gives 1).  Broadcasts
    over both arguments.
    """
    if np.ndim(a) == 0 and np.ndim(x) == 0:
        a = float(a)
        x = float(x)
        if math.isnan(a) or a <= 0.0:
            raise DomainError(f"reg_lower_inc_gamma requires a > 0, got {a!r}")
        if math.isnan(x) or x < 0.0:
            raise DomainError(f"reg_lower_inc_gamma requires x >= 0, got {x!r}")
        return _K.pgamma(a, x)
    aa = np.asarray(a, dtype=np.float64)
    xx = np.asarray(x, dtype=np.float64)
    if np.any(np.isnan(aa)) or np.any(aa <= 0.0):
        raise DomainError("reg_lower_inc_gamma requires a > 0 for every element")
    if np.any(np.isnan(xx)) or np.any(xx < 0.0):
        raise DomainError("reg_lower_inc_gamma requires x >= 0 for every element")
    return _K.pgamma_arr(aa, xx)


def gen_inc_gamma(a, lo, hi):
    """Probability mass of a Gamma(a, 1) variable on the interval [lo, hi].

    Equals ``P(a, hi) - P(a, lo)`` clipped into [0, 1]; requires
    ``0 <= lo <= hi`` (``hi = +inf`` allowed).
    """
    if np.ndim(a) == 0 and np.ndim(lo) == 0 and np.ndim(hi) == 0:
        a = float(a)
        lo = float(lo)
        hi = float(hi)
        if math.isnan(a) or a <= 0.0:
            raise DomainError(f"gen_inc_gamma requires a > 0, got {a!r}")
        if math.isnan(lo) or math.isnan(hi) or lo < 0.0 or lo > hi:
            raise DomainError(
                f"gen_inc_gamma requires 0 <= lo <= hi, got lo={lo!r} hi={hi!r}"
            )
        return min(max(_K.pgamma(a, hi) - _K.pgamma(a, lo), 0.0), 1.0)
    aa = np.asarray(a, dtype=np.float64)
    ll = np.asarray(lo, dtype=np.float64)
    hh = np.asarray(hi, dtype=np.float64)
    if np.any(np.isnan(aa)) or np.any(aa <= 0.0):
        raise DomainError("gen_inc_gamma requires a > 0 for every element")
    if (np.any(np.isnan(ll)) or np.any(np.isnan(hh))
            or np.any(ll < 0.0) or np.any(ll > hh)):
        raise DomainError("gen_inc_gamma requires 0 <= lo <= hi elementwise")
    return np.clip(_K.pgamma_arr(aa, hh) - _K.pgamma_arr(aa, ll), 0.0, 1.0)


def polygamma(m, x):
    """Polygamma function psi^(m)(x) for integer order 0 <= m <= 12, x > 0."""
    if not isinstance(m, numbers.Integral) or isinstance(m, bool):
        raise DomainError(f"polygamma order must be an integer, got {m!r}")
    m = int(m)
    if not 0 <= m <= 12:
        raise DomainError(f"polygamma order must be in [0, 12], got {m}")
    if np.ndim(x) == 0:
        x = float(x)
        if math.isnan(x) or x <= 0.0:
            raise DomainError(f"polygamma requires x > 0, got {x!r}")
        return _K.polygamma_scalar(m, x)
    arr = np.asarray(x, dtype=np.float64)
    if np.any(np.isnan(arr)) or np.any(arr <= 0.0):
        raise DomainError("polygamma requires x > 0 for every element")
    out = np.empty(arr.shape, dtype=np.float64)
    flat_in = arr.reshape(-1)
    flat_out = out.reshape(-1)
    for i in range(flat_in.size):
        flat_out[i] = _K.polygamma_scalar(m, float(flat_in[i]))
    return out
