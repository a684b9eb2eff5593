"""Numerical kernels, NumPy edition (the always-available reference backend).

Every kernel here has an identical-algorithm twin in the compiled backend
(``_ckernels``); ``lwchi2._backend`` exports whichever set imported
successfully.  Kernels are array-first: they take and return ``float64`` /
``complex128`` NumPy arrays and perform no argument validation — the public
wrappers in :mod:`lwchi2.specfun` own the domain checks.
"""
import math

import numpy as np

from ..errors import ConvergenceError

NAME = "python"

# ---------------------------------------------------------------------------
# complex log-gamma: Lanczos approximation, g = 7, 15 partial-fraction terms.
# Coefficients obtained by solving the interpolation system at the integer
# nodes x = 0..14 in 90-digit arithmetic (tools/gen_lanczos_coeffs.py).
# ---------------------------------------------------------------------------
_LANCZOS_COEF = (
    1.0,
    676.5203681218835,
    -1259.1392167222818,
    771.3234287754377,
    -176.61502914598978,
    12.507343225028745,
    -0.13857103233328225,
    1.0091126294731374e-05,
    -3.434584225253105e-07,
    8.359337835712596e-07,
    -8.597755644539608e-07,
    6.046497338494928e-07,
    -2.9113287278906135e-07,
    8.589129313568227e-08,
    -1.1646065639867852e-08,
)
_LOG_SQRT_2PI = 0.9189385332046727417803297364
_LOG_PI = 1.1447298858494001741434273513


def _lanczos_loggamma(z):
    """log Gamma on Re(z) >= 0.5 (complex array in, complex array out)."""
    x = z - 1.0
    acc = np.full_like(z, _LANCZOS_COEF[0])
    for k in range(1, 15):
        acc += _LANCZOS_COEF[k] / (x + k)
    w = x + 7.5
    return _LOG_SQRT_2PI + (x + 0.5) * np.log(w) - w + np.log(acc)


def loggamma_complex(z):
    """Principal-branch log Gamma for complex array ``z`` (poles excluded).

    Reflection formula below Re(z) = 0.5, written with the upper-half-plane
    expansion of log sin(pi z) so the result stays on the principal branch,
    and mapped to the lower half plane by conjugation symmetry.
    """
    z = np.asarray(z, dtype=np.complex128)
    refl = z.real < 0.5
    zu = np.where(z.imag >= 0.0, z, np.conj(z))
    zz = np.where(refl, 1.0 - zu, z)
    lg = _lanczos_loggamma(zz)
    if np.any(refl):
        # log sin(pi z) = log(1/2) + i pi/2 - i pi z + log1p(-exp(2 i pi z)),
        # valid and continuous for Im(z) >= 0.
        logsin = (
            complex(math.log(0.5), 0.5 * math.pi)
            - 1j * math.pi * zu
            + np.log1p(-np.exp(2j * math.pi * zu))
        )
        lg_refl = _LOG_PI - logsin - lg
        lg_refl = np.where(z.imag >= 0.0, lg_refl, np.conj(lg_refl))
        lg = np.where(refl, lg_refl, lg)
    # exactly real input with Gamma(x) > 0 has exactly real log-gamma
    real_pos = (z.imag == 0.0) & (z.real > 0.0)
    if np.any(real_pos):
        lg = np.where(real_pos, lg.real + 0.0j, lg)
    return lg


def lgamma_real(x):
    """log Gamma for a positive real scalar."""
    return math.lgamma(x)


_lgamma_vec = np.vectorize(math.lgamma, otypes=[np.float64])


def lgamma_real_arr(x):
    """log Gamma for an array of positive reals."""
    return _lgamma_vec(x)


# ---------------------------------------------------------------------------
# Lambert W: both real branches, plus the two-branch pair solver used by the
# distribution code.  The pair solver works in v = x/x* - 1 coordinates where
# the defining equation is v - log1p(v) = delta, which keeps full precision
# arbitrarily close to the branch point (delta -> 0).
# ---------------------------------------------------------------------------
# Branch-point series v(p) = ±p + p^2/3 ± 11 p^3/72 + ... with
# p = sqrt(-2 expm1(-delta)); upper signs give v_U, lower give v_L.
_BP_C2 = 1.0 / 3.0
_BP_C3 = 11.0 / 72.0
_BP_C4 = 43.0 / 540.0
_BP_C5 = 769.0 / 17280.0
_BP_C6 = 221.0 / 8505.0
_BP_C7 = 680863.0 / 43545600.0

_SERIES_FINAL_P = 0.02   # below this the 7-term series is already at 1e-14
_SERIES_SEED_P = 1.0     # below this the series still seeds Newton reliably
_DELTA_LOWER_SEED_FINAL = 18.0  # beyond this the closed seed a(1+a),
#                                 a = exp(-1-delta), has relative error
#                                 1.5*u^2 < 5e-17 and beats a Newton step


def _series_v(p, sgn):
    """v(p) for one branch: sgn=+1 upper, sgn=-1 lower."""
    # Horner in p with per-order signs sgn^k
    return p * sgn * (
        1.0
        + p * sgn * (_BP_C2
        + p * sgn * (_BP_C3
        + p * sgn * (_BP_C4
        + p * sgn * (_BP_C5
        + p * sgn * (_BP_C6
        + p * sgn * _BP_C7)))))
    )


def _newton_u(u, d, mask):
    """Newton refinement of u - 1 - log(u) = d in u coordinates.

    Multiplicative updates keep full relative precision for tiny u; entries
    outside ``mask`` are left untouched.
    """
    v = np.where(mask, u, 2.0)  # placeholder keeps the masked lanes finite
    with np.errstate(invalid="ignore", divide="ignore", over="ignore"):
        for _ in range(5):
            f = (v - 1.0) - np.log(v) - d
            v = v - f * v / (v - 1.0)
    return np.where(mask, v, u)


def branch_pair(delta):
    """Both solutions of u - 1 - log(u) = delta, vectorized.

    Returns ``(u_lower, u_upper, v_lower, v_upper)`` where ``u = x / x_star``
    is the root scaled by the transform's minimum location and ``v = u - 1``.
    ``u_lower`` lies in [0, 1] (kept to full relative precision all the way
    into the denormal range), ``u_upper`` in [1, inf).  The ``v`` views are
    the accurate small-offset forms near the branch point (delta -> 0).
    ``delta`` must be nonnegative.
    """
    d = np.asarray(delta, dtype=np.float64)
    # p = sqrt(2 delta) to leading order, computed without cancellation
    p = np.sqrt(-2.0 * np.expm1(-d))
    sL = _series_v(p, -1.0)
    sU = _series_v(p, 1.0)
    small = p <= _SERIES_FINAL_P

    # --- lower branch: u in [0, 1] ---
    a = np.exp(-1.0 - d)
    seed_far = a * (1.0 + a)          # relative error ~1.5 u^2
    far = d > _DELTA_LOWER_SEED_FINAL
    uL = np.where(p <= _SERIES_SEED_P, 1.0 + sL, seed_far)
    mid = ~(small | far)
    if np.any(mid):
        uL = _newton_u(uL, d, mid)
    uL = np.where(far, seed_far, uL)
    vL = np.where(small, sL, uL - 1.0)

    # --- upper branch: u in [1, inf) ---
    r = 1.0 + d
    seed_big = r + np.log(r + np.log(np.maximum(r, 1.0)))
    uU = np.where(p <= _SERIES_SEED_P, 1.0 + sU, seed_big)
    if np.any(~small):
        uU = _newton_u(uU, d, ~small)
    vU = np.where(small, sU, uU - 1.0)
    return uL, uU, vL, vU


_INV_E = 0.36787944117144232159553  # 1/e


def lambert_w0(z, tol=1e-14):
    """Principal real branch W0(z) for scalar z >= -1/e."""
    if z == 0.0:
        return 0.0
    if z < 0.0:
        # z in [-1/e, 0): map to the pair solver's delta coordinate
        d = -1.0 - math.log(-z)
        if d < 0.0:
            d = 0.0
        uL = branch_pair(np.float64(d))[0]
        return -float(uL)
    # z > 0: Halley iteration
    if z <= math.e:
        w = math.log1p(z)
        for _ in range(50):
            ew = math.exp(w)
            f = w * ew - z
            denom = ew * (w + 1.0) - f * (w + 2.0) / (2.0 * (w + 1.0))
            wn = w - f / denom
            if abs(wn - w) <= tol * max(1.0, abs(wn)):
                return wn
            w = wn
        raise ConvergenceError("lambert_w0: Halley iteration did not converge")
    # large z: iterate on the overflow-free form w + log(w) = log(z)
    lz = math.log(z)
    w = lz - math.log(lz)
    for _ in range(50):
        f = w + math.log(w) - lz
        fp = 1.0 + 1.0 / w
        fpp = -1.0 / (w * w)
        wn = w - f / (fp - 0.5 * f * fpp / fp)
        if abs(wn - w) <= tol * max(1.0, abs(wn)):
            return wn
        w = wn
    raise ConvergenceError("lambert_w0: Halley iteration did not converge")


def lambert_wm1(z, tol=1e-14):
    """Lower real branch W-1(z) for scalar z in [-1/e, 0)."""
    d = -1.0 - math.log(-z)
    if d < 0.0:
        d = 0.0
    uU = branch_pair(np.float64(d))[1]
    return -float(uU)


def lambert_w0_arr(z, tol=1e-14):
    z = np.asarray(z, dtype=np.float64)
    out = np.empty_like(z)
    flat = out.reshape(-1)
    zf = z.reshape(-1)
    neg = zf < 0.0
    if np.any(neg):
        d = np.maximum(-1.0 - np.log(-zf[neg]), 0.0)
        flat[neg] = -branch_pair(d)[0]
    pos = ~neg
    if np.any(pos):
        flat[pos] = [lambert_w0(float(v), tol) for v in zf[pos]]
    return out


def lambert_wm1_arr(z, tol=1e-14):
    z = np.asarray(z, dtype=np.float64)
    d = np.maximum(-1.0 - np.log(-z), 0.0)
    return -branch_pair(d)[1]


# ---------------------------------------------------------------------------
# regularized lower incomplete gamma P(a, x): power series below x = a+1,
# Lentz continued fraction above, prefactor in log space.
# ---------------------------------------------------------------------------
_PG_EPS = 2.220446049250313e-16
_PG_TINY = 1e-300
_PG_STABLE_A = 30.0


def _pg_itmax(a):
    return 400 + int(20.0 * math.sqrt(max(a, 1.0)))


def _stirling_corr(a):
    """lgamma(a) - [(a - 1/2) log a - a + log(2 pi)/2], for a >= 30."""
    r = 1.0 / a
    r2 = r * r
    return r * (
        1.0 / 12.0
        - r2 * (1.0 / 360.0
        - r2 * (1.0 / 1260.0
        - r2 * (1.0 / 1680.0
        - r2 / 1188.0)))
    )


def _g_log1p_minus_t(t):
    """log1p(t) - t without cancellation for scalar t > -1."""
    if abs(t) > 1.0 / 3.0:
        return math.log1p(t) - t
    s = t / (2.0 + t)
    s2 = s * s
    acc = 1.0 / 27.0
    for k in range(12, 0, -1):
        acc = 1.0 / (2.0 * k + 1.0) + s2 * acc
    return -t * t / (2.0 + t) + 2.0 * s * s2 * acc


def _pg_lnpre(a, x):
    """log of the prefactor x^a e^-x / Gamma(a), cancellation-safe."""
    if a < _PG_STABLE_A:
        return a * math.log(x) - x - math.lgamma(a)
    t = x / a - 1.0
    g = _g_log1p_minus_t(t)
    return a * g + 0.5 * math.log(a) - _LOG_SQRT_2PI - _stirling_corr(a)


def pgamma(a, x):
    """P(a, x) for positive scalars (x >= 0)."""
    if x == 0.0:
        return 0.0
    if math.isinf(x):
        return 1.0
    lnpre = _pg_lnpre(a, x)
    itmax = _pg_itmax(a)
    if x < a + 1.0:
        ap = a
        term = 1.0 / a
        total = term
        for _ in range(itmax):
            ap += 1.0
            term *= x / ap
            total += term
            if abs(term) < abs(total) * _PG_EPS:
                p = total * math.exp(lnpre)
                return min(max(p, 0.0), 1.0)
        raise ConvergenceError("pgamma: series did not converge")
    b = x + 1.0 - a
    c = 1.0 / _PG_TINY
    dd = 1.0 / b
    h = dd
    for i in range(1, itmax + 1):
        an = -i * (i - a)
        b += 2.0
        dd = an * dd + b
        if abs(dd) < _PG_TINY:
            dd = _PG_TINY
        c = b + an / c
        if abs(c) < _PG_TINY:
            c = _PG_TINY
        dd = 1.0 / dd
        delt = dd * c
        h *= delt
        if abs(delt - 1.0) < _PG_EPS:
            q = math.exp(lnpre) * h
            return min(max(1.0 - q, 0.0), 1.0)
    raise ConvergenceError("pgamma: continued fraction did not converge")


def _pg_lnpre_arr(a, x):
    """Vectorized cancellation-safe log prefactor (a > 0, x > 0 finite)."""
    out = np.empty(a.shape, dtype=np.float64)
    naive = a < _PG_STABLE_A
    if np.any(naive):
        av, xv = a[naive], x[naive]
        out[naive] = av * np.log(xv) - xv - _lgamma_vec(av)
    stable = ~naive
    if np.any(stable):
        av, xv = a[stable], x[stable]
        t = xv / av - 1.0
        s = t / (2.0 + t)
        s2 = s * s
        acc = np.full_like(s, 1.0 / 27.0)
        for k in range(12, 0, -1):
            acc = 1.0 / (2.0 * k + 1.0) + s2 * acc
        g_ser = -t * t / (2.0 + t) + 2.0 * s * s2 * acc
        with np.errstate(invalid="ignore"):
            g_dir = np.log1p(t) - t
        g = np.where(np.abs(t) <= 1.0 / 3.0, g_ser, g_dir)
        out[stable] = av * g + 0.5 * np.log(av) - _LOG_SQRT_2PI - _stirling_corr(av)
    return out


def pgamma_arr(a, x):
    """P(a, x) broadcast over arrays (a > 0, x >= 0)."""
    a = np.asarray(a, dtype=np.float64)
    x = np.asarray(x, dtype=np.float64)
    a, x = np.broadcast_arrays(a, x)
    out = np.empty(a.shape, dtype=np.float64)
    af = a.reshape(-1)
    xf = x.reshape(-1)
    of = out.reshape(-1)

    of[xf == 0.0] = 0.0
    of[np.isinf(xf)] = 1.0
    of[np.isnan(xf)] = np.nan

    todo = (xf > 0.0) & np.isfinite(xf)
    if not np.any(todo):
        return out
    lnpre = _pg_lnpre_arr(af[todo], xf[todo])
    itmax = _pg_itmax(float(np.max(af[todo])))

    sel = np.flatnonzero(todo)
    ser = xf[sel] < af[sel] + 1.0
    res = np.empty(sel.size, dtype=np.float64)

    # Both iterations below compact their working arrays to the still-active
    # lanes each step, so total work is sum-of-iterations rather than
    # (max iterations) x (array size).

    # --- power series block ---
    if np.any(ser):
        aa = af[sel][ser]
        xx = xf[sel][ser]
        blk = np.empty(aa.size, dtype=np.float64)
        loc = np.arange(aa.size)
        ap = aa.copy()
        term = 1.0 / aa
        total = term.copy()
        for _ in range(itmax):
            ap += 1.0
            term *= xx / ap
            total += term
            done = np.abs(term) < np.abs(total) * _PG_EPS
            if done.any():
                blk[loc[done]] = total[done]
                keep = ~done
                if not keep.any():
                    loc = loc[:0]
                    break
                loc = loc[keep]
                ap = ap[keep]
                term = term[keep]
                total = total[keep]
                xx = xx[keep]
        if loc.size:
            raise ConvergenceError("pgamma: series did not converge")
        res[ser] = blk * np.exp(lnpre[ser])

    # --- continued fraction block ---
    cfm = ~ser
    if np.any(cfm):
        aa = af[sel][cfm]
        xx = xf[sel][cfm]
        blk = np.empty(aa.size, dtype=np.float64)
        loc = np.arange(aa.size)
        b = xx + 1.0 - aa
        c = np.full(aa.shape, 1.0 / _PG_TINY)
        d = 1.0 / b
        h = d.copy()
        for i in range(1, itmax + 1):
            an = -i * (i - aa)
            b = b + 2.0
            d = an * d + b
            np.copyto(d, _PG_TINY, where=np.abs(d) < _PG_TINY)
            c = b + an / c
            np.copyto(c, _PG_TINY, where=np.abs(c) < _PG_TINY)
            d = 1.0 / d
            delt = d * c
            h *= delt
            done = np.abs(delt - 1.0) < _PG_EPS
            if done.any():
                blk[loc[done]] = h[done]
                keep = ~done
                if not keep.any():
                    loc = loc[:0]
                    break
                loc = loc[keep]
                aa = aa[keep]
                b = b[keep]
                c = c[keep]
                d = d[keep]
                h = h[keep]
        if loc.size:
            raise ConvergenceError("pgamma: continued fraction did not converge")
        res[cfm] = 1.0 - np.exp(lnpre[cfm]) * blk

    of[sel] = np.clip(res, 0.0, 1.0)
    return out


# ---------------------------------------------------------------------------
# polygamma psi^(m): argument recurrence to x >= 10, then the Bernoulli
# asymptotic expansion with adaptive truncation.
# ---------------------------------------------------------------------------
_BERNOULLI_2K = (
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
    -3617.0 / 510.0,
    43867.0 / 798.0,
    -174611.0 / 330.0,
    854513.0 / 138.0,
    -236364091.0 / 2730.0,
    8553103.0 / 6.0,
    -23749461029.0 / 870.0,
    8615841276005.0 / 14322.0,
    -7709321041217.0 / 510.0,
    2577687858367.0 / 6.0,
    -26315271553053477373.0 / 1919190.0,
    2929993913841559.0 / 6.0,
    -261082718496449122051.0 / 13530.0,
)
_PG_SHIFT_X = 10.0


def polygamma_scalar(m, x):
    """psi^(m)(x) for integer 0 <= m <= 12 and real x > 0."""
    shift = 0.0
    mf = math.factorial(m)
    sgn_m = -1.0 if (m % 2) else 1.0
    while x < _PG_SHIFT_X:
        shift += sgn_m * mf / x ** (m + 1)
        x += 1.0
    # asymptotic expansion at x >= 10
    if m == 0:
        total = math.log(x) - 0.5 / x
        x2 = 1.0 / (x * x)
        pw = x2
        for k in range(1, len(_BERNOULLI_2K) + 1):
            t = _BERNOULLI_2K[k - 1] * pw / (2.0 * k)
            total -= t
            if abs(t) < abs(total) * 1e-17:
                break
            pw *= x2
        return total - shift
    lead = math.factorial(m - 1) / x ** m + 0.5 * mf / x ** (m + 1)
    total = lead
    x2 = 1.0 / (x * x)
    pw = x ** (-m) * x2
    ratio = 1.0
    prev = math.inf
    for k in range(1, len(_BERNOULLI_2K) + 1):
        # (2k + m - 1)! / (2k)!
        ratio = 1.0
        for j in range(2 * k + 1, 2 * k + m):
            ratio *= j
        t = _BERNOULLI_2K[k - 1] * ratio * pw
        if abs(t) > prev:
            break
        total += t
        prev = abs(t)
        if abs(t) < abs(total) * 1e-17:
            break
        pw *= x2
    sgn = 1.0 if (m % 2) else -1.0  # (-1)^(m-1)
    return sgn * total - shift
