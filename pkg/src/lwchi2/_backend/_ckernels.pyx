# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Numerical kernels, compiled edition.

Identical algorithms to ``_pykernels`` (branch-point series + u-space Newton
for the two Lambert W branches, log-space power series / Lentz continued
fraction for the regularized incomplete gamma, Lanczos log-gamma with a
principal-branch reflection, Bernoulli asymptotics for polygamma), written
as scalar C loops instead of masked NumPy passes.
"""
import numpy as np

from ..errors import ConvergenceError

from libc.math cimport (INFINITY, atan2, cos, exp, expm1, fabs, hypot,
                        isfinite, isinf, isnan, lgamma as c_lgamma, log,
                        log1p, sin, sqrt)

NAME = "c"

cdef double PI = 3.141592653589793238462643383
cdef double LOG_SQRT_2PI = 0.9189385332046727417803297364
cdef double LOG_PI = 1.1447298858494001741434273513
cdef double E_CONST = 2.718281828459045235360287471
cdef double PG_EPS = 2.220446049250313e-16
cdef double PG_TINY = 1e-300
cdef double PG_STABLE_A = 30.0
cdef double PG_SHIFT_X = 10.0

# ---------------------------------------------------------------------------
# complex helpers (principal branches)
# ---------------------------------------------------------------------------

cdef inline double complex zmake(double re, double im) noexcept:
    return re + im * 1j

cdef inline double complex zlog(double complex z) noexcept:
    return zmake(log(hypot(z.real, z.imag)), atan2(z.imag, z.real))

cdef inline double complex zexp(double complex z) noexcept:
    cdef double m = exp(z.real)
    return zmake(m * cos(z.imag), m * sin(z.imag))

cdef inline double complex zlog1p(double complex z) noexcept:
    # log(1 + z) without cancellation: real part via log1p of
    # 2 Re z + |z|^2, imaginary part via atan2.
    cdef double re = 0.5 * log1p(2.0 * z.real + z.real * z.real + z.imag * z.imag)
    cdef double im = atan2(z.imag, 1.0 + z.real)
    return zmake(re, im)

# ---------------------------------------------------------------------------
# complex log-gamma: Lanczos approximation, g = 7, 15 partial-fraction terms
# (same frozen coefficients as the NumPy edition).
# ---------------------------------------------------------------------------

cdef double[15] LANCZOS_COEF
LANCZOS_COEF[0] = 1.0
LANCZOS_COEF[1] = 676.5203681218835
LANCZOS_COEF[2] = -1259.1392167222818
LANCZOS_COEF[3] = 771.3234287754377
LANCZOS_COEF[4] = -176.61502914598978
LANCZOS_COEF[5] = 12.507343225028745
LANCZOS_COEF[6] = -0.13857103233328225
LANCZOS_COEF[7] = 1.0091126294731374e-05
LANCZOS_COEF[8] = -3.434584225253105e-07
LANCZOS_COEF[9] = 8.359337835712596e-07
LANCZOS_COEF[10] = -8.597755644539608e-07
LANCZOS_COEF[11] = 6.046497338494928e-07
LANCZOS_COEF[12] = -2.9113287278906135e-07
LANCZOS_COEF[13] = 8.589129313568227e-08
LANCZOS_COEF[14] = -1.1646065639867852e-08


cdef double complex _lanczos_lg(double complex z) noexcept:
    """log Gamma on Re(z) >= 0.5."""
    cdef double complex x = z - 1.0
    cdef double complex acc = zmake(LANCZOS_COEF[0], 0.0)
    cdef double complex w
    cdef int k
    for k in range(1, 15):
        acc = acc + LANCZOS_COEF[k] / (x + k)
    w = x + 7.5
    return LOG_SQRT_2PI + (x + 0.5) * zlog(w) - w + zlog(acc)


cdef double complex _lgamma_c(double complex z) noexcept:
    """Principal-branch log Gamma (poles excluded by the callers).

    Reflection formula below Re(z) = 0.5, written with the
    upper-half-plane expansion of log sin(pi z) so the result stays on
    the principal branch, and mapped to the lower half plane by
    conjugation symmetry.
    """
    cdef bint refl = z.real < 0.5
    cdef bint lower = z.imag < 0.0
    cdef double complex zu, lg, logsin
    if not refl:
        lg = _lanczos_lg(z)
    else:
        zu = zmake(z.real, -z.imag) if lower else z
        lg = _lanczos_lg(1.0 - zu)
        # log sin(pi z) = log(1/2) + i pi/2 - i pi z + log1p(-exp(2 i pi z)),
        # valid and continuous for Im(z) >= 0.
        logsin = (zmake(log(0.5), 0.5 * PI)
                  - zmake(0.0, PI) * zu
                  + zlog1p(-zexp(zmake(0.0, 2.0 * PI) * zu)))
        lg = LOG_PI - logsin - lg
        if lower:
            lg = zmake(lg.real, -lg.imag)
    # exactly real input with Gamma(x) > 0 has exactly real log-gamma
    if z.imag == 0.0 and z.real > 0.0:
        lg = zmake(lg.real, 0.0)
    return lg


def loggamma_complex(z):
    """Principal-branch log Gamma for complex array ``z`` (poles excluded)."""
    arr = np.asarray(z, dtype=np.complex128)
    out = np.empty(arr.shape, dtype=np.complex128)
    cdef const double complex[::1] zv = np.ascontiguousarray(arr).reshape(-1)
    cdef double complex[::1] ov = out.reshape(-1)
    cdef Py_ssize_t i, n = zv.shape[0]
    for i in range(n):
        ov[i] = _lgamma_c(zv[i])
    return out


def lgamma_real(x):
    """log Gamma for a positive real scalar."""
    return c_lgamma(x)


def lgamma_real_arr(x):
    """log Gamma for an array of positive reals."""
    arr = np.asarray(x, dtype=np.float64)
    out = np.empty(arr.shape, dtype=np.float64)
    cdef const double[::1] xv = np.ascontiguousarray(arr).reshape(-1)
    cdef double[::1] ov = out.reshape(-1)
    cdef Py_ssize_t i, n = xv.shape[0]
    for i in range(n):
        ov[i] = c_lgamma(xv[i])
    return out


# ---------------------------------------------------------------------------
# Lambert W: both real branches, plus the two-branch pair solver used by the
# distribution code.  Same branch-point series, seeds, and iteration counts
# as the NumPy edition.
# ---------------------------------------------------------------------------

cdef double BP_C2 = 1.0 / 3.0
cdef double BP_C3 = 11.0 / 72.0
cdef double BP_C4 = 43.0 / 540.0
cdef double BP_C5 = 769.0 / 17280.0
cdef double BP_C6 = 221.0 / 8505.0
cdef double BP_C7 = 680863.0 / 43545600.0
cdef double SERIES_FINAL_P = 0.02
cdef double SERIES_SEED_P = 1.0
cdef double DELTA_LOWER_SEED_FINAL = 18.0


cdef inline double _series_v(double p, double sgn) noexcept:
    """Branch-point series v(p); sgn=+1 upper branch, sgn=-1 lower."""
    cdef double q = p * sgn
    return q * (1.0 + q * (BP_C2 + q * (BP_C3 + q * (BP_C4
                + q * (BP_C5 + q * (BP_C6 + q * BP_C7))))))


cdef inline double _newton_u(double u, double d) noexcept:
    """Five Newton steps on u - 1 - log(u) = d (multiplicative update)."""
    cdef int it
    cdef double f
    for it in range(5):
        if u == 1.0 or not isfinite(u):
            break
        f = (u - 1.0) - log(u) - d
        u = u - f * u / (u - 1.0)
    return u


cdef void _branch_scalar(double d, double* uL, double* uU,
                         double* vL, double* vU) noexcept:
    cdef double p = sqrt(-2.0 * expm1(-d))
    cdef double sL = _series_v(p, -1.0)
    cdef double sU = _series_v(p, 1.0)
    cdef double a, u, r
    if p <= SERIES_FINAL_P:
        uL[0] = 1.0 + sL
        vL[0] = sL
        uU[0] = 1.0 + sU
        vU[0] = sU
        return
    # lower branch: u in [0, 1]
    a = exp(-1.0 - d)
    if d > DELTA_LOWER_SEED_FINAL:
        uL[0] = a * (1.0 + a)  # relative error ~1.5 u^2, below one ulp here
    else:
        u = 1.0 + sL if p <= SERIES_SEED_P else a * (1.0 + a)
        uL[0] = _newton_u(u, d)
    vL[0] = uL[0] - 1.0
    # upper branch: u in [1, inf)
    r = 1.0 + d
    u = 1.0 + sU if p <= SERIES_SEED_P else \
        r + log(r + log(r if r > 1.0 else 1.0))
    uU[0] = _newton_u(u, d)
    vU[0] = uU[0] - 1.0


def branch_pair(delta):
    """Both solutions of u - 1 - log(u) = delta, vectorized.

    Returns ``(u_lower, u_upper, v_lower, v_upper)`` where ``u = x / x_star``
    is the root scaled by the transform's minimum location and ``v = u - 1``.
    ``u_lower`` lies in [0, 1] (kept to full relative precision all the way
    into the denormal range), ``u_upper`` in [1, inf).  The ``v`` views are
    the accurate small-offset forms near the branch point (delta -> 0).
    ``delta`` must be nonnegative.
    """
    darr = np.asarray(delta, dtype=np.float64)
    uL = np.empty(darr.shape, dtype=np.float64)
    uU = np.empty(darr.shape, dtype=np.float64)
    vL = np.empty(darr.shape, dtype=np.float64)
    vU = np.empty(darr.shape, dtype=np.float64)
    cdef const double[::1] dv = np.ascontiguousarray(darr).reshape(-1)
    cdef double[::1] uLv = uL.reshape(-1)
    cdef double[::1] uUv = uU.reshape(-1)
    cdef double[::1] vLv = vL.reshape(-1)
    cdef double[::1] vUv = vU.reshape(-1)
    cdef Py_ssize_t i, n = dv.shape[0]
    for i in range(n):
        _branch_scalar(dv[i], &uLv[i], &uUv[i], &vLv[i], &vUv[i])
    return uL, uU, vL, vU


def lambert_w0(z, tol=1e-14):
    """Principal real branch W0(z) for scalar z >= -1/e."""
    cdef double zz = z
    cdef double tl = tol
    cdef double d, w, ew, f, denom, wn, lz, fp, fpp
    cdef double uLs, uUs, vLs, vUs
    cdef int it
    if zz == 0.0:
        return 0.0
    if zz < 0.0:
        # z in [-1/e, 0): map to the pair solver's delta coordinate
        d = -1.0 - log(-zz)
        if d < 0.0:
            d = 0.0
        _branch_scalar(d, &uLs, &uUs, &vLs, &vUs)
        return -uLs
    # z > 0: Halley iteration
    if zz <= E_CONST:
        w = log1p(zz)
        for it in range(50):
            ew = exp(w)
            f = w * ew - zz
            denom = ew * (w + 1.0) - f * (w + 2.0) / (2.0 * (w + 1.0))
            wn = w - f / denom
            if fabs(wn - w) <= tl * (1.0 if fabs(wn) < 1.0 else fabs(wn)):
                return wn
            w = wn
        raise ConvergenceError("lambert_w0: Halley iteration did not converge")
    # large z: iterate on the overflow-free form w + log(w) = log(z)
    lz = log(zz)
    w = lz - log(lz)
    for it in range(50):
        f = w + log(w) - lz
        fp = 1.0 + 1.0 / w
        fpp = -1.0 / (w * w)
        wn = w - f / (fp - 0.5 * f * fpp / fp)
        if fabs(wn - w) <= tl * (1.0 if fabs(wn) < 1.0 else fabs(wn)):
            return wn
        w = wn
    raise ConvergenceError("lambert_w0: Halley iteration did not converge")


def lambert_wm1(z, tol=1e-14):
    """Lower real branch W-1(z) for scalar z in [-1/e, 0)."""
    cdef double d = -1.0 - log(-(<double> z))
    cdef double uLs, uUs, vLs, vUs
    if d < 0.0:
        d = 0.0
    _branch_scalar(d, &uLs, &uUs, &vLs, &vUs)
    return -uUs


def lambert_w0_arr(z, tol=1e-14):
    arr = np.asarray(z, dtype=np.float64)
    out = np.empty(arr.shape, dtype=np.float64)
    cdef const double[::1] zv = np.ascontiguousarray(arr).reshape(-1)
    cdef double[::1] ov = out.reshape(-1)
    cdef Py_ssize_t i, n = zv.shape[0]
    cdef double d, uLs, uUs, vLs, vUs
    for i in range(n):
        if zv[i] < 0.0:
            d = -1.0 - log(-zv[i])
            if d < 0.0:
                d = 0.0
            _branch_scalar(d, &uLs, &uUs, &vLs, &vUs)
            ov[i] = -uLs
        else:
            ov[i] = lambert_w0(zv[i], tol)
    return out


def lambert_wm1_arr(z, tol=1e-14):
    arr = np.asarray(z, dtype=np.float64)
    out = np.empty(arr.shape, dtype=np.float64)
    cdef const double[::1] zv = np.ascontiguousarray(arr).reshape(-1)
    cdef double[::1] ov = out.reshape(-1)
    cdef Py_ssize_t i, n = zv.shape[0]
    cdef double d, uLs, uUs, vLs, vUs
    for i in range(n):
        d = -1.0 - log(-zv[i])
        if d < 0.0:
            d = 0.0
        _branch_scalar(d, &uLs, &uUs, &vLs, &vUs)
        ov[i] = -uUs
    return out


# ---------------------------------------------------------------------------
# regularized lower incomplete gamma P(a, x): power series below x = a+1,
# Lentz continued fraction above, prefactor in log space.
# ---------------------------------------------------------------------------

cdef inline int _pg_itmax(double a) noexcept:
    return 400 + <int> (20.0 * sqrt(a if a > 1.0 else 1.0))


cdef inline double _stirling_corr(double a) noexcept:
    """lgamma(a) - [(a - 1/2) log a - a + log(2 pi)/2], for a >= 30."""
    cdef double r = 1.0 / a
    cdef double r2 = r * r
    return r * (1.0 / 12.0 - r2 * (1.0 / 360.0 - r2 * (1.0 / 1260.0
               - r2 * (1.0 / 1680.0 - r2 / 1188.0))))


cdef inline double _g_log1p_minus_t(double t) noexcept:
    """log1p(t) - t without cancellation for t > -1."""
    cdef double s, s2, acc
    cdef int k
    if fabs(t) > 1.0 / 3.0:
        return log1p(t) - t
    s = t / (2.0 + t)
    s2 = s * s
    acc = 1.0 / 27.0
    for k in range(12, 0, -1):
        acc = 1.0 / (2.0 * k + 1.0) + s2 * acc
    return -t * t / (2.0 + t) + 2.0 * s * s2 * acc


cdef inline double _pg_lnpre(double a, double x) noexcept:
    """log of the prefactor x^a e^-x / Gamma(a), cancellation-safe."""
    cdef double t, g
    if a < PG_STABLE_A:
        return a * log(x) - x - c_lgamma(a)
    t = x / a - 1.0
    g = _g_log1p_minus_t(t)
    return a * g + 0.5 * log(a) - LOG_SQRT_2PI - _stirling_corr(a)


cdef int _pg_scalar(double a, double x, double* res) noexcept:
    """P(a, x) core; 0 = ok, 1 = series stalled, 2 = fraction stalled."""
    cdef double lnpre, ap, term, total, b, c, dd, h, an, delt, p, q
    cdef int itmax, i
    if isnan(x) or isnan(a):
        res[0] = x + a  # propagate NaN
        return 0
    if x == 0.0:
        res[0] = 0.0
        return 0
    if isinf(x):
        res[0] = 1.0
        return 0
    lnpre = _pg_lnpre(a, x)
    itmax = _pg_itmax(a)
    if x < a + 1.0:
        ap = a
        term = 1.0 / a
        total = term
        for i in range(itmax):
            ap += 1.0
            term *= x / ap
            total += term
            if fabs(term) < fabs(total) * PG_EPS:
                p = total * exp(lnpre)
                res[0] = 0.0 if p < 0.0 else (1.0 if p > 1.0 else p)
                return 0
        return 1
    b = x + 1.0 - a
    c = 1.0 / PG_TINY
    dd = 1.0 / b
    h = dd
    for i in range(1, itmax + 1):
        an = -i * (i - a)
        b += 2.0
        dd = an * dd + b
        if fabs(dd) < PG_TINY:
            dd = PG_TINY
        c = b + an / c
        if fabs(c) < PG_TINY:
            c = PG_TINY
        dd = 1.0 / dd
        delt = dd * c
        h *= delt
        if fabs(delt - 1.0) < PG_EPS:
            q = exp(lnpre) * h
            p = 1.0 - q
            res[0] = 0.0 if p < 0.0 else (1.0 if p > 1.0 else p)
            return 0
    return 2


cdef inline void _pg_raise(int code):
    if code == 1:
        raise ConvergenceError("pgamma: series did not converge")
    raise ConvergenceError("pgamma: continued fraction did not converge")


def pgamma(a, x):
    """P(a, x) for positive scalars (x >= 0)."""
    cdef double res
    cdef int code = _pg_scalar(a, x, &res)
    if code:
        _pg_raise(code)
    return res


def pgamma_arr(a, x):
    """P(a, x) broadcast over arrays (a > 0, x >= 0)."""
    aarr = np.asarray(a, dtype=np.float64)
    xarr = np.asarray(x, dtype=np.float64)
    aarr, xarr = np.broadcast_arrays(aarr, xarr)
    out = np.empty(aarr.shape, dtype=np.float64)
    cdef const double[::1] av = np.ascontiguousarray(aarr).reshape(-1)
    cdef const double[::1] xv = np.ascontiguousarray(xarr).reshape(-1)
    cdef double[::1] ov = out.reshape(-1)
    cdef Py_ssize_t i, n = av.shape[0]
    cdef int code = 0
    for i in range(n):
        code = _pg_scalar(av[i], xv[i], &ov[i])
        if code:
            break
    if code:
        _pg_raise(code)
    return out


# ---------------------------------------------------------------------------
# polygamma psi^(m): argument recurrence to x >= 10, then the Bernoulli
# asymptotic expansion with adaptive truncation.
# ---------------------------------------------------------------------------

cdef double[20] BERNOULLI_2K
BERNOULLI_2K[0] = 1.0 / 6.0
BERNOULLI_2K[1] = -1.0 / 30.0
BERNOULLI_2K[2] = 1.0 / 42.0
BERNOULLI_2K[3] = -1.0 / 30.0
BERNOULLI_2K[4] = 5.0 / 66.0
BERNOULLI_2K[5] = -691.0 / 2730.0
BERNOULLI_2K[6] = 7.0 / 6.0
BERNOULLI_2K[7] = -3617.0 / 510.0
BERNOULLI_2K[8] = 43867.0 / 798.0
BERNOULLI_2K[9] = -174611.0 / 330.0
BERNOULLI_2K[10] = 854513.0 / 138.0
BERNOULLI_2K[11] = -236364091.0 / 2730.0
BERNOULLI_2K[12] = 8553103.0 / 6.0
BERNOULLI_2K[13] = -23749461029.0 / 870.0
BERNOULLI_2K[14] = 8615841276005.0 / 14322.0
BERNOULLI_2K[15] = -7709321041217.0 / 510.0
BERNOULLI_2K[16] = 2577687858367.0 / 6.0
BERNOULLI_2K[17] = -26315271553053477373.0 / 1919190.0
BERNOULLI_2K[18] = 2929993913841559.0 / 6.0
BERNOULLI_2K[19] = -261082718496449122051.0 / 13530.0


cdef inline double _factorial(int m) noexcept:
    cdef double f = 1.0
    cdef int j
    for j in range(2, m + 1):
        f *= j
    return f


def polygamma_scalar(m, x):
    """psi^(m)(x) for integer 0 <= m <= 12 and real x > 0."""
    cdef int mm = m
    cdef double xx = x
    cdef double shift = 0.0
    cdef double mf = _factorial(mm)
    cdef double sgn_m = -1.0 if (mm % 2) else 1.0
    cdef double total, x2, pw, t, lead, ratio, prev, sgn
    cdef int k, j
    while xx < PG_SHIFT_X:
        shift += sgn_m * mf / xx ** (mm + 1)
        xx += 1.0
    # asymptotic expansion at x >= 10
    if mm == 0:
        total = log(xx) - 0.5 / xx
        x2 = 1.0 / (xx * xx)
        pw = x2
        for k in range(1, 21):
            t = BERNOULLI_2K[k - 1] * pw / (2.0 * k)
            total -= t
            if fabs(t) < fabs(total) * 1e-17:
                break
            pw *= x2
        return total - shift
    lead = _factorial(mm - 1) / xx ** mm + 0.5 * mf / xx ** (mm + 1)
    total = lead
    x2 = 1.0 / (xx * xx)
    pw = xx ** (-mm) * x2
    prev = INFINITY
    for k in range(1, 21):
        # (2k + m - 1)! / (2k)!
        ratio = 1.0
        for j in range(2 * k + 1, 2 * k + mm):
            ratio *= j
        t = BERNOULLI_2K[k - 1] * ratio * pw
        if fabs(t) > prev:
            break
        total += t
        prev = fabs(t)
        if fabs(t) < fabs(total) * 1e-17:
            break
        pw *= x2
    sgn = 1.0 if (mm % 2) else -1.0  # (-1)^(m-1)
    return sgn * total - shift
