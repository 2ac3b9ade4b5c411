# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled scalar kernels for the noisy single-photon family.

Same algorithms as ``_pykernels``; the two are checked against each other
in the test suite.
"""
from libc.math cimport sqrt, log, log1p, INFINITY, NAN, isfinite

import numpy as np
cimport numpy as cnp

cnp.import_array()

DEFAULT_GRID = 200
DEFAULT_XTOL = 1e-12


cdef struct Parts:
    double a
    double nu
    double n_th
    double s
    double lam_plus
    double lam_minus


cdef inline double _xlogx(double x) nogil:
    return x * log(x) if x > 0.0 else 0.0


cdef inline Parts _parts(double p, double r) nogil:
    cdef Parts out
    cdef double excess
    out.a = 0.5 + p
    excess = p + p * p - 2.0 * r * r * out.a
    if excess < 0.0:
        excess = 0.0
    out.nu = sqrt(excess + 0.25)
    out.n_th = excess / (out.nu + 0.5)
    out.s = sqrt((0.5 - p) * (0.5 - p) + r * r)
    out.lam_plus = 0.5 + out.s
    out.lam_minus = (p * (1.0 - p) - r * r) / out.lam_plus
    if out.lam_minus < 0.0:
        out.lam_minus = 0.0
    return out


cdef inline double _gaussian_entropy(double n) nogil:
    if n <= 0.0:
        return 0.0
    return (n + 1.0) * log1p(n) - n * log(n)


cdef inline double _ng(double p, double r) nogil:
    cdef Parts q = _parts(p, r)
    cdef double value = (_gaussian_entropy(q.n_th) + _xlogx(q.lam_plus)
                         + _xlogx(q.lam_minus))
    return value if value > 0.0 else 0.0


cdef inline double _log_ratio_over_s(double s, double lp, double lm) nogil:
    if s < 1e-6:
        return 4.0 + 16.0 * s * s / 3.0
    if lm <= 0.0:
        return INFINITY
    return log(lp / lm) / s


cdef inline double _bracket(double p, double r) nogil:
    cdef Parts q = _parts(p, r)
    cdef double first = 0.25 * _log_ratio_over_s(q.s, q.lam_plus, q.lam_minus)
    if q.n_th <= 0.0:
        return -INFINITY if isfinite(first) else NAN
    return first - 0.5 * (q.a / q.nu) * log1p(1.0 / q.n_th)


cdef inline double _dp(double p, double r) nogil:
    cdef Parts q = _parts(p, r)
    if q.n_th <= 0.0:
        return INFINITY
    return (log1p(1.0 / q.n_th) * (q.a - r * r) / q.nu
            - (0.5 - p) * _log_ratio_over_s(q.s, q.lam_plus, q.lam_minus))


cdef double _bisect_root(double p, double lo, double hi, double h_lo,
                         double xtol) nogil:
    cdef double mid, h_mid
    while hi - lo > xtol:
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        h_mid = _bracket(p, mid)
        if h_mid == 0.0:
            return mid
        if (h_mid < 0.0) == (h_lo < 0.0):
            lo = mid
            h_lo = h_mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


cdef void _minimize(double p, int grid, double xtol,
                    double* m_out, double* r_out) nogil:
    cdef double pq = p * (1.0 - p)
    cdef double r_max = sqrt(pq) if pq > 0.0 else 0.0
    cdef double best, best_r, edge, step, r_prev, h_prev, r_cur, h_cur
    cdef double root, value
    cdef int i
    if r_max == 0.0:
        m_out[0] = _ng(p, 0.0)
        r_out[0] = 0.0
        return
    best_r = 0.0
    best = _ng(p, 0.0)
    edge = _ng(p, r_max)
    if edge < best:
        best = edge
        best_r = r_max
    step = r_max / grid
    r_prev = 0.0
    h_prev = _bracket(p, 0.0)
    for i in range(1, grid + 1):
        r_cur = r_max if i == grid else i * step
        h_cur = _bracket(p, r_cur)
        if h_prev == 0.0 and i > 1:
            root = r_prev
        elif (h_prev < 0.0) != (h_cur < 0.0):
            root = _bisect_root(p, r_prev, r_cur, h_prev, xtol)
        else:
            root = -1.0
        if root > 0.0:
            value = _ng(p, root)
            if value < best:
                best = value
                best_r = root
        r_prev = r_cur
        h_prev = h_cur
    m_out[0] = best
    r_out[0] = best_r


def gaussian_entropy(double n):
    return _gaussian_entropy(n)


def ng_closed_form(double p, double r):
    return _ng(p, r)


def ng_bracket(double p, double r):
    """dN/dr divided by 4r."""
    return _bracket(p, r)


def ng_derivative_r(double p, double r):
    if r == 0.0:
        return 0.0
    return 4.0 * r * _bracket(p, r)


def ng_derivative_p(double p, double r):
    return _dp(p, r)


def minimize_over_r(double p, int grid=DEFAULT_GRID, double xtol=DEFAULT_XTOL):
    """Global minimum of the closed-form NG over the allowed coherence range.

    Returns ``(m_value, r_opt)``.
    """
    cdef double m, r
    _minimize(p, grid, xtol, &m, &r)
    return m, r


def minimize_many(cnp.ndarray[cnp.float64_t, ndim=1] ps,
                  int grid=DEFAULT_GRID, double xtol=DEFAULT_XTOL):
    cdef Py_ssize_t k, n = ps.shape[0]
    cdef cnp.ndarray[cnp.float64_t, ndim=1] m = np.empty(n)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] r = np.empty(n)
    cdef double mv, rv
    with nogil:
        for k in range(n):
            _minimize(ps[k], grid, xtol, &mv, &rv)
            m[k] = mv
            r[k] = rv
    return m, r
