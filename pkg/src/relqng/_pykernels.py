"""Pure-Python scalar kernels for the noisy single-photon family.

Mirrors ``_ckernels.pyx`` line by line; used when the compiled module is
unavailable or ``RELQNG_PURE_PYTHON`` is set.
"""
import math

DEFAULT_GRID = 200
DEFAULT_XTOL = 1e-12


def _xlogx(x):
    return x * math.log(x) if x > 0.0 else 0.0


def _parts(p, r):
    # Returns (A, nu, n_th, s, lam_plus, lam_minus) written to avoid
    # cancellation when n_th or lam_minus is close to zero.
    a = 0.5 + p
    excess = p + p * p - 2.0 * r * r * a  # det(cov) - 1/4
    if excess < 0.0:
        excess = 0.0
    nu = math.sqrt(excess + 0.25)
    n_th = excess / (nu + 0.5)
    s = math.sqrt((0.5 - p) ** 2 + r * r)
    lam_plus = 0.5 + s
    lam_minus = (p * (1.0 - p) - r * r) / lam_plus
    if lam_minus < 0.0:
        lam_minus = 0.0
    return a, nu, n_th, s, lam_plus, lam_minus


def gaussian_entropy(n):
    if n <= 0.0:
        return 0.0
    return (n + 1.0) * math.log1p(n) - n * math.log(n)


def ng_closed_form(p, r):
    _, _, n_th, _, lam_plus, lam_minus = _parts(p, r)
    value = gaussian_entropy(n_th) + _xlogx(lam_plus) + _xlogx(lam_minus)
    return value if value > 0.0 else 0.0


def _log_ratio_over_s(s, lam_plus, lam_minus):
    # ln(lam_plus/lam_minus) / s, finite as s -> 0 (limit 4).
    if s < 1e-6:
        return 4.0 + 16.0 * s * s / 3.0
    if lam_minus <= 0.0:
        return math.inf
    return math.log(lam_plus / lam_minus) / s


def ng_bracket(p, r):
    """dN/dr divided by 4r."""
    a, nu, n_th, s, lam_plus, lam_minus = _parts(p, r)
    first = 0.25 * _log_ratio_over_s(s, lam_plus, lam_minus)
    if n_th <= 0.0:
        return -math.inf if math.isfinite(first) else math.nan
    second = 0.5 * (a / nu) * math.log1p(1.0 / n_th)
    return first - second


def ng_derivative_r(p, r):
    if r == 0.0:
        return 0.0
    return 4.0 * r * ng_bracket(p, r)


def ng_derivative_p(p, r):
    a, nu, n_th, s, lam_plus, lam_minus = _parts(p, r)
    if n_th <= 0.0:
        return math.inf
    gauss = math.log1p(1.0 / n_th) * (a - r * r) / nu
    return gauss - (0.5 - p) * _log_ratio_over_s(s, lam_plus, lam_minus)


def _bisect_root(p, lo, hi, h_lo, xtol):
    while hi - lo > xtol:
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        h_mid = ng_bracket(p, mid)
        if h_mid == 0.0:
            return mid
        if (h_mid < 0.0) == (h_lo < 0.0):
            lo, h_lo = mid, h_mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def minimize_over_r(p, grid=DEFAULT_GRID, xtol=DEFAULT_XTOL):
    """Global minimum of the closed-form NG over the allowed coherence range.

    Returns ``(m_value, r_opt)``.
    """
    r_max = math.sqrt(max(p * (1.0 - p), 0.0))
    if r_max == 0.0:
        return ng_closed_form(p, 0.0), 0.0
    best_r = 0.0
    best = ng_closed_form(p, 0.0)
    edge = ng_closed_form(p, r_max)
    if edge < best:
        best, best_r = edge, r_max
    step = r_max / grid
    r_prev = 0.0
    h_prev = ng_bracket(p, 0.0)
    for i in range(1, grid + 1):
        r_cur = r_max if i == grid else i * step
        h_cur = ng_bracket(p, r_cur)
        if h_prev == 0.0 and i > 1:
            root = r_prev
        elif (h_prev < 0.0) != (h_cur < 0.0):
            root = _bisect_root(p, r_prev, r_cur, h_prev, xtol)
        else:
            root = -1.0
        if root > 0.0:
            value = ng_closed_form(p, root)
            if value < best:
                best, best_r = value, root
        r_prev, h_prev = r_cur, h_cur
    return best, best_r


def minimize_many(ps, grid=DEFAULT_GRID, xtol=DEFAULT_XTOL):
    import numpy as np

    ps = np.asarray(ps, dtype=float)
    m = np.empty(ps.shape[0])
    r = np.empty(ps.shape[0])
    for k, p in enumerate(ps):
        m[k], r[k] = minimize_over_r(float(p), grid, xtol)
    return m, r
