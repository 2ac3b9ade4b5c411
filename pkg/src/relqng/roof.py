"""Lower convex envelope of M(p) and the convex-roof QNG of noisy photons.

The envelope is found two ways: a common tangent bridging the two convex
pieces of M, and the lower convex hull of sampled points. The hull needs
no assumptions and is used to cross-check the tangent.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
import math

import numpy as np

from . import family
from .family import NoisyPhotonParams, diagonal_state, density
from .fock import DEFAULT_DIM, DensityOperator, eigen_decompose
from .gaussian import non_gaussianity

TANGENT_TOL = 1e-9
LEFT_START = 1e-4
RIGHT_END = 0.15


class NoSolutionError(RuntimeError):
    """No common tangent exists; the function is already convex there."""


@dataclass(frozen=True)
class EnvelopeSolution:
    """Common tangent touching M at ``p1`` and ``p2``."""

    p1: float
    p2: float
    slope: float
    m_p1: float
    m_p2: float

    @property
    def residual(self) -> float:
        return self.slope * (self.p2 - self.p1) + self.m_p1 - self.m_p2

    def chord(self, p: float) -> float:
        w = (p - self.p1) / (self.p2 - self.p1)
        return w * self.m_p2 + (1.0 - w) * self.m_p1

    def __call__(self, p: float) -> float:
        return qng_noisy_photon(p, self)


@dataclass(frozen=True)
class Decomposition:
    components: tuple[tuple[float, NoisyPhotonParams], ...]

    @property
    def weights(self) -> np.ndarray:
        return np.array([w for w, _ in self.components])

    def mixture(self, dim: int = DEFAULT_DIM) -> np.ndarray:
        return sum(w * density(c, dim).matrix for w, c in self.components)

    def average_ng(self) -> float:
        return float(sum(w * family.ng_closed_form(c) for w, c in self.components))


def _check_convex(f, lo, hi, samples=33):
    x = np.linspace(lo, hi, samples)
    y = np.array([f(v) for v in x])
    second = y[2:] - 2.0 * y[1:-1] + y[:-2]
    scale = 1e-12 * max(1.0, float(np.max(np.abs(y))))
    if np.any(second < -scale):
        raise ValueError(f"function is not convex on [{lo}, {hi}]")


def _solve_slope(fprime, lo, hi, slope):
    # f' increasing on [lo, hi]
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        if fprime(mid) < slope:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def common_tangent(f, fprime, left_interval, right_interval,
                   tol: float = TANGENT_TOL) -> EnvelopeSolution:
    """Line tangent to ``f`` once in each interval.

    ``f`` must be convex on each interval separately. For a trial slope the
    tangency point in each interval is found by bisection on ``fprime``;
    the slope itself is bisected on the chord residual
    ``f(p2) - f(p1) - slope (p2 - p1)``, which decreases with the slope.

    Raises
    ------
    NoSolutionError
        If the admissible slope ranges do not overlap, or the residual
        cannot be brought below ``tol``.
    """
    a1, b1 = map(float, left_interval)
    a2, b2 = map(float, right_interval)
    if not (a1 < b1 <= a2 < b2):
        raise ValueError("intervals must be ordered and non-overlapping")
    _check_convex(f, a1, b1)
    _check_convex(f, a2, b2)

    s_lo = max(fprime(a1), fprime(a2))
    s_hi = min(fprime(b1), fprime(b2))
    if not s_lo < s_hi:
        raise NoSolutionError("slope ranges of the two intervals do not overlap")

    def touch(slope):
        p1 = _solve_slope(fprime, a1, b1, slope)
        p2 = _solve_slope(fprime, a2, b2, slope)
        return p1, p2, f(p2) - f(p1) - slope * (p2 - p1)

    if touch(s_lo)[2] < 0.0 or touch(s_hi)[2] > 0.0:
        raise NoSolutionError("chord residual does not change sign")
    for _ in range(200):
        mid = 0.5 * (s_lo + s_hi)
        if mid <= s_lo or mid >= s_hi:
            break
        if touch(mid)[2] > 0.0:
            s_lo = mid
        else:
            s_hi = mid
    slope = 0.5 * (s_lo + s_hi)
    p1, p2, res = touch(slope)
    if abs(res) > tol or p2 - p1 <= tol:
        raise NoSolutionError(f"tangent residual {res:.3e} above tolerance {tol:g}")
    return EnvelopeSolution(p1, p2, slope, f(p1), f(p2))


def family_intervals(interval=family.DEFAULT_CROSSOVER_INTERVAL,
                     left_start=LEFT_START, right_end=RIGHT_END):
    """Tangent search intervals on either side of the r_opt crossover."""
    lo, hi = family.crossover_bracket(interval)
    return (left_start, lo), (hi, right_end)


@lru_cache(maxsize=8)
def solve_envelope(left_start: float = LEFT_START,
                   right_end: float = RIGHT_END) -> EnvelopeSolution:
    """Common tangent of M(p) for the noisy single-photon family."""
    left, right = family_intervals(left_start=left_start, right_end=right_end)
    return common_tangent(family.m_of_p, family.m_prime, left, right)


def lower_hull(points) -> np.ndarray:
    """Lower convex hull (monotone chain) of 2-D points, sorted by x.

    Collinear interior points are dropped.
    """
    pts = sorted(map(tuple, np.asarray(points, dtype=float)))
    hull: list[tuple[float, float]] = []
    for x, y in pts:
        while len(hull) >= 2:
            (x0, y0), (x1, y1) = hull[-2], hull[-1]
            if (x1 - x0) * (y - y0) - (y1 - y0) * (x - x0) <= 0.0:
                hull.pop()
            else:
                break
        if hull and hull[-1][0] == x:
            continue  # equal x: sorted order keeps the lower y first
        hull.append((x, y))
    return np.array(hull)


class HullEnvelope:
    """Piecewise-linear lower convex envelope of sampled points."""

    def __init__(self, samples):
        samples = np.asarray(samples, dtype=float)
        if samples.ndim != 2 or samples.shape[1] != 2:
            raise ValueError("samples must be (p, value) pairs")
        self.vertices = lower_hull(samples)

    def __call__(self, p):
        return np.interp(p, self.vertices[:, 0], self.vertices[:, 1])


def envelope_bruteforce(samples) -> HullEnvelope:
    if len(samples) < 100:
        raise ValueError("need at least 100 samples")
    return HullEnvelope(samples)


def sample_m(n: int = 2000) -> np.ndarray:
    ps = np.linspace(0.0, 1.0, n)
    m, _ = family.minimize_many(ps)
    return np.column_stack([ps, m])


def qng_noisy_photon(p: float, env: EnvelopeSolution | None = None) -> float:
    """QNG (nats) of ``p|1><1| + (1-p)|0><0|``.

    ``M(p)`` outside ``[p1, p2]``, the common tangent chord inside it.
    """
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"p={p!r} outside [0, 1]")
    env = solve_envelope() if env is None else env
    if env.p1 < p < env.p2:
        return env.chord(p)
    return family.m_of_p(p)


def qng_noisy_photon_many(ps, env: EnvelopeSolution | None = None) -> np.ndarray:
    env = solve_envelope() if env is None else env
    ps = np.asarray(ps, dtype=float)
    out, _ = family.minimize_many(ps)
    inside = (ps > env.p1) & (ps < env.p2)
    w = (ps[inside] - env.p1) / (env.p2 - env.p1)
    out[inside] = w * env.m_p2 + (1.0 - w) * env.m_p1
    return out


def optimal_decomposition(p: float, env: EnvelopeSolution | None = None) -> Decomposition:
    """Decomposition of ``p|1><1| + (1-p)|0><0|`` attaining its QNG.

    The ``-r`` member of a +/- coherent pair is written with ``theta = pi``.
    """
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"p={p!r} outside [0, 1]")
    env = solve_envelope() if env is None else env
    if p >= env.p2:
        return Decomposition(((1.0, NoisyPhotonParams(p)),))
    if p <= env.p1:
        r = family.minimize_over_r(p).r_opt
        return Decomposition((
            (0.5, NoisyPhotonParams(p, r, 0.0)),
            (0.5, NoisyPhotonParams(p, r, math.pi)),
        ))
    r1 = family.minimize_over_r(env.p1).r_opt
    far = (env.p2 - p) / (env.p2 - env.p1)
    return Decomposition((
        (0.5 * far, NoisyPhotonParams(env.p1, r1, 0.0)),
        (0.5 * far, NoisyPhotonParams(env.p1, r1, math.pi)),
        ((p - env.p1) / (env.p2 - env.p1), NoisyPhotonParams(env.p2)),
    ))


def qng_pure(psi: DensityOperator) -> float:
    """QNG of a pure state, which equals its NG."""
    vals, _ = eigen_decompose(psi)
    if vals[-1] < 1.0 - 1e-10:
        raise ValueError("state is not pure")
    return non_gaussianity(psi)


def ng_diagonal(p: float, dim: int = DEFAULT_DIM) -> float:
    """NG of ``p|1><1| + (1-p)|0><0|`` via the Fock-space route."""
    return non_gaussianity(diagonal_state(p, dim))
