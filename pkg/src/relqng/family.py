"""Closed-form NG of the noisy single-photon family and its minimum over r.

The family is ``rho = p|1><1| + (1-p)|0><0| + r e^{i theta}|0><1| + h.c.``.
The r-derivative used here comes from differentiating the closed form
directly; its Gaussian term carries ``(1+2p)/(2 n_th + 1)`` and
``atanh(1/(2 n_th + 1))``, which is what finite differences confirm.
"""
from __future__ import annotations

from dataclasses import dataclass
import math

import numpy as np

from . import _kernels
from .fock import DEFAULT_DIM, DensityOperator

POSITIVITY_TOL = 1e-12
R_OPT_ZERO = 1e-8
DEFAULT_CROSSOVER_INTERVAL = (0.01, 0.1)


class NotFoundError(RuntimeError):
    """A requested transition or root is not inside the search interval."""


@dataclass(frozen=True)
class NoisyPhotonParams:
    p: float
    r: float = 0.0
    theta: float = 0.0

    def __post_init__(self):
        if not 0.0 <= self.p <= 1.0:
            raise ValueError(f"single-photon fraction p={self.p!r} outside [0, 1]")
        if self.r < 0.0:
            raise ValueError("coherence magnitude r must be nonnegative")
        if self.r * self.r > self.p * (1.0 - self.p) + POSITIVITY_TOL:
            raise ValueError(
                f"r={self.r!r} exceeds sqrt(p(1-p))={self.r_max!r}: not a state"
            )

    @property
    def r_max(self) -> float:
        return math.sqrt(max(self.p * (1.0 - self.p), 0.0))


@dataclass(frozen=True)
class MinimizationResult:
    p: float
    m_value: float
    r_opt: float


def density(params: NoisyPhotonParams, dim: int = DEFAULT_DIM) -> DensityOperator:
    if dim < 2:
        raise ValueError("need at least two Fock levels")
    m = np.zeros((dim, dim), dtype=complex)
    m[0, 0] = 1.0 - params.p
    m[1, 1] = params.p
    m[0, 1] = params.r * np.exp(1j * params.theta)
    m[1, 0] = np.conj(m[0, 1])
    return DensityOperator(m)


def diagonal_state(p: float, dim: int = DEFAULT_DIM) -> DensityOperator:
    """``p|1><1| + (1-p)|0><0|``."""
    return density(NoisyPhotonParams(p), dim)


def eigenvalues(params: NoisyPhotonParams) -> tuple[float, float]:
    """``(lambda_minus, lambda_plus)``."""
    s = math.sqrt((0.5 - params.p) ** 2 + params.r**2)
    lam_plus = 0.5 + s
    # 1/4 - s^2 = p(1-p) - r^2, divided through to keep precision near 0
    lam_minus = (params.p * (1.0 - params.p) - params.r**2) / lam_plus
    return lam_minus, lam_plus


def ng_closed_form(params: NoisyPhotonParams) -> float:
    """Non-Gaussianity in nats; does not depend on ``theta``."""
    return _kernels.ng_closed_form(params.p, params.r)


def ng_derivative_r(params: NoisyPhotonParams) -> float:
    """Analytic dN/dr at fixed p.

    ``4r [atanh(2 lambda_+ - 1)/(2 lambda_+ - 1)
    - (1+2p)/(2 n_th + 1) atanh(1/(2 n_th + 1))]``.
    """
    return _kernels.ng_derivative_r(params.p, params.r)


def ng_derivative_p(params: NoisyPhotonParams) -> float:
    """Analytic dN/dp at fixed r."""
    return _kernels.ng_derivative_p(params.p, params.r)


def minimize_over_r(p: float, grid: int = _kernels.DEFAULT_GRID,
                    xtol: float = _kernels.DEFAULT_XTOL) -> MinimizationResult:
    """Global minimum ``M(p)`` of the NG over ``0 <= r <= sqrt(p(1-p))``.

    Candidates are both endpoints and every interior stationary point,
    bracketed on a ``grid``-point scan of the derivative and refined by
    bisection to ``xtol``. The smallest NG wins.
    """
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"p={p!r} outside [0, 1]")
    m, r = _kernels.minimize_over_r(float(p), grid, xtol)
    return MinimizationResult(float(p), m, r)


def minimize_many(ps) -> tuple[np.ndarray, np.ndarray]:
    """``(M, r_opt)`` arrays for a sequence of p values."""
    ps = np.ascontiguousarray(ps, dtype=float)
    if ps.size and (ps.min() < 0.0 or ps.max() > 1.0):
        raise ValueError("p values must lie in [0, 1]")
    return _kernels.minimize_many(ps)


def m_of_p(p: float) -> float:
    return _kernels.minimize_over_r(float(p))[0]


def m_prime(p: float) -> float:
    """dM/dp by the envelope theorem: dN/dp at fixed ``r_opt(p)``."""
    _, r_opt = _kernels.minimize_over_r(float(p))
    return _kernels.ng_derivative_p(float(p), r_opt)


def crossover_bracket(interval=DEFAULT_CROSSOVER_INTERVAL, ptol: float = 1e-5):
    """``(lo, hi)`` with ``r_opt(lo) > 0``, ``r_opt(hi) = 0`` and ``hi - lo <= ptol``."""
    lo, hi = map(float, interval)

    def coherent(p):
        return _kernels.minimize_over_r(p)[1] > R_OPT_ZERO

    if not (coherent(lo) and not coherent(hi)):
        raise NotFoundError(f"no r_opt transition inside [{lo}, {hi}]")
    while hi - lo > ptol:
        mid = 0.5 * (lo + hi)
        if coherent(mid):
            lo = mid
        else:
            hi = mid
    return lo, hi


def crossover(interval=DEFAULT_CROSSOVER_INTERVAL, ptol: float = 1e-5) -> float:
    """Fraction p where ``r_opt`` drops from positive to zero."""
    lo, hi = crossover_bracket(interval, ptol)
    return 0.5 * (lo + hi)
