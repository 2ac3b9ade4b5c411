"""Gaussian reference states and the relative-entropy non-Gaussianity."""
from __future__ import annotations

from dataclasses import dataclass
import math

import numpy as np
from scipy.linalg import block_diag

from .fock import (
    EIGENVALUE_FLOOR,
    DensityOperator,
    displacement_operator,
    moments,
    rotation_operator,
    squeeze_operator,
    thermal_state,
    von_neumann_entropy,
)

UNPHYSICAL_TOL = 1e-6
NG_CLAMP_TOL = 1e-9
SUPPORT_TOL = 1e-6
# Extra Fock levels used while building a Gaussian state before truncation.
GAUSSIFY_PAD = 40


@dataclass(frozen=True)
class GaussianReference:
    mean: tuple[float, float]
    cov: np.ndarray
    n_th: float
    entropy: float


def thermal_photon_number(cov) -> float:
    """``sqrt(det cov) - 1/2``.

    Raises ``ValueError`` when ``det cov`` is below the uncertainty bound by
    more than 1e-6; smaller deficits are clamped to zero occupancy.
    """
    cov = np.asarray(cov, dtype=float)
    det = float(cov[0, 0] * cov[1, 1] - cov[0, 1] * cov[1, 0])
    if det < 0.25 - UNPHYSICAL_TOL:
        raise ValueError(f"unphysical covariance matrix, det = {det!r} < 1/4")
    excess = det - 0.25
    if excess <= 0.0:
        return 0.0
    # sqrt(det) - 1/2 without cancellation
    return excess / (math.sqrt(det) + 0.5)


def gaussian_entropy(n_th: float) -> float:
    """Entropy (nats) of a Gaussian state with thermal occupancy ``n_th``."""
    if n_th < 0:
        raise ValueError("thermal photon number must be nonnegative")
    if n_th == 0.0:
        return 0.0
    return (n_th + 1.0) * math.log1p(n_th) - n_th * math.log(n_th)


def gaussian_reference(rho: DensityOperator) -> GaussianReference:
    stats = moments(rho)
    n_th = thermal_photon_number(stats.cov)
    return GaussianReference(stats.mean, stats.cov, n_th, gaussian_entropy(n_th))


def non_gaussianity(rho: DensityOperator) -> float:
    """Relative entropy between ``rho`` and its Gaussian reference, in nats.

    Uses the entropy difference ``S(rho_G) - S(rho)`` with the closed-form
    Gaussian entropy, so no Fock-space Gaussian state is built.
    """
    ref = gaussian_reference(rho)
    value = ref.entropy - von_neumann_entropy(rho)
    if value < -NG_CLAMP_TOL:
        raise ArithmeticError(
            f"negative non-Gaussianity {value:.3e}; state may be poorly truncated"
        )
    return max(value, 0.0)


def gaussify_fock(rho: DensityOperator, dim: int | None = None) -> DensityOperator:
    """Displaced squeezed thermal state with the same moments as ``rho``.

    Built as thermal -> squeeze -> rotate -> displace on ``dim + 40`` levels,
    then truncated to ``dim`` and renormalised.
    """
    dim = rho.dim if dim is None else dim
    stats = moments(rho)
    n_th = thermal_photon_number(stats.cov)
    big = dim + GAUSSIFY_PAD

    gammas, vecs = np.linalg.eigh(np.asarray(stats.cov))
    g_small, g_large = max(gammas[0], 1e-300), gammas[1]
    squeeze = 0.25 * math.log(g_large / g_small)
    v = vecs[:, 0]
    angle = math.atan2(-v[1], v[0])
    alpha = (stats.mean_q + 1j * stats.mean_p) / math.sqrt(2.0)

    state = thermal_state(n_th, big).matrix
    if squeeze > 0.0:
        u = squeeze_operator(squeeze, big)
        state = u @ state @ u.conj().T
    u = rotation_operator(angle, big)
    state = u @ state @ u.conj().T
    if alpha != 0:
        u = displacement_operator(alpha, big)
        state = u @ state @ u.conj().T

    state = state[:dim, :dim]
    state = 0.5 * (state + state.conj().T)
    return DensityOperator(state / np.trace(state).real)


def relative_entropy(rho: DensityOperator, sigma: DensityOperator) -> float:
    """``Tr rho log rho - Tr rho log sigma`` in nats.

    Returns ``math.inf`` when ``rho`` has weight above 1e-6 on the
    numerical kernel of ``sigma`` (eigenvalues at or below 1e-14). Positive
    eigenvalues under that floor still enter the cross term, since the
    near-Gaussian tail of a reference state is genuinely that small.
    """
    if rho.dim != sigma.dim:
        raise ValueError(f"dimension mismatch: {rho.dim} vs {sigma.dim}")
    w, v = np.linalg.eigh(sigma.matrix)
    overlap = np.einsum("ik,ij,jk->k", v.conj(), rho.matrix, v).real
    if np.sum(overlap[w <= EIGENVALUE_FLOOR]) > SUPPORT_TOL:
        return math.inf
    kept = w > 0.0
    cross = float(np.sum(overlap[kept] * np.log(w[kept])))
    return max(-von_neumann_entropy(rho) - cross, 0.0)


def shannon_relative_entropy(p, q) -> float:
    p = np.asarray(p, dtype=float)
    q = np.asarray(q, dtype=float)
    on = p > 0
    if np.any(q[on] <= 0):
        return math.inf
    return float(np.sum(p[on] * np.log(p[on] / q[on])))


def block_relative_entropy_identity(weights1, blocks1, weights2, blocks2):
    """Both sides of the relative-entropy rule for block-diagonal states.

    Assembles ``rho = (+)_j p_j rho_j`` and ``sigma = (+)_j q_j sigma_j`` and
    returns ``(S(rho||sigma), H(p||q) + sum_j p_j S(rho_j||sigma_j))``.
    """
    if not (len(weights1) == len(blocks1) == len(weights2) == len(blocks2)):
        raise ValueError("weights and blocks must have equal counts")
    for w in (weights1, weights2):
        if np.any(np.asarray(w) < 0) or abs(float(np.sum(w)) - 1.0) > 1e-12:
            raise ValueError("weights must be a probability distribution")
    for b1, b2 in zip(blocks1, blocks2):
        if b1.dim != b2.dim:
            raise ValueError("paired blocks must share a dimension")

    rho = DensityOperator(block_diag(*[w * b.matrix for w, b in zip(weights1, blocks1)]))
    sigma = DensityOperator(block_diag(*[w * b.matrix for w, b in zip(weights2, blocks2)]))
    lhs = relative_entropy(rho, sigma)

    rhs = shannon_relative_entropy(weights1, weights2)
    for w, b1, b2 in zip(weights1, blocks1, blocks2):
        if w > 0:
            rhs += w * relative_entropy(b1, b2)
    return lhs, rhs
