"""Truncated Fock-space density operators, quadrature moments and entropy."""
from __future__ import annotations

from dataclasses import dataclass
import math

import numpy as np
from scipy.linalg import expm

DEFAULT_DIM = 30
EIGENVALUE_FLOOR = 1e-14

HERMITIAN_TOL = 1e-12
TRACE_TOL = 1e-10
PSD_TOL = 1e-10
TOP_LEVEL_LIMIT = 1e-6


class TruncationError(ValueError):
    """State has too much population near the Fock cutoff."""


@dataclass(frozen=True, eq=False)
class DensityOperator:
    """Single-mode state on the Fock levels ``|0>, ..., |dim-1>``.

    The matrix is validated on construction (Hermitian, unit trace,
    positive semidefinite) and stored read-only.
    """

    matrix: np.ndarray

    def __post_init__(self):
        m = np.array(self.matrix, dtype=complex)
        if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] < 1:
            raise ValueError(f"density matrix must be square, got shape {m.shape}")
        if np.max(np.abs(m - m.conj().T)) > HERMITIAN_TOL:
            raise ValueError("density matrix is not Hermitian")
        m = 0.5 * (m + m.conj().T)
        tr = np.trace(m).real
        if abs(tr - 1.0) > TRACE_TOL:
            raise ValueError(f"density matrix trace is {tr!r}, expected 1")
        if np.linalg.eigvalsh(m)[0] < -PSD_TOL:
            raise ValueError("density matrix is not positive semidefinite")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @property
    def populations(self) -> np.ndarray:
        return self.matrix.diagonal().real.copy()

    def embed(self, dim: int) -> "DensityOperator":
        """Zero-pad (or truncate an empty tail) to ``dim`` levels."""
        if dim >= self.dim:
            out = np.zeros((dim, dim), dtype=complex)
            out[: self.dim, : self.dim] = self.matrix
            return DensityOperator(out)
        if np.any(np.abs(self.matrix[dim:, :]) > HERMITIAN_TOL):
            raise TruncationError(f"cannot truncate to {dim} levels: population above cutoff")
        return DensityOperator(self.matrix[:dim, :dim])

    def __repr__(self):
        return f"DensityOperator(dim={self.dim})"


@dataclass(frozen=True)
class QuadratureStatistics:
    """First moments and covariance matrix with ``q = (a + a^dag)/sqrt 2``."""

    mean_q: float
    mean_p: float
    cov: np.ndarray

    @property
    def mean(self) -> tuple[float, float]:
        return (self.mean_q, self.mean_p)


def destroy(dim: int) -> np.ndarray:
    """Truncated annihilation operator."""
    return np.diag(np.sqrt(np.arange(1, dim, dtype=float)), 1).astype(complex)


def fock_state(n: int, dim: int = DEFAULT_DIM) -> DensityOperator:
    if not 0 <= n < dim:
        raise ValueError(f"Fock level {n} outside truncation {dim}")
    m = np.zeros((dim, dim), dtype=complex)
    m[n, n] = 1.0
    return DensityOperator(m)


def vacuum(dim: int = DEFAULT_DIM) -> DensityOperator:
    return fock_state(0, dim)


def coherent_amplitudes(alpha: complex, dim: int) -> np.ndarray:
    n = np.arange(dim)
    log_fact = np.array([math.lgamma(k + 1) for k in n])
    # alpha**n / sqrt(n!) evaluated in log space for large n
    if alpha == 0:
        amp = np.zeros(dim, dtype=complex)
        amp[0] = 1.0
        return amp
    mag = np.exp(n * math.log(abs(alpha)) - 0.5 * log_fact - 0.5 * abs(alpha) ** 2)
    return mag * np.exp(1j * n * np.angle(alpha))


def coherent_state(alpha: complex, dim: int = DEFAULT_DIM) -> DensityOperator:
    """Truncated coherent state, renormalised on the kept levels."""
    psi = coherent_amplitudes(alpha, dim)
    psi = psi / np.linalg.norm(psi)
    return DensityOperator(np.outer(psi, psi.conj()))


def thermal_state(n_mean: float, dim: int = DEFAULT_DIM) -> DensityOperator:
    if n_mean < 0:
        raise ValueError("mean photon number must be nonnegative")
    if n_mean == 0:
        return vacuum(dim)
    ratio = n_mean / (n_mean + 1.0)
    pops = ratio ** np.arange(dim) / (n_mean + 1.0)
    return DensityOperator(np.diag(pops / pops.sum()).astype(complex))


def check_truncation(rho: DensityOperator, limit: float = TOP_LEVEL_LIMIT) -> None:
    top = rho.matrix[-1, -1].real
    if top > limit:
        raise TruncationError(
            f"population {top:.3g} in top Fock level {rho.dim - 1} exceeds {limit:g}"
        )


def moments(rho: DensityOperator) -> QuadratureStatistics:
    """Quadrature means and covariance matrix of ``rho``.

    Computed from <a>, <a^2> and <n> of the truncated matrix, so the result
    is exact for the state as represented.

    Raises
    ------
    TruncationError
        If the top Fock level carries more than 1e-6 population.
    """
    check_truncation(rho)
    m = rho.matrix
    dim = rho.dim
    sq = np.sqrt(np.arange(1, dim, dtype=float))
    # Tr(rho a) = sum_n sqrt(n) rho[n, n-1]
    a1 = np.sum(sq * np.diagonal(m, -1))
    a2 = np.sum(sq[:-1] * sq[1:] * np.diagonal(m, -2)) if dim > 2 else 0.0
    n_mean = np.sum(np.arange(dim) * m.diagonal().real)
    mean_q = math.sqrt(2.0) * a1.real
    mean_p = math.sqrt(2.0) * a1.imag
    a2 = complex(a2)
    vq = a2.real + n_mean + 0.5 - mean_q**2
    vp = -a2.real + n_mean + 0.5 - mean_p**2
    cqp = a2.imag - mean_q * mean_p
    cov = np.array([[vq, cqp], [cqp, vp]])
    cov.setflags(write=False)
    return QuadratureStatistics(float(mean_q), float(mean_p), cov)


def eigen_decompose(rho: DensityOperator) -> tuple[np.ndarray, np.ndarray]:
    """Ascending eigenvalues and orthonormal eigenvector columns."""
    return np.linalg.eigh(rho.matrix)


def entropy_from_eigenvalues(vals, floor: float = EIGENVALUE_FLOOR) -> float:
    vals = np.asarray(vals, dtype=float)
    vals = vals[vals > floor]
    return float(max(-np.sum(vals * np.log(vals)), 0.0))


def von_neumann_entropy(rho: DensityOperator) -> float:
    """Entropy in nats; eigenvalues at or below 1e-14 count as zero."""
    return entropy_from_eigenvalues(np.linalg.eigvalsh(rho.matrix))


def rotation_operator(theta: float, dim: int) -> np.ndarray:
    """``exp(-i theta n)``: multiplies Fock amplitude ``c_n`` by ``e^{-i n theta}``."""
    return np.diag(np.exp(-1j * theta * np.arange(dim)))


def displacement_operator(alpha: complex, dim: int) -> np.ndarray:
    """``exp(alpha a^dag - alpha* a)`` exponentiated on the truncated space."""
    a = destroy(dim)
    return expm(alpha * a.conj().T - np.conj(alpha) * a)


def squeeze_operator(xi: complex, dim: int) -> np.ndarray:
    """``exp((xi* a^2 - xi a^dag^2)/2)``; real ``xi > 0`` squeezes ``q``."""
    a = destroy(dim)
    ad = a.conj().T
    return expm(0.5 * (np.conj(xi) * (a @ a) - xi * (ad @ ad)))
