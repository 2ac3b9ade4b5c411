"""Relative-entropy non-Gaussianity and convex-roof quantum non-Gaussianity.

Single-mode states live in a truncated Fock basis (:mod:`relqng.fock`).
NG is the entropy gap to the moment-matched Gaussian state
(:mod:`relqng.gaussian`). QNG is the convex roof of NG, computed exactly
for the noisy single-photon family (:mod:`relqng.family`,
:mod:`relqng.roof`). :mod:`relqng.properties` checks the monotone
properties numerically.

All entropies are in nats.
"""
from ._kernels import BACKEND
from .channels import ChannelSpec, apply
from .family import (
    MinimizationResult,
    NoisyPhotonParams,
    crossover,
    density,
    eigenvalues,
    minimize_over_r,
    ng_closed_form,
    ng_derivative_r,
)
from .fock import (
    DensityOperator,
    QuadratureStatistics,
    TruncationError,
    eigen_decompose,
    moments,
    von_neumann_entropy,
)
from .gaussian import (
    block_relative_entropy_identity,
    gaussian_entropy,
    gaussify_fock,
    non_gaussianity,
    relative_entropy,
    thermal_photon_number,
)
from .roof import (
    Decomposition,
    EnvelopeSolution,
    NoSolutionError,
    common_tangent,
    envelope_bruteforce,
    optimal_decomposition,
    qng_noisy_photon,
    qng_pure,
    solve_envelope,
)

__version__ = "0.1.0"
