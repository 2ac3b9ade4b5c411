"""Gaussian unitaries and the pure-loss channel on truncated Fock states."""
from __future__ import annotations

from dataclasses import dataclass
from math import comb, sqrt

import numpy as np

from .fock import (
    DensityOperator,
    TruncationError,
    displacement_operator,
    rotation_operator,
    squeeze_operator,
)

KINDS = ("phase_rotation", "displacement", "squeeze", "pure_loss")
UNITARY_MARGIN = 10
MARGIN_LIMIT = 1e-10
TRACE_DEFICIT_LIMIT = 1e-8


@dataclass(frozen=True)
class ChannelSpec:
    kind: str
    parameter: complex | float = 0.0

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown channel kind {self.kind!r}")
        if self.kind == "pure_loss":
            eta = self.parameter
            if isinstance(eta, complex) or not 0.0 <= eta <= 1.0:
                raise ValueError(f"transmissivity {eta!r} outside [0, 1]")
        if self.kind == "phase_rotation" and isinstance(self.parameter, complex):
            raise ValueError("rotation angle must be real")

    @classmethod
    def phase_rotation(cls, angle: float) -> "ChannelSpec":
        return cls("phase_rotation", float(angle))

    @classmethod
    def displacement(cls, alpha: complex) -> "ChannelSpec":
        return cls("displacement", complex(alpha))

    @classmethod
    def squeeze(cls, xi: complex) -> "ChannelSpec":
        return cls("squeeze", complex(xi))

    @classmethod
    def pure_loss(cls, eta: float) -> "ChannelSpec":
        return cls("pure_loss", float(eta))

    @property
    def is_unitary(self) -> bool:
        return self.kind != "pure_loss"


def unitary_matrix(spec: ChannelSpec, dim: int) -> np.ndarray:
    if spec.kind == "phase_rotation":
        return rotation_operator(spec.parameter, dim)
    if spec.kind == "displacement":
        return displacement_operator(spec.parameter, dim)
    if spec.kind == "squeeze":
        return squeeze_operator(spec.parameter, dim)
    raise ValueError(f"{spec.kind} is not a unitary")


def loss_kraus(eta: float, dim: int) -> list[np.ndarray]:
    """``K_k = sum_n sqrt(C(n,k) eta^(n-k) (1-eta)^k) |n-k><n|``."""
    ops = []
    for k in range(dim):
        K = np.zeros((dim, dim))
        for n in range(k, dim):
            K[n - k, n] = sqrt(comb(n, k) * eta ** (n - k) * (1.0 - eta) ** k)
        ops.append(K)
    return ops


def apply(spec: ChannelSpec, rho: DensityOperator) -> DensityOperator:
    """Channel output on the same truncation as the input.

    Displacements and squeezers need the top 10 Fock levels of the input
    to be empty; they are exponentiated on the truncated space.
    """
    dim = rho.dim
    m = rho.matrix
    if spec.kind == "pure_loss":
        out = sum(K @ m @ K.T for K in loss_kraus(spec.parameter, dim))
    else:
        if spec.kind != "phase_rotation":
            tail = rho.populations[max(dim - UNITARY_MARGIN, 0):].sum()
            if tail > MARGIN_LIMIT:
                raise TruncationError(
                    f"population {tail:.3g} within {UNITARY_MARGIN} levels of the cutoff"
                )
        u = unitary_matrix(spec, dim)
        out = u @ m @ u.conj().T
    out = 0.5 * (out + out.conj().T)
    deficit = 1.0 - np.trace(out).real
    if abs(deficit) > TRACE_DEFICIT_LIMIT:
        raise TruncationError(f"channel output lost {deficit:.3g} of its trace")
    return DensityOperator(out / np.trace(out).real)
