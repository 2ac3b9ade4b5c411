"""Executable checks of the monotone properties N0-N4.

QNG is only computable on the noisy single-photon diagonal family (and on
pure states), so the QNG-level checks run there; the NG-level checks use
general truncated states.
"""
from __future__ import annotations

from dataclasses import dataclass, field
import math

import numpy as np

from . import roof
from .channels import ChannelSpec, apply
from .family import NoisyPhotonParams, density, diagonal_state
from .fock import DensityOperator, coherent_state, thermal_state, vacuum
from .gaussian import non_gaussianity

N3_TOL = 1e-7
N4_QNG_TOL = 1e-10
N4_NG_TOL = 1e-7
N2_TOL = 1e-10
N0_TOL = 1e-9
HARNESS_DIM = 40
DEFAULT_SEED = 20240601
DEFAULT_ETAS = (0.0, 0.25, 0.5, 0.75, 1.0)
PROPERTY_NAMES = ("n0", "n1", "n2", "n3", "n4")


@dataclass
class PropertyReport:
    name: str
    tolerance: float
    checks: int = 0
    worst: float = -math.inf
    violations: list[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.violations

    def record(self, residual: float, describe, tolerance=None) -> None:
        """Count one check; ``residual > tolerance`` is a violation."""
        self.checks += 1
        self.worst = max(self.worst, residual)
        tol = self.tolerance if tolerance is None else tolerance
        if not residual <= tol:
            self.violations.append(describe() if callable(describe) else str(describe))

    def merge(self, other: "PropertyReport") -> "PropertyReport":
        self.checks += other.checks
        self.worst = max(self.worst, other.worst)
        self.violations.extend(other.violations)
        return self

    def summary(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return (f"{self.name}: {status} checks={self.checks} "
                f"worst={self.worst:.3e} tol={self.tolerance:g} "
                f"violations={len(self.violations)}")


def random_family_params(rng, count):
    ps = rng.uniform(0.0, 1.0, count)
    out = []
    for p in ps:
        r = rng.uniform(0.0, 1.0) * math.sqrt(p * (1.0 - p))
        out.append(NoisyPhotonParams(float(p), float(r), float(rng.uniform(0, 2 * math.pi))))
    return out


def random_low_photon_state(rng, dim=30, support=5) -> DensityOperator:
    g = rng.normal(size=(support, support)) + 1j * rng.normal(size=(support, support))
    m = np.zeros((dim, dim), dtype=complex)
    block = g @ g.conj().T
    m[:support, :support] = block / np.trace(block).real
    return DensityOperator(m)


def random_unitary_spec(rng) -> ChannelSpec:
    kind = rng.integers(3)
    if kind == 0:
        return ChannelSpec.phase_rotation(rng.uniform(0, 2 * math.pi))
    phase = np.exp(1j * rng.uniform(0, 2 * math.pi))
    if kind == 1:
        return ChannelSpec.displacement(rng.uniform(0, 0.5) * phase)
    return ChannelSpec.squeeze(rng.uniform(0, 0.3) * phase)


def check_n0_nonnegativity(states, ps=None, env=None) -> PropertyReport:
    """NG of each state and QNG on the diagonal family are >= 0."""
    rep = PropertyReport("n0", N0_TOL)
    for i, rho in enumerate(states):
        value = non_gaussianity(rho)
        rep.record(-value, lambda: f"state #{i}: NG = {value:.3e}")
    if ps is not None:
        qs = roof.qng_noisy_photon_many(ps, env)
        for p, q in zip(ps, qs):
            rep.record(-q, lambda: f"p={p:.6g}: QNG = {q:.3e}")
    return rep


def check_n1_faithfulness(dim=30) -> PropertyReport:
    """NG > 0.01 on noisy photons, NG < 1e-6 on Gaussian states."""
    rep = PropertyReport("n1", 0.0)
    for p in (0.1, 0.5, 1.0):
        value = non_gaussianity(diagonal_state(p, dim))
        rep.record(0.01 - value, lambda: f"p={p}: NG = {value:.3e} not > 0.01")
    gaussians = {
        "vacuum": vacuum(dim),
        "coherent(0.5)": coherent_state(0.5, dim),
        "coherent(0.3+0.4j)": coherent_state(0.3 + 0.4j, dim),
        "thermal(0.3)": thermal_state(0.3, dim),
    }
    for label, rho in gaussians.items():
        value = non_gaussianity(rho)
        rep.record(value - 1e-6, lambda: f"{label}: NG = {value:.3e} not < 1e-6")
    return rep


def check_n2_convexity(samples, env=None) -> PropertyReport:
    """``Q[l rho_a + (1-l) rho_b] <= l Q[rho_a] + (1-l) Q[rho_b]``.

    ``samples`` holds ``(p_a, p_b, l)`` rows; mixing two diagonal family
    states gives the diagonal state of the mixed fraction.
    """
    samples = np.asarray(samples, dtype=float).reshape(-1, 3)
    pa, pb, lam = samples.T
    qa = roof.qng_noisy_photon_many(pa, env)
    qb = roof.qng_noisy_photon_many(pb, env)
    qm = roof.qng_noisy_photon_many(lam * pa + (1.0 - lam) * pb, env)
    excess = qm - (lam * qa + (1.0 - lam) * qb)
    rep = PropertyReport("n2", N2_TOL)
    for k, e in enumerate(excess):
        rep.record(float(e), lambda: f"(p_a, p_b, l) = {tuple(samples[k])}: excess {e:.3e}")
    return rep


def check_n3_invariance(rho: DensityOperator, unitary_spec: ChannelSpec) -> PropertyReport:
    """``|NG(rho) - NG(U rho U^dag)| <= 1e-7``."""
    if not unitary_spec.is_unitary:
        raise ValueError("N3 concerns Gaussian unitaries")
    before = non_gaussianity(rho)
    after = non_gaussianity(apply(unitary_spec, rho))
    rep = PropertyReport("n3", N3_TOL)
    diff = abs(before - after)
    rep.record(diff, lambda: f"{unitary_spec}: NG {before:.9g} -> {after:.9g}")
    return rep


def check_n4_monotonicity(p_values, eta_values, env=None, ng_trials=20,
                          seed=DEFAULT_SEED) -> PropertyReport:
    """Loss never raises QNG on the diagonal family, nor NG on family states.

    Loss with transmissivity ``eta`` maps the diagonal fraction ``p`` to
    ``eta p``, so ``Q[rho_{eta p}] <= Q[rho_p]`` is checked pairwise.
    """
    rep = PropertyReport("n4", N4_QNG_TOL)
    ps = np.asarray(p_values, dtype=float)
    q_in = roof.qng_noisy_photon_many(ps, env)
    for eta in eta_values:
        q_out = roof.qng_noisy_photon_many(eta * ps, env)
        for p, a, b in zip(ps, q_in, q_out):
            rep.record(float(b - a),
                       lambda: f"(p={p:.6g}, eta={eta:g}): Q {a:.9g} -> {b:.9g}")

    # loss closure of the family and NG monotonicity on coherent family states
    rng = np.random.default_rng(seed)
    for params in random_family_params(rng, ng_trials):
        eta = float(rng.uniform(0.0, 1.0))
        rho = density(params, 10)
        out = apply(ChannelSpec.pure_loss(eta), rho)
        expected = density(NoisyPhotonParams(eta * params.p, math.sqrt(eta) * params.r,
                                             params.theta), 10)
        gap = float(np.max(np.abs(out.matrix - expected.matrix)))
        rep.record(gap, lambda: f"{params}, eta={eta:.4g}: loss output off family by {gap:.3e}",
                   N4_NG_TOL)
        before, after = non_gaussianity(rho), non_gaussianity(out)
        rep.record(after - before,
                   lambda: f"{params}, eta={eta:.4g}: NG {before:.9g} -> {after:.9g}",
                   N4_NG_TOL)
    return rep


def run_n3(trials, rng, dim=HARNESS_DIM) -> PropertyReport:
    rep = PropertyReport("n3", N3_TOL)
    for params in random_family_params(rng, trials):
        rho = density(params, dim)
        rep.merge(check_n3_invariance(rho, random_unitary_spec(rng)))
    # QNG level: rotations leave every diagonal family state unchanged
    for p in np.linspace(0.0, 1.0, 11):
        rho = diagonal_state(float(p), dim)
        out = apply(ChannelSpec.phase_rotation(rng.uniform(0, 2 * math.pi)), rho)
        gap = float(np.max(np.abs(out.matrix - rho.matrix)))
        rep.record(gap, lambda: f"rotation moved diagonal state p={p:.3g} by {gap:.3e}")
    return rep


def run_properties(seed=DEFAULT_SEED, only=None, trials=None) -> list[PropertyReport]:
    """Run the harness.

    ``trials`` overrides the per-property sample count (random states for
    N0, random triples for N2, random unitaries for N3, random lossy family
    states for N4).
    """
    selected = PROPERTY_NAMES if not only else tuple(only)
    for name in selected:
        if name not in PROPERTY_NAMES:
            raise ValueError(f"unknown property {name!r}")
    env = roof.solve_envelope()
    reports = []
    for name in selected:
        rng = np.random.default_rng([seed, PROPERTY_NAMES.index(name)])
        if name == "n0":
            count = 100 if trials is None else trials
            states = [density(q) for q in random_family_params(rng, count)]
            states += [random_low_photon_state(rng) for _ in range(count)]
            reports.append(check_n0_nonnegativity(states, np.linspace(0, 1, 1001), env))
        elif name == "n1":
            reports.append(check_n1_faithfulness())
        elif name == "n2":
            count = 10_000 if trials is None else trials
            samples = np.column_stack([rng.uniform(0, 1, (count, 2)),
                                       rng.uniform(0, 1, count)])
            reports.append(check_n2_convexity(samples, env))
        elif name == "n3":
            reports.append(run_n3(100 if trials is None else trials, rng))
        elif name == "n4":
            reports.append(check_n4_monotonicity(
                np.linspace(0, 1, 1001), DEFAULT_ETAS, env,
                ng_trials=20 if trials is None else trials, seed=int(rng.integers(2**31))))
    return reports
