"""Exit criteria for the package, one test per criterion.

Run ``pytest tests/test_acceptance.py`` to get the pass/fail summary.
"""
import math
import time

import numpy as np

from relqng import family, roof
from relqng.family import NoisyPhotonParams, density, diagonal_state
from relqng.fock import DensityOperator
from relqng.gaussian import block_relative_entropy_identity, gaussify_fock, relative_entropy
from relqng.properties import run_properties

SEED = 20240601


def test_envelope_constants(criterion):
    roof.solve_envelope.cache_clear()
    t0 = time.perf_counter()
    env = roof.solve_envelope()
    elapsed = time.perf_counter() - t0
    ok = abs(env.p1 - 0.0559) <= 5e-4 and abs(env.p2 - 0.0701) <= 5e-4 and elapsed <= 10
    criterion(1, "tangent points", ok,
              f"p1={env.p1:.6f} p2={env.p2:.6f} (target 0.0559/0.0701 +-5e-4) in {elapsed:.2f}s")
    assert ok


def test_crossover(criterion):
    t0 = time.perf_counter()
    c = family.crossover()
    elapsed = time.perf_counter() - t0
    ok = abs(c - 0.062) <= 0.002 and elapsed <= 5
    criterion(2, "r_opt crossover", ok, f"c={c:.6f} (target 0.062 +-0.002) in {elapsed:.3f}s")
    assert ok


def test_oracle_equivalence(criterion):
    t0 = time.perf_counter()
    worst = 0.0
    for p in np.linspace(0.02, 0.98, 10):
        r_max = math.sqrt(p * (1 - p))
        for r in np.linspace(0.0, 0.95 * r_max, 10):
            for theta in np.arange(4) * math.pi / 4:
                params = NoisyPhotonParams(float(p), float(r), float(theta))
                rho = density(params, 30)
                oracle = relative_entropy(rho, gaussify_fock(rho))
                worst = max(worst, abs(family.ng_closed_form(params) - oracle))
    elapsed = time.perf_counter() - t0
    ok = worst <= 1e-5 and elapsed <= 60
    criterion(3, "closed form vs Fock oracle", ok,
              f"max |diff|={worst:.2e} (tol 1e-5) over 400 states in {elapsed:.1f}s")
    assert ok


def test_derivative_validation(criterion):
    rng = np.random.default_rng(SEED)
    h = 1e-6
    worst = 0.0
    for _ in range(100):
        p = rng.uniform(0.01, 0.99)
        r = rng.uniform(0.01, 0.99) * math.sqrt(p * (1 - p))
        fd = (family.ng_closed_form(NoisyPhotonParams(p, r + h))
              - family.ng_closed_form(NoisyPhotonParams(p, r - h))) / (2 * h)
        analytic = family.ng_derivative_r(NoisyPhotonParams(p, r))
        worst = max(worst, abs(analytic - fd) / abs(fd))
    ok = worst <= 1e-6
    criterion(4, "dN/dr vs central differences", ok,
              f"max relative error={worst:.2e} (tol 1e-6) at 100 points")
    assert ok


def test_envelope_cross_validation(criterion):
    env = roof.solve_envelope()
    samples = roof.sample_m(2000)
    hull = roof.envelope_bruteforce(samples)
    ps = samples[:, 0]
    worst = float(np.max(np.abs(hull(ps) - roof.qng_noisy_photon_many(ps, env))))
    ok = worst <= 1e-5
    criterion(5, "tangent envelope vs 2000-point hull", ok,
              f"max |diff|={worst:.2e} (tol 1e-5) at the hull sample points")
    assert ok


def test_property_suite(criterion):
    env = roof.solve_envelope()
    t0 = time.perf_counter()
    reports = run_properties(seed=SEED)
    rng = np.random.default_rng(SEED)
    a, b = rng.uniform(0, 1, (2, 10_000))
    mid = (roof.qng_noisy_photon_many(0.5 * (a + b), env)
           - 0.5 * (roof.qng_noisy_photon_many(a, env) + roof.qng_noisy_photon_many(b, env)))
    elapsed = time.perf_counter() - t0
    violations = sum(len(r.violations) for r in reports) + int(np.sum(mid > 1e-10))
    ok = violations == 0 and elapsed <= 120
    detail = "; ".join(f"{r.name} {r.checks} checks" for r in reports)
    criterion(6, "N0-N4 property suite", ok,
              f"{violations} violations ({detail}; 10000 midpoints) in {elapsed:.1f}s")
    assert ok


def test_decomposition_achievability(criterion):
    env = roof.solve_envelope()
    worst_rho = worst_q = 0.0
    for p in (0.01, 0.03, env.p1, 0.065, env.p2, 0.3, 0.9):
        dec = roof.optimal_decomposition(p, env)
        worst_rho = max(worst_rho, float(np.max(np.abs(dec.mixture() - diagonal_state(p).matrix))))
        worst_q = max(worst_q, abs(dec.average_ng() - roof.qng_noisy_photon(p, env)))
    ok = worst_rho <= 1e-10 and worst_q <= 1e-8
    criterion(7, "optimal decompositions", ok,
              f"reconstruction {worst_rho:.1e} (tol 1e-10), NG average {worst_q:.1e} (tol 1e-8)")
    assert ok


def test_qng_below_ng(criterion):
    env = roof.solve_envelope()
    ps = np.linspace(0, 1, 1000)
    q = roof.qng_noisy_photon_many(ps, env)
    ng = np.array([roof.ng_diagonal(float(p)) for p in ps])
    excess = float(np.max(q - ng))
    tail = ps >= env.p2 + 1e-4
    gap = float(np.max(np.abs(q - ng)[tail]))
    ok = excess <= 1e-9 and gap <= 1e-9
    criterion(8, "QNG <= NG, equality above p2", ok,
              f"max(Q-NG)={excess:.1e}, max |Q-NG| for p>=p2={gap:.1e} (tol 1e-9)")
    assert ok


def random_block(rng, dim):
    g = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    m = g @ g.conj().T
    return DensityOperator(m / np.trace(m).real)


def test_block_identity(criterion):
    rng = np.random.default_rng(SEED)
    worst = 0.0
    for _ in range(100):
        k = int(rng.integers(2, 5))
        dims = rng.integers(1, 4, k)
        b1 = [random_block(rng, int(d)) for d in dims]
        b2 = [random_block(rng, int(d)) for d in dims]
        lhs, rhs = block_relative_entropy_identity(rng.dirichlet(np.ones(k)), b1,
                                                   rng.dirichlet(np.ones(k)), b2)
        worst = max(worst, abs(lhs - rhs))
    ok = worst <= 1e-8
    criterion(9, "block relative-entropy identity", ok,
              f"max |lhs-rhs|={worst:.1e} (tol 1e-8) on 100 instances")
    assert ok
