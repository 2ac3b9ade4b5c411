import math

import numpy as np
import pytest
from numpy.testing import assert_allclose

from relqng import family
from relqng.family import NoisyPhotonParams, diagonal_state
from relqng.fock import coherent_state, fock_state, thermal_state, vacuum
from relqng.gaussian import non_gaussianity
from relqng.roof import (
    HullEnvelope,
    NoSolutionError,
    common_tangent,
    envelope_bruteforce,
    lower_hull,
    optimal_decomposition,
    qng_noisy_photon,
    qng_noisy_photon_many,
    qng_pure,
    sample_m,
)


def double_well(p):
    return (p - 0.3) ** 2 if p < 0.5 else 2 * (p - 0.7) ** 2 + 0.01


def double_well_prime(p):
    return 2 * (p - 0.3) if p < 0.5 else 4 * (p - 0.7)


class TestCommonTangent:
    def test_double_well(self):
        # slope s gives p1 = 0.3 + s/2, p2 = 0.7 + s/4; the chord condition
        # reduces to s^2/8 - 0.4 s + 0.01 = 0
        s = 4 * (0.4 - math.sqrt(0.155))
        env = common_tangent(double_well, double_well_prime, (0.0, 0.49), (0.5, 1.0))
        assert_allclose([env.slope, env.p1, env.p2], [s, 0.3 + s / 2, 0.7 + s / 4], atol=1e-8)
        assert abs(env.residual) <= 1e-9

    def test_convex_function_has_no_tangent(self):
        with pytest.raises(NoSolutionError):
            common_tangent(lambda p: p * p, lambda p: 2 * p, (0.0, 0.5), (0.5, 1.0))

    def test_rejects_nonconvex_piece(self):
        with pytest.raises(ValueError, match="not convex"):
            common_tangent(lambda p: -p * p, lambda p: -2 * p, (0.0, 0.5), (0.5, 1.0))

    def test_family_constants(self, env):
        assert abs(env.p1 - 0.0559) <= 5e-4
        assert abs(env.p2 - 0.0701) <= 5e-4
        assert abs(env.residual) <= 1e-9
        assert abs(family.m_prime(env.p1) - env.slope) <= 1e-7
        assert abs(family.m_prime(env.p2) - env.slope) <= 1e-7
        assert env.m_p1 == family.m_of_p(env.p1)


class TestHull:
    def test_convex_samples_kept(self):
        x = np.linspace(0, 1, 101)
        hull = lower_hull(np.column_stack([x, x**2]))
        assert len(hull) == 101
        xs = np.linspace(0, 1, 1001)
        assert_allclose(HullEnvelope(np.column_stack([x, x**2]))(xs), np.interp(xs, x, x**2))

    def test_collinear(self):
        hull = lower_hull([(0, 0), (1, 1), (2, 2)])
        assert_allclose(hull, [(0, 0), (2, 2)])

    def test_drops_points_above(self):
        hull = lower_hull([(0, 0), (1, 5), (2, -1), (3, 0), (1.5, 3)])
        assert_allclose(hull, [(0, 0), (2, -1), (3, 0)])

    def test_requires_samples(self):
        with pytest.raises(ValueError):
            envelope_bruteforce([(0, 0), (1, 1)])


class TestQNG:
    def test_endpoints(self, env):
        assert qng_noisy_photon(0.0, env) == 0.0
        assert_allclose(qng_noisy_photon(1.0, env), 2 * math.log(2), rtol=1e-15)

    def test_middle_branch_linear(self, env):
        p = 0.065
        w = (p - env.p1) / (env.p2 - env.p1)
        assert qng_noisy_photon(p, env) == pytest.approx(w * env.m_p2 + (1 - w) * env.m_p1,
                                                         abs=1e-15)
        assert qng_noisy_photon(p, env) < family.m_of_p(p)

    def test_continuity(self, env):
        for edge in (env.p1, env.p2):
            for d in (1e-12, -1e-12):
                assert abs(qng_noisy_photon(edge + d, env) - qng_noisy_photon(edge, env)) <= 1e-9

    def test_many_matches_scalar(self, env):
        ps = np.linspace(0, 1, 301)
        assert_allclose(qng_noisy_photon_many(ps, env),
                        [qng_noisy_photon(p, env) for p in ps], rtol=0, atol=1e-15)

    def test_dominated_by_m(self, env):
        ps = np.linspace(0, 1, 1000)
        q = qng_noisy_photon_many(ps, env)
        m, _ = family.minimize_many(ps)
        assert np.all(q <= m + 1e-10)
        outside = (ps <= env.p1) | (ps >= env.p2)
        assert np.max(np.abs(q - m)[outside]) <= 1e-9

    def test_midpoint_convexity(self, env):
        rng = np.random.default_rng(9)
        a, b = rng.uniform(0, 1, (2, 10_000))
        qa, qb = qng_noisy_photon_many(a, env), qng_noisy_photon_many(b, env)
        qm = qng_noisy_photon_many(0.5 * (a + b), env)
        assert np.max(qm - 0.5 * (qa + qb)) <= 1e-10

    def test_hull_agreement(self, env):
        samples = sample_m(2000)
        hull = envelope_bruteforce(samples)
        assert np.max(np.abs(hull(samples[:, 0]) - qng_noisy_photon_many(samples[:, 0], env))) <= 1e-5

    def test_not_above_ng(self, env):
        for p in np.linspace(0, 1, 101):
            assert qng_noisy_photon(p, env) <= non_gaussianity(diagonal_state(p)) + 1e-9


class TestDecomposition:
    def test_self_for_large_p(self, env):
        dec = optimal_decomposition(0.5, env)
        assert dec.components == ((1.0, NoisyPhotonParams(0.5)),)

    def test_pair_for_small_p(self, env):
        dec = optimal_decomposition(0.03, env)
        (w1, a), (w2, b) = dec.components
        assert w1 == w2 == 0.5
        assert a.r == b.r > 0 and a.p == b.p == 0.03
        assert_allclose(dec.mixture(), diagonal_state(0.03).matrix, atol=1e-10)

    def test_three_components(self, env):
        p = 0.065
        dec = optimal_decomposition(p, env)
        far = (env.p2 - p) / (env.p2 - env.p1)
        assert_allclose(dec.weights, [0.5 * far, 0.5 * far, (p - env.p1) / (env.p2 - env.p1)])
        assert dec.components[2][1] == NoisyPhotonParams(env.p2)
        assert_allclose(dec.weights.sum(), 1.0, atol=1e-12)

    @pytest.mark.parametrize("p", [0.0, 0.01, 0.03, "p1", 0.065, "p2", 0.3, 0.9, 1.0])
    def test_achieves_qng(self, env, p):
        p = {"p1": env.p1, "p2": env.p2}.get(p, p)
        dec = optimal_decomposition(p, env)
        assert np.max(np.abs(dec.mixture() - diagonal_state(p).matrix)) <= 1e-10
        assert abs(dec.average_ng() - qng_noisy_photon(p, env)) <= 1e-8


class TestPure:
    def test_values(self):
        assert_allclose(qng_pure(fock_state(1)), 2 * math.log(2))
        assert qng_pure(vacuum()) == 0.0
        assert qng_pure(coherent_state(0.5)) <= 1e-6

    def test_rejects_mixed(self):
        with pytest.raises(ValueError, match="pure"):
            qng_pure(thermal_state(0.2))
