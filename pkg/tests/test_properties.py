import math

import numpy as np
import pytest

from relqng.channels import ChannelSpec
from relqng.family import NoisyPhotonParams, density
from relqng.fock import fock_state, vacuum
from relqng.properties import (
    PropertyReport,
    check_n1_faithfulness,
    check_n2_convexity,
    check_n3_invariance,
    check_n4_monotonicity,
    run_properties,
)
from relqng.roof import qng_noisy_photon


class TestN3:
    def test_rotation(self):
        rep = check_n3_invariance(density(NoisyPhotonParams(0.3, 0.2, 0.0), 40),
                                  ChannelSpec.phase_rotation(math.pi / 5))
        assert rep.passed and rep.checks == 1

    def test_displaced_photon(self):
        assert check_n3_invariance(fock_state(1, 40), ChannelSpec.displacement(0.3)).passed

    def test_squeezed_vacuum_stays_gaussian(self):
        rep = check_n3_invariance(vacuum(40), ChannelSpec.squeeze(0.2))
        assert rep.worst <= 1e-6

    def test_rejects_loss(self):
        with pytest.raises(ValueError):
            check_n3_invariance(vacuum(40), ChannelSpec.pure_loss(0.5))


class TestN4:
    def test_pair(self, env):
        assert qng_noisy_photon(0.45, env) <= qng_noisy_photon(0.9, env)
        assert check_n4_monotonicity([0.9], [0.5], env, ng_trials=0).passed

    def test_identity_equality(self, env):
        rep = check_n4_monotonicity(np.linspace(0, 1, 21), [1.0], env, ng_trials=0)
        assert rep.passed and rep.worst == 0.0

    def test_full_loss(self, env):
        assert qng_noisy_photon(0.0, env) == 0.0
        assert check_n4_monotonicity(np.linspace(0, 1, 21), [0.0], env, ng_trials=0).passed

    def test_with_family_states(self, env):
        rep = check_n4_monotonicity([0.2, 0.7], [0.5], env, ng_trials=10, seed=3)
        assert rep.passed and rep.checks == 2 + 20


class TestN2:
    def test_degenerate_cases(self, env):
        rep = check_n2_convexity([(0.3, 0.3, 0.4), (0.1, 0.8, 0.0), (0.1, 0.8, 1.0)], env)
        assert rep.passed and abs(rep.worst) <= 1e-15

    def test_strict_near_nonconvex_region(self, env):
        rep = check_n2_convexity([(0.02, 0.09, 0.5)], env)
        assert rep.passed and rep.worst < -1e-5

    def test_flags_a_violation(self, env):
        rep = PropertyReport("n2", 1e-10)
        rep.record(1e-3, "synthetic")
        assert not rep.passed and rep.violations == ["synthetic"]


def test_faithfulness():
    rep = check_n1_faithfulness()
    assert rep.passed and rep.checks == 7


def test_harness_deterministic():
    a = run_properties(seed=7, only=["n3"], trials=5)
    b = run_properties(seed=7, only=["n3"], trials=5)
    assert [r.worst for r in a] == [r.worst for r in b]


def test_unknown_property():
    with pytest.raises(ValueError):
        run_properties(only=["n9"])
