"""
Tests for the exact finite-Markov-chain solver.
"""

import itertools
import math

import numpy as np
import pytest

from app.domain.models import ChainSpec
from app.physics import chain, closed_forms
from app.physics.errors import DomainError

THREE_STATE = ChainSpec(
    values=(0.05, 0.0, -0.05),
    p0=(1 / 3, 1 / 3, 1 / 3),
    transition=((0.6, 0.3, 0.1), (0.3, 0.4, 0.3), (0.1, 0.3, 0.6)),
)


def _enumerate(spec, n):
    """P_h(n) = <cos² phi_n> summed over every path of the chain."""
    if n == 0:
        return 1.0
    values = np.asarray(spec.values)
    transition = np.asarray(spec.transition)
    total = 0.0
    for path in itertools.product(range(spec.size), repeat=n):
        probability = spec.p0[path[0]]
        for previous, current in zip(path, path[1:]):
            probability *= transition[current, previous]
        total += probability * math.cos(values[list(path)].sum()) ** 2
    return total


class TestPersistenceChain:

    @pytest.mark.parametrize("p", [0.0, 0.3, 0.5, 0.8, 0.95, 1.0])
    def test_matches_closed_form(self, p, delta_phi):
        spec = chain.persistence_chain_spec(delta_phi, p)
        curve = chain.p_h_chain_curve(500, spec)
        expected = [closed_forms.p_h_persistence_exact(n, delta_phi, p) for n in range(501)]
        np.testing.assert_allclose(curve, expected, atol=1e-10)

    def test_single_point_matches_curve(self, delta_phi):
        spec = chain.persistence_chain_spec(delta_phi, 0.8)
        assert chain.p_h_chain(57, spec) == chain.p_h_chain_curve(100, spec)[57]

    @pytest.mark.parametrize("p", [0.1, 0.5, 0.9])
    def test_projective_is_independent_of_memory(self, p, delta_phi):
        spec = chain.persistence_chain_spec(delta_phi, p)
        for n in (0, 1, 10, 100):
            assert chain.p_h_chain_projective(n, spec) == pytest.approx(closed_forms.p_h_projective(n, delta_phi), rel=1e-12)

    def test_rejects_bad_p(self):
        with pytest.raises(DomainError):
            chain.persistence_chain_spec(0.1, -0.2)


class TestGeneralChain:

    @pytest.mark.parametrize("n", [0, 1, 2, 5])
    def test_matches_path_enumeration(self, n):
        assert chain.p_h_chain(n, THREE_STATE) == pytest.approx(_enumerate(THREE_STATE, n), abs=1e-12)

    def test_curve_starts_at_one(self):
        assert chain.p_h_chain_curve(0, THREE_STATE).tolist() == [1.0]

    def test_negative_horizon(self):
        with pytest.raises(DomainError):
            chain.p_h_chain_curve(-1, THREE_STATE)

    def test_rejects_non_stochastic_columns(self):
        with pytest.raises(DomainError):
            ChainSpec(values=(0.1, -0.1), p0=(0.5, 0.5), transition=((0.5, 0.5), (0.6, 0.5)))


def _random_chain(rng, size):
    transition = rng.uniform(0.0, 1.0, (size, size))
    transition /= transition.sum(axis=0, keepdims=True)
    p0 = rng.uniform(0.0, 1.0, size)
    return ChainSpec(values=rng.uniform(-1.5, 1.5, size), p0=p0 / p0.sum(), transition=transition)


class TestChainInvariants:

    @pytest.mark.parametrize("n", [0, 1, 10, 37, 500])
    def test_single_state_is_a_fixed_rotation(self, n, delta_phi):
        spec = ChainSpec(values=(delta_phi,), p0=(1.0,), transition=((1.0,),))
        assert chain.p_h_chain(n, spec) == pytest.approx(math.cos(n * delta_phi) ** 2, abs=1e-12)

    @pytest.mark.parametrize("p", [0.0, 0.2, 0.5, 0.8, 1.0])
    def test_sign_of_the_jump_does_not_matter(self, p, delta_phi):
        plus = chain.p_h_chain_curve(300, chain.persistence_chain_spec(delta_phi, p))
        minus = chain.p_h_chain_curve(300, chain.persistence_chain_spec(-delta_phi, p))
        np.testing.assert_allclose(plus, minus, atol=1e-12)

    def test_sign_flip_of_an_asymmetric_two_point_chain(self):
        spec = ChainSpec(values=(0.3, -0.3), p0=(0.5, 0.5), transition=((0.9, 0.4), (0.1, 0.6)))
        flipped = ChainSpec(values=(-0.3, 0.3), p0=spec.p0, transition=spec.transition)
        np.testing.assert_allclose(chain.p_h_chain_curve(200, spec), chain.p_h_chain_curve(200, flipped), atol=1e-12)

    @pytest.mark.parametrize("size", [1, 2, 3, 5])
    def test_probability_stays_in_the_unit_interval(self, size):
        rng = np.random.default_rng(size)
        for _ in range(10):
            spec = _random_chain(rng, size)
            curve = chain.p_h_chain_curve(300, spec)
            assert np.all(curve >= -1e-12)
            assert np.all(curve <= 1.0 + 1e-12)

            phase = np.exp(2j * np.asarray(spec.values))
            f = np.asarray(spec.p0, dtype=complex)
            for _ in range(300):
                f = np.asarray(spec.transition) @ (phase * f)
                assert abs(f.sum()) <= 1.0 + 1e-12
