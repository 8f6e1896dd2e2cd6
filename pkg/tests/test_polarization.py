"""
Tests for round-trip propagation of the polarization amplitudes.
"""

import math

import numpy as np
import pytest

from app.domain.models import PolarizationAmplitudes
from app.physics.errors import DomainError
from app.physics.polarization import propagate, round_trip_operator, stokes_tensor

HORIZONTAL = PolarizationAmplitudes(1.0, 0.0)


class TestRoundTripOperator:

    def test_identity_without_rotation_or_absorption(self):
        np.testing.assert_allclose(round_trip_operator(0.0, 1.0).m, np.eye(2), atol=1e-15)

    def test_quarter_turn_into_the_absorbed_channel(self):
        np.testing.assert_allclose(round_trip_operator(math.pi / 2, 0.0).m, [[0.0, -1.0], [0.0, 0.0]], atol=1e-15)

    def test_entries(self):
        m = round_trip_operator(0.0698132, 0.9).m
        np.testing.assert_allclose(m, [[0.997564, -0.0697565], [0.0627809, 0.897808]], atol=1e-6)

    def test_determinant_is_theta(self):
        rng = np.random.default_rng(7)
        for delta_phi, theta in zip(rng.uniform(-math.pi, math.pi, 200), rng.uniform(0.0, 1.0, 200)):
            assert round_trip_operator(delta_phi, theta).determinant == pytest.approx(theta, abs=1e-12)

    def test_orthogonal_without_absorption(self):
        m = round_trip_operator(0.3, 1.0).m
        np.testing.assert_allclose(m.T @ m, np.eye(2), atol=1e-12)

    @pytest.mark.parametrize("delta_phi, theta", [(0.1, -0.1), (0.1, 1.5), (math.inf, 0.5), (math.nan, 0.5)])
    def test_rejects_bad_input(self, delta_phi, theta):
        with pytest.raises(DomainError):
            round_trip_operator(delta_phi, theta)


class TestPropagate:

    def test_free_rotation_is_a_rabi_oscillation(self, delta_phi):
        states = propagate(HORIZONTAL, [delta_phi] * 50, theta=1.0)
        for n, state in enumerate(states):
            assert state.eps_h == pytest.approx(math.cos(n * delta_phi), abs=1e-12)
            assert state.eps_v == pytest.approx(math.sin(n * delta_phi), abs=1e-12)

    def test_full_absorption_projects_every_round_trip(self, delta_phi):
        states = propagate(HORIZONTAL, [delta_phi] * 50, theta=0.0)
        for n, state in enumerate(states):
            assert state.eps_h == pytest.approx(math.cos(delta_phi) ** n, rel=1e-12)
            assert state.eps_v == 0.0

    def test_no_jumps_returns_the_initial_state(self):
        assert propagate(HORIZONTAL, [], theta=0.5) == [HORIZONTAL]

    def test_norm_is_conserved_without_absorption(self):
        rng = np.random.default_rng(1)
        states = propagate(HORIZONTAL, rng.uniform(-0.5, 0.5, 10_000), theta=1.0)
        assert states[-1].norm_squared == pytest.approx(1.0, abs=1e-12)

    def test_norm_never_increases_with_absorption(self):
        rng = np.random.default_rng(2)
        norms = [s.norm_squared for s in propagate(HORIZONTAL, rng.uniform(-1, 1, 500), theta=0.8)]
        assert all(b <= a + 1e-15 for a, b in zip(norms, norms[1:]))
        assert norms[-1] <= 1.0 + 1e-12

    def test_composition_matches_the_operator_product(self):
        a, b, theta = 0.3, -0.7, 0.6
        state = propagate(HORIZONTAL, [a, b], theta)[-1]
        expected = round_trip_operator(b, theta).m @ round_trip_operator(a, theta).m @ HORIZONTAL.as_array()
        np.testing.assert_allclose(state.as_array(), expected, atol=1e-12)

    def test_rejects_non_finite_angles(self):
        with pytest.raises(DomainError):
            propagate(HORIZONTAL, [0.1, math.nan], theta=1.0)


class TestStokesTensor:

    def test_horizontal(self):
        tensor = stokes_tensor(HORIZONTAL)
        assert (tensor.p_h, tensor.p_v, tensor.u) == (1.0, 0.0, 0.0)

    def test_diagonal_has_maximal_coherence(self):
        tensor = stokes_tensor(PolarizationAmplitudes(1 / math.sqrt(2), 1 / math.sqrt(2)))
        assert tensor.p_h == pytest.approx(0.5)
        assert tensor.p_v == pytest.approx(0.5)
        assert tensor.u == pytest.approx(1.0)

    def test_four_degrees(self, delta_phi):
        tensor = stokes_tensor(PolarizationAmplitudes(math.cos(delta_phi), math.sin(delta_phi)))
        assert tensor.p_h == pytest.approx(0.995134, abs=1e-6)
        assert tensor.p_v == pytest.approx(0.004866, abs=1e-6)
        assert tensor.u == pytest.approx(0.139173, abs=1e-6)
        assert tensor.u ** 2 <= 4 * tensor.p_h * tensor.p_v + 1e-12
