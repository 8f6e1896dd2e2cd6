"""
Tests for jump-chain sampling and correlation functions.

Covers:
- Reproducible PCG64 substreams
- Persistence chains: limits p = 1 and p = 0, repeat frequency
- Geometric correlations, correlation times and truncated series
- Markov-chain correlations and the empirical estimator
- Agreement of the persistence sampler with its Markov embedding
"""

import math

import numpy as np
import pytest
from scipy.stats import chisquare

from app.domain.models import (
    CorrelationModel,
    FiniteMarkovJumps,
    FixedJumps,
    IidTwoPointJumps,
    PersistenceJumps,
)
from app.physics.errors import ConvergenceError, DivergenceError, DomainError, EmptyEnsembleError
from app.physics.noise import (
    check_series_tail,
    correlation,
    correlation_time,
    correlation_time_series,
    empirical_correlation,
    empirical_correlation_stats,
    markov_correlation,
    mean_cos2,
    persistence_correlation_model,
    sample_chain,
    sample_chains,
    substream,
)


# --- Sampling ---

class TestSampling:

    def test_same_seed_same_chain(self):
        model = PersistenceJumps(delta_phi=0.1, p=0.8)
        np.testing.assert_array_equal(sample_chain(model, 500, seed=42), sample_chain(model, 500, seed=42))

    def test_streams_are_independent(self):
        model = IidTwoPointJumps(delta_phi=0.1)
        assert not np.array_equal(sample_chain(model, 200, seed=1, stream=0), sample_chain(model, 200, seed=1, stream=1))

    def test_rows_match_single_streams(self):
        model = PersistenceJumps(delta_phi=0.2, p=0.3)
        chains = sample_chains(model, 50, seed=9, count=4, start=10)
        for row in range(4):
            np.testing.assert_array_equal(chains[row], sample_chain(model, 50, seed=9, stream=10 + row))

    def test_substream_rejects_negative_seed(self):
        with pytest.raises(DomainError):
            substream(-1)

    def test_empty_chain(self):
        assert sample_chain(PersistenceJumps(delta_phi=0.1, p=0.5), 0, seed=0).shape == (0,)

    def test_fixed_jumps(self):
        np.testing.assert_array_equal(sample_chain(FixedJumps(delta_phi=0.3), 5, seed=0), np.full(5, 0.3))

    def test_iid_jumps_take_both_signs(self):
        chain = sample_chain(IidTwoPointJumps(delta_phi=0.1), 1000, seed=3)
        assert set(np.round(chain, 12)) == {0.1, -0.1}


class TestPersistenceChain:

    def test_p_one_repeats_the_first_jump(self):
        chain = sample_chain(PersistenceJumps(delta_phi=0.05, p=1.0), 1000, seed=5)
        assert np.all(chain == chain[0])
        assert abs(chain[0]) == 0.05

    def test_p_zero_alternates(self):
        chain = sample_chain(PersistenceJumps(delta_phi=0.05, p=0.0), 1000, seed=5)
        np.testing.assert_array_equal(chain[1:], -chain[:-1])

    def test_repeat_frequency(self):
        chain = sample_chain(PersistenceJumps(delta_phi=0.1, p=0.8), 1_000_000, seed=0)
        repeats = np.mean(chain[1:] == chain[:-1])
        assert abs(repeats - 0.8) <= 0.002

    def test_first_jump_is_unbiased(self):
        chains = sample_chains(PersistenceJumps(delta_phi=1.0, p=0.9), 1, seed=11, count=20_000)
        assert abs(chains[:, 0].mean()) < 0.03


# --- Correlations ---

class TestCorrelation:

    @pytest.mark.parametrize("gamma, lag, expected", [
        (0.0, 0, 0.01),
        (0.7, 2, 0.0049),
        (-0.9, 3, -0.00729),
    ])
    def test_geometric_values(self, gamma, lag, expected):
        model = CorrelationModel(b=0.1, gamma=gamma, tau_r=0.07)
        assert correlation(model, lag) == pytest.approx(expected, rel=1e-12)

    def test_symmetric_in_lag(self):
        model = CorrelationModel(b=0.1, gamma=-0.5, tau_r=1.0)
        assert correlation(model, -3) == correlation(model, 3)

    def test_persistence_model_degree(self):
        model = persistence_correlation_model(0.07, 0.8, tau_r=0.07)
        assert model.gamma == pytest.approx(0.6)
        assert model.b == pytest.approx(0.07)

    def test_persistence_model_rejects_bad_p(self):
        with pytest.raises(DomainError):
            persistence_correlation_model(0.1, 1.2, tau_r=1.0)

    @pytest.mark.parametrize("gamma, expected", [(0.0, 0.07), (0.7, 0.2333333333)])
    def test_correlation_time(self, gamma, expected):
        assert correlation_time(CorrelationModel(b=0.1, gamma=gamma, tau_r=0.07)) == pytest.approx(expected, rel=1e-9)

    def test_correlation_time_diverges_for_frozen_noise(self):
        with pytest.raises(DivergenceError):
            correlation_time(CorrelationModel(b=0.1, gamma=1.0, tau_r=0.07))

    def test_series_matches_geometric_form(self):
        model = CorrelationModel(b=0.1, gamma=0.7, tau_r=0.07)
        value = correlation_time_series(lambda n: correlation(model, n), b=0.1, tau_r=0.07, truncation=200)
        assert value == pytest.approx(correlation_time(model), rel=1e-12)


class TestSeriesTail:

    def test_short_truncation_is_rejected(self):
        with pytest.raises(ConvergenceError):
            check_series_tail(lambda n: 0.01 * 0.99 ** n, truncation=10)

    def test_long_truncation_passes(self):
        check_series_tail(lambda n: 0.01 * 0.99 ** n, truncation=4000)

    def test_weight_speeds_up_convergence(self):
        check_series_tail(lambda n: 0.01 * 0.99 ** n, truncation=50, weight=0.5)

    def test_negative_truncation(self):
        with pytest.raises(DomainError):
            check_series_tail(lambda n: 1.0, truncation=-1)


class TestMarkovCorrelation:

    @pytest.mark.parametrize("p", [0.2, 0.5, 0.8])
    def test_persistence_embedding_is_geometric(self, p):
        jumps = PersistenceJumps(delta_phi=0.1, p=p)
        model = persistence_correlation_model(0.1, p, tau_r=1.0)
        for lag in range(6):
            assert markov_correlation(jumps.as_finite_markov(), lag) == pytest.approx(correlation(model, lag), abs=1e-15)

    def test_requires_stationary_start(self):
        jumps = FiniteMarkovJumps(values=(0.1, -0.1), p0=(1.0, 0.0), transition=((0.8, 0.2), (0.2, 0.8)))
        with pytest.raises(DomainError):
            markov_correlation(jumps, 1)


class TestEmpiricalCorrelation:

    @pytest.mark.parametrize("p", [0.1, 0.3, 0.5, 0.8, 0.95])
    def test_agrees_with_geometric_law(self, p):
        chains = sample_chains(PersistenceJumps(delta_phi=0.1, p=p), 200, seed=21, count=2000)
        gamma = 2.0 * p - 1.0
        for lag in range(6):
            mean, stderr = empirical_correlation_stats(chains, lag)
            assert abs(mean - 0.01 * gamma ** lag) <= 4 * stderr + 1e-15

    def test_lag_zero_of_two_point_jumps_is_exact(self):
        chains = sample_chains(IidTwoPointJumps(delta_phi=0.1), 20, seed=2, count=10)
        assert empirical_correlation(chains, 0) == pytest.approx(0.01, rel=1e-12)

    @pytest.mark.parametrize("lag", [0, 1, 2, 7, 19])
    def test_fixed_jumps_give_the_square_at_any_lag(self, lag):
        chains = sample_chains(FixedJumps(delta_phi=0.1), 20, seed=4, count=3)
        assert empirical_correlation(chains, lag) == pytest.approx(0.1 * 0.1, rel=1e-15)

    def test_iid_jumps_are_uncorrelated_at_lag_one(self):
        chains = sample_chains(IidTwoPointJumps(delta_phi=0.1), 100, seed=8, count=2000)
        mean, stderr = empirical_correlation_stats(chains, 1)
        assert stderr > 0
        assert abs(mean) <= 3 * stderr

    def test_empty_ensemble(self):
        with pytest.raises(EmptyEnsembleError):
            empirical_correlation(np.empty((0, 5)), 0)

    def test_lag_out_of_range(self):
        with pytest.raises(DomainError):
            empirical_correlation(np.zeros((2, 5)), 5)


class TestMeanCos2:

    def test_two_point_distribution(self):
        assert mean_cos2([0.1, -0.1], [0.5, 0.5]) == pytest.approx(math.cos(0.2), rel=1e-15)

    def test_probabilities_must_sum_to_one(self):
        with pytest.raises(DomainError):
            mean_cos2([0.1, -0.1], [0.5, 0.4])


def _sign_pair_counts(chains, column):
    # Categories (+,+), (+,-), (-,+), (-,-) of jumps `column` and `column + 1`.
    index = 2 * (chains[:, column] < 0) + (chains[:, column + 1] < 0)
    return np.bincount(index.astype(np.int64), minlength=4)


class TestSamplerAgreement:

    @pytest.mark.parametrize("p", [0.3, 0.8])
    def test_markov_embedding_samples_like_persistence(self, p):
        jumps = PersistenceJumps(delta_phi=0.1, p=p)
        count = 20000
        q = 1.0 - p
        expected = count * np.array([p / 2, q / 2, q / 2, p / 2])

        direct = _sign_pair_counts(sample_chains(jumps, 6, seed=31, count=count), 3)
        embedded = _sign_pair_counts(sample_chains(jumps.as_finite_markov(), 6, seed=32, count=count), 3)

        assert direct.sum() == embedded.sum() == count
        assert chisquare(direct, expected).pvalue > 0.001
        assert chisquare(embedded, expected).pvalue > 0.001

    def test_first_pair_of_the_embedding(self):
        jumps = PersistenceJumps(delta_phi=0.1, p=0.6)
        count = 20000
        expected = count * np.array([0.3, 0.2, 0.2, 0.3])
        embedded = _sign_pair_counts(sample_chains(jumps.as_finite_markov(), 2, seed=33, count=count), 0)
        assert chisquare(embedded, expected).pvalue > 0.001

    def test_only_fixed_jumps_are_deterministic(self):
        assert FixedJumps(delta_phi=0.1).is_deterministic
        assert not IidTwoPointJumps(delta_phi=0.1).is_deterministic
        assert not PersistenceJumps(delta_phi=0.1, p=1.0).is_deterministic
        assert not PersistenceJumps(delta_phi=0.1, p=0.5).as_finite_markov().is_deterministic
