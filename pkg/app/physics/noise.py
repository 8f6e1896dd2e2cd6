"""
Rotation-angle noise: sampling of jump chains and their correlation functions.

Random numbers come from numpy's PCG64 bit generator. Each (seed, stream)
pair maps to an independent substream through SeedSequence spawn keys, so
chain number i of an ensemble is the same no matter how the ensemble is
split between workers.
"""

from __future__ import annotations

import math
from typing import Callable, Union

import numpy as np

from app.domain.models import (
    ChainSpec,
    CorrelationModel,
    FiniteMarkovJumps,
    FixedJumps,
    IidTwoPointJumps,
    JumpModel,
    PersistenceJumps,
    STOCHASTIC_TOL,
)
from app.physics.errors import (
    ConvergenceError,
    DivergenceError,
    DomainError,
    EmptyEnsembleError,
)

# Relative size of the last kept correlation term for a truncated sum to count as converged.
SERIES_TAIL_TOL = 1e-14

Correlations = Callable[[int], float]


# --- Random streams ---

def substream(seed: int, index: int = 0) -> np.random.Generator:
    """
    Returns the generator for stream `index` of a seeded run.

    The splitting function is SeedSequence(entropy=seed, spawn_key=(index,))
    feeding a PCG64 bit generator.

    Args:
        seed (int): Unsigned 64-bit run seed.
        index (int): Stream number, e.g. the trajectory index.

    Raises:
        DomainError: If seed or index is negative.

    Returns:
        np.random.Generator: A generator private to this (seed, index).
    """
    if seed < 0 or index < 0:
        raise DomainError(f"seed and stream index must be non-negative, got {seed!r}, {index!r}")
    sequence = np.random.SeedSequence(entropy=int(seed), spawn_key=(int(index),))
    return np.random.Generator(np.random.PCG64(sequence))


def _angles_from_uniforms(model: JumpModel, u: np.ndarray) -> np.ndarray:
    """
    Maps uniform draws of shape (chains, n) to rotation angles.

    Each model consumes exactly one uniform per jump, so a chain is fully
    determined by its own row of draws.
    """
    if isinstance(model, FixedJumps):
        return np.full(u.shape, model.delta_phi, dtype=float)

    if isinstance(model, IidTwoPointJumps):
        return np.where(u < 0.5, model.delta_phi, -model.delta_phi)

    if isinstance(model, PersistenceJumps):
        if u.shape[1] == 0:
            return np.zeros(u.shape, dtype=float)
        first = np.where(u[:, :1] < 0.5, 1.0, -1.0)
        # Jump k+1 flips the sign of jump k when its draw is >= p.
        flips = np.zeros(u.shape, dtype=np.int64)
        flips[:, 1:] = u[:, 1:] >= model.p
        parity = np.cumsum(flips, axis=1) % 2
        return model.delta_phi * first * np.where(parity == 0, 1.0, -1.0)

    if isinstance(model, FiniteMarkovJumps):
        values = np.asarray(model.values)
        start_cdf = np.cumsum(model.p0)
        column_cdf = np.cumsum(np.asarray(model.transition), axis=0)
        last = len(values) - 1

        states = np.empty(u.shape, dtype=np.int64)
        if u.shape[1]:
            states[:, 0] = np.minimum(np.searchsorted(start_cdf, u[:, 0], side="right"), last)
        for k in range(1, u.shape[1]):
            cdf = column_cdf[:, states[:, k - 1]].T
            states[:, k] = np.minimum((u[:, k, None] >= cdf).sum(axis=1), last)
        return values[states]

    raise DomainError(f"unsupported jump model {type(model).__name__}")


def sample_chains(model: JumpModel, n: int, seed: int, count: int, start: int = 0) -> np.ndarray:
    """
    Samples `count` chains using streams start, start+1, ... of `seed`.

    Returns:
        np.ndarray: Array of shape (count, n); row i equals
            sample_chain(model, n, seed, stream=start + i).
    """
    if n < 0:
        raise DomainError(f"chain length must be >= 0, got {n!r}")
    if count < 0:
        raise DomainError(f"chain count must be >= 0, got {count!r}")

    u = np.empty((count, n), dtype=float)
    for row in range(count):
        u[row] = substream(seed, start + row).random(n)
    return _angles_from_uniforms(model, u)


def sample_chain(model: JumpModel, n: int, seed: int, stream: int = 0) -> np.ndarray:
    """
    Draws one chain of n rotation angles.

    The output depends only on (model, n, seed, stream). For the persistence
    model the first jump is +/-delta_phi with equal probability and each
    later jump repeats its predecessor with probability p.

    Args:
        model (JumpModel): The noise process.
        n (int): Number of jumps, n >= 0.
        seed (int): Unsigned 64-bit run seed.
        stream (int, optional): Substream index. Defaults to 0.

    Raises:
        DomainError: If n is negative or the model is not supported.

    Returns:
        np.ndarray: The n angles in radians.
    """
    return sample_chains(model, n, seed, count=1, start=stream)[0]


# --- Correlation functions ---

def correlation(model: CorrelationModel, lag: int) -> float:
    """K_lag = b² gamma^|lag|, with 0⁰ = 1 so that K_0 = b² for gamma = 0."""
    return model.b ** 2 * float(model.gamma) ** abs(int(lag))


def persistence_correlation_model(delta_phi: float, p: float, tau_r: float) -> CorrelationModel:
    """
    The geometric correlation model of a persistence chain.

    Args:
        delta_phi (float): Jump size in radians.
        p (float): Repeat probability.
        tau_r (float): Round-trip time.

    Returns:
        CorrelationModel: b = |delta_phi| and gamma = 2p - 1.
    """
    if not 0.0 <= p <= 1.0:
        raise DomainError(f"p must lie in [0, 1], got {p!r}")
    return CorrelationModel(b=abs(delta_phi), gamma=2.0 * p - 1.0, tau_r=tau_r)


def correlation_time(model: CorrelationModel) -> float:
    """
    Correlation time tau_r / (1 - gamma) of the geometric model.

    Raises:
        DivergenceError: At gamma = 1, where the chain never forgets.
    """
    if model.gamma >= 1.0:
        raise DivergenceError("correlation time diverges at gamma = 1")
    return model.tau_r / (1.0 - model.gamma)


def check_series_tail(correlations: Correlations, truncation: int, weight: float = 1.0) -> None:
    """
    Raises ConvergenceError unless the first omitted term is negligible:
    |K_{N+1} weight^{N+1}| <= 1e-14 |K_0| with N = truncation.
    """
    if truncation < 0:
        raise DomainError(f"truncation must be >= 0, got {truncation!r}")
    k0 = abs(correlations(0))
    omitted = truncation + 1
    tail = abs(correlations(omitted)) * abs(weight) ** omitted
    if tail > SERIES_TAIL_TOL * k0:
        raise ConvergenceError(
            f"correlation series not converged at N={truncation}: "
            f"|K_{{N+1}}|={tail:.3e} exceeds {SERIES_TAIL_TOL:.0e}*|K_0|"
        )


def correlation_time_series(
    correlations: Correlations,
    b: float,
    tau_r: float,
    truncation: int,
) -> float:
    """
    General correlation time (tau_r / b²) * sum_{n>=0} K_n.

    Raises:
        DomainError: If b or tau_r is not positive.
        ConvergenceError: If K_{N+1} is not negligible.
    """
    if b <= 0 or tau_r <= 0:
        raise DomainError("b and tau_r must be positive")
    check_series_tail(correlations, truncation)
    total = math.fsum(correlations(n) for n in range(truncation + 1))
    return tau_r * total / b ** 2


def markov_correlation(model: Union[FiniteMarkovJumps, ChainSpec], lag: int) -> float:
    """
    Correlation <dphi_{k+lag} dphi_k> of a stationary finite Markov chain.

    Computed as v^T P^lag diag(p0) v.

    Raises:
        DomainError: If p0 is not stationary under the transition matrix.
    """
    values = np.asarray(model.values)
    p0 = np.asarray(model.p0)
    transition = np.asarray(model.transition)

    if np.max(np.abs(transition @ p0 - p0)) > STOCHASTIC_TOL:
        raise DomainError("markov_correlation needs a stationary initial distribution (P p0 = p0)")

    propagator = np.linalg.matrix_power(transition, abs(int(lag)))
    return float(values @ propagator @ (p0 * values))


def empirical_correlation_stats(chains, lag: int) -> tuple[float, float]:
    """
    Ensemble-and-time average of dphi_n dphi_{n+lag} with its standard error.

    The standard error is taken from the spread of the per-chain time
    averages, which are independent between chains.

    Args:
        chains: Array-like of shape (count, length).
        lag (int): Non-negative lag smaller than the chain length.

    Raises:
        EmptyEnsembleError: If there are no chains.
        DomainError: If lag is out of range.

    Returns:
        tuple[float, float]: (mean, standard error).
    """
    data = np.asarray(chains, dtype=float)
    if data.size == 0 or data.ndim != 2 or data.shape[0] == 0:
        raise EmptyEnsembleError("empirical correlation needs at least one non-empty chain")

    lag = int(lag)
    length = data.shape[1]
    if not 0 <= lag < length:
        raise DomainError(f"lag must lie in [0, {length}), got {lag!r}")

    products = data[:, : length - lag] * data[:, lag:]
    per_chain = products.mean(axis=1)
    mean = float(per_chain.mean())
    if per_chain.size == 1:
        return mean, 0.0
    return mean, float(per_chain.std(ddof=1) / math.sqrt(per_chain.size))


def empirical_correlation(chains, lag: int) -> float:
    return empirical_correlation_stats(chains, lag)[0]


def mean_cos2(values, probabilities) -> float:
    """<cos 2 dphi> of a discrete angle distribution."""
    v = np.asarray(values, dtype=float)
    w = np.asarray(probabilities, dtype=float)
    if v.shape != w.shape or v.size == 0:
        raise DomainError("values and probabilities must be non-empty and of equal length")
    if np.any(w < 0) or abs(w.sum() - 1.0) > STOCHASTIC_TOL:
        raise DomainError("probabilities must be non-negative and sum to 1")
    return float(np.dot(w, np.cos(2.0 * v)))
