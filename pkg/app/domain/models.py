"""
Defines all domain types and Enums for the application.

This file is the "single source of truth" for the data that flows between
the numerical library (app.physics), the managers and the output layer.
Every type is an immutable dataclass that checks its own invariants on
construction, so an invalid model can never reach a sampler or a solver.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Any, Optional, Union

import numpy as np

from app.physics.errors import DomainError

# Tolerance used for every "sums to one" check on probability data.
STOCHASTIC_TOL = 1e-12

# --- Enums ---


class JumpKind(enum.Enum):
    """The noise processes that can generate the rotation-angle chain."""
    FIXED = "fixed"
    IID_TWO_POINT = "iid"
    PERSISTENCE = "persistence"
    FINITE_MARKOV = "markov"


class OutputFormat(enum.Enum):
    """Formats the experiment tables can be written in."""
    CSV = "csv"
    JSON = "json"


# --- Validation helpers ---

def _require_finite(name: str, value: float) -> float:
    if not math.isfinite(value):
        raise DomainError(f"{name} must be finite, got {value!r}")
    return float(value)


def _require_probability(name: str, value: float) -> float:
    value = _require_finite(name, value)
    if not 0.0 <= value <= 1.0:
        raise DomainError(f"{name} must lie in [0, 1], got {value!r}")
    return value


def check_theta(theta: float) -> float:
    """
    Validates an amplitude transmissivity of the absorber.

    Args:
        theta (float): Amplitude transmission per pass.

    Raises:
        DomainError: If theta is not a finite number in [0, 1].

    Returns:
        float: theta as a float.
    """
    return _require_probability("theta", theta)


def _check_chain(values, p0, transition) -> None:
    """Shared invariant check for finite Markov chains of angles."""
    v = np.asarray(values, dtype=float)
    p = np.asarray(p0, dtype=float)
    m = np.asarray(transition, dtype=float)

    if v.ndim != 1 or v.size == 0:
        raise DomainError("chain needs a non-empty list of angle values")
    if not np.all(np.isfinite(v)):
        raise DomainError("chain angle values must be finite")
    if p.shape != v.shape:
        raise DomainError(f"p0 has shape {p.shape}, expected {v.shape}")
    if m.shape != (v.size, v.size):
        raise DomainError(f"transition matrix has shape {m.shape}, expected {(v.size, v.size)}")
    if np.any(p < 0) or abs(p.sum() - 1.0) > STOCHASTIC_TOL:
        raise DomainError("p0 entries must be non-negative and sum to 1")
    if np.any(m < 0) or np.any(np.abs(m.sum(axis=0) - 1.0) > STOCHASTIC_TOL):
        raise DomainError("every column of the transition matrix must be a probability vector")


def _as_tuple(values) -> tuple:
    return tuple(float(x) for x in values)


def _as_matrix(rows) -> tuple:
    return tuple(tuple(float(x) for x in row) for row in rows)


# --- Polarization state ---


@dataclass(frozen=True)
class PolarizationAmplitudes:
    """
    The real field envelope (eps_h, eps_v) of the photon.

    The norm is 1 for an unabsorbed photon and shrinks as the absorber
    removes vertical amplitude.
    """
    eps_h: float
    eps_v: float

    @property
    def norm_squared(self) -> float:
        """Unabsorbed fraction eps_h² + eps_v²."""
        return self.eps_h ** 2 + self.eps_v ** 2

    def as_array(self) -> np.ndarray:
        return np.array([self.eps_h, self.eps_v], dtype=float)


@dataclass(frozen=True)
class RoundTripOperator:
    """
    The 2x2 real matrix applied to the amplitudes in one round trip.

    Rows are [[cos, -sin], [theta*sin, theta*cos]] of the rotation angle.
    """
    m: np.ndarray = field(repr=False)

    @property
    def determinant(self) -> float:
        return float(np.linalg.det(self.m))


@dataclass(frozen=True)
class PolarizationTensor:
    """Polarization probabilities and the first Stokes coherence u."""
    p_h: float
    p_v: float
    u: float


# --- Noise models ---


@dataclass(frozen=True)
class FixedJumps:
    """Every round trip rotates by the same angle."""
    delta_phi: float
    kind: JumpKind = field(default=JumpKind.FIXED, init=False)

    def __post_init__(self):
        _require_finite("delta_phi", self.delta_phi)

    @property
    def is_deterministic(self) -> bool:
        return True


@dataclass(frozen=True)
class IidTwoPointJumps:
    """Independent rotations of +delta_phi or -delta_phi, each with probability 1/2."""
    delta_phi: float
    kind: JumpKind = field(default=JumpKind.IID_TWO_POINT, init=False)

    def __post_init__(self):
        _require_finite("delta_phi", self.delta_phi)

    @property
    def is_deterministic(self) -> bool:
        return False


@dataclass(frozen=True)
class PersistenceJumps:
    """
    Random walk with persistence.

    The first jump is +/-delta_phi with equal probability; each later jump
    repeats the previous one with probability p and flips with q = 1 - p.
    """
    delta_phi: float
    p: float
    kind: JumpKind = field(default=JumpKind.PERSISTENCE, init=False)

    def __post_init__(self):
        _require_finite("delta_phi", self.delta_phi)
        _require_probability("p", self.p)

    @property
    def q(self) -> float:
        return 1.0 - self.p

    @property
    def is_deterministic(self) -> bool:
        return False

    def as_finite_markov(self) -> "FiniteMarkovJumps":
        """The same process written as a two-state Markov chain."""
        return FiniteMarkovJumps(
            values=(self.delta_phi, -self.delta_phi),
            p0=(0.5, 0.5),
            transition=((self.p, self.q), (self.q, self.p)),
        )


@dataclass(frozen=True)
class FiniteMarkovJumps:
    """
    General finite Markov chain of rotation angles.

    transition[i][j] is the probability of values[i] given that the
    previous jump was values[j] (columns sum to one).
    """
    values: tuple
    p0: tuple
    transition: tuple
    kind: JumpKind = field(default=JumpKind.FINITE_MARKOV, init=False)

    def __post_init__(self):
        _check_chain(self.values, self.p0, self.transition)
        object.__setattr__(self, "values", _as_tuple(self.values))
        object.__setattr__(self, "p0", _as_tuple(self.p0))
        object.__setattr__(self, "transition", _as_matrix(self.transition))

    @property
    def is_deterministic(self) -> bool:
        return False

    def chain_spec(self) -> "ChainSpec":
        return ChainSpec(values=self.values, p0=self.p0, transition=self.transition)


JumpModel = Union[FixedJumps, IidTwoPointJumps, PersistenceJumps, FiniteMarkovJumps]


@dataclass(frozen=True)
class CorrelationModel:
    """
    Geometric correlation of successive jumps, K_n = b² gamma^|n|.

    Attributes:
        b (float): Root-mean-square jump (radians).
        gamma (float): Correlation degree between two successive jumps.
        tau_r (float): Round-trip time.
    """
    b: float
    gamma: float
    tau_r: float

    def __post_init__(self):
        _require_finite("b", self.b)
        _require_finite("gamma", self.gamma)
        _require_finite("tau_r", self.tau_r)
        if self.b < 0:
            raise DomainError(f"b must be non-negative, got {self.b!r}")
        if not -1.0 <= self.gamma <= 1.0:
            raise DomainError(f"gamma must lie in [-1, 1], got {self.gamma!r}")
        if self.tau_r <= 0:
            raise DomainError(f"tau_r must be positive, got {self.tau_r!r}")


@dataclass(frozen=True)
class ContinuousNoiseModel:
    """Exponentially correlated rotation rate, k(t) = k0 exp(-gamma_r t)."""
    k0: float
    gamma_r: float

    def __post_init__(self):
        _require_finite("k0", self.k0)
        _require_finite("gamma_r", self.gamma_r)
        if self.k0 < 0:
            raise DomainError(f"k0 must be non-negative, got {self.k0!r}")
        if self.gamma_r <= 0:
            raise DomainError(f"gamma_r must be positive, got {self.gamma_r!r}")


@dataclass(frozen=True)
class ChainSpec:
    """
    Finite Markov chain consumed by the exact recursion solver.

    Attributes:
        values (tuple): Angle values delta_phi_i.
        p0 (tuple): Initial probability vector.
        transition (tuple): transition[i][j] = P(values[i] | previous values[j]).
    """
    values: tuple
    p0: tuple
    transition: tuple

    def __post_init__(self):
        _check_chain(self.values, self.p0, self.transition)
        object.__setattr__(self, "values", _as_tuple(self.values))
        object.__setattr__(self, "p0", _as_tuple(self.p0))
        object.__setattr__(self, "transition", _as_matrix(self.transition))

    @property
    def size(self) -> int:
        return len(self.values)


# --- Solutions and results ---


@dataclass(frozen=True)
class MasterSolutionParams:
    """Rate r and mean absorption rate gamma0 of the two-state master equation."""
    r: float
    gamma0: float

    def __post_init__(self):
        if not (math.isfinite(self.r) and self.r >= 0):
            raise DomainError(f"r must be a non-negative rate, got {self.r!r}")
        if not (math.isfinite(self.gamma0) and self.gamma0 >= 0):
            raise DomainError(f"gamma0 must be a non-negative rate, got {self.gamma0!r}")


@dataclass(frozen=True)
class EnsembleSpec:
    """Everything that determines a Monte Carlo ensemble run."""
    model: JumpModel
    theta: float
    n_max: int
    trajectories: int
    seed: int

    def __post_init__(self):
        check_theta(self.theta)
        if self.n_max < 0:
            raise DomainError(f"n_max must be >= 0, got {self.n_max!r}")
        if self.trajectories < 1:
            raise DomainError(f"trajectories must be >= 1, got {self.trajectories!r}")
        if not 0 <= self.seed < 2 ** 64:
            raise DomainError(f"seed must be an unsigned 64-bit integer, got {self.seed!r}")


@dataclass(frozen=True)
class DecayPoint:
    n: int
    p_h: float
    stderr: Optional[float] = None


@dataclass(frozen=True)
class DecayCurve:
    """
    P_h over round trips with its provenance.

    meta carries at least the model description and theta; tau_r and seed
    are included when they apply.
    """
    points: tuple
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        last = None
        for point in self.points:
            if last is not None and point.n <= last:
                raise DomainError("decay curve round-trip counts must be strictly increasing")
            if not -1e-12 <= point.p_h <= 1.0 + 1e-9:
                raise DomainError(f"probability {point.p_h!r} at n={point.n} is outside [0, 1]")
            last = point.n

    @property
    def ns(self) -> np.ndarray:
        return np.array([point.n for point in self.points], dtype=int)

    @property
    def values(self) -> np.ndarray:
        return np.array([point.p_h for point in self.points], dtype=float)

    @property
    def stderrs(self) -> np.ndarray:
        return np.array(
            [np.nan if point.stderr is None else point.stderr for point in self.points],
            dtype=float,
        )


@dataclass(frozen=True)
class Diagnostic:
    """
    One validity condition expressed as a dimensionless ratio.

    The condition "lhs << rhs" counts as satisfied when lhs/rhs <= threshold.
    """
    name: str
    lhs: float
    rhs: float
    threshold: float

    @property
    def ratio(self) -> float:
        if self.rhs == 0:
            return 0.0 if self.lhs == 0 else math.inf
        return self.lhs / self.rhs

    @property
    def satisfied(self) -> bool:
        return self.ratio <= self.threshold


@dataclass(frozen=True)
class RateResult:
    """A decay rate with the validity diagnostics that qualify it."""
    r: float
    diagnostics: tuple = ()

    def diagnostic(self, name: str) -> Diagnostic:
        for diag in self.diagnostics:
            if diag.name == name:
                return diag
        raise KeyError(name)


@dataclass(frozen=True)
class WExponent:
    """The exponent sum W_n, its large-n asymptote and whether that asymptote applies."""
    value: float
    asymptote: Optional[float]
    asymptote_valid: bool
    diagnostics: tuple = ()


@dataclass(frozen=True)
class SpectralFunction:
    """Samples of a spectral density on the zone [-pi/tau_r, pi/tau_r]."""
    omega: np.ndarray = field(repr=False)
    values: np.ndarray = field(repr=False)
    tau_r: float = 1.0

    def __post_init__(self):
        if np.any(np.diff(self.omega) <= 0):
            raise DomainError("spectral samples must have strictly increasing omega")
        if np.any(self.values < 0):
            raise DomainError("spectral density must be non-negative")

    @property
    def zone_edge(self) -> float:
        return math.pi / self.tau_r


@dataclass
class ResultTable:
    """
    Tabular experiment output with the metadata needed to reproduce it.

    Attributes:
        name (str): The subcommand that produced the table.
        columns (list[str]): Column names.
        rows (list[tuple]): Data rows; None marks a missing value.
        meta (dict): Parameters, seed and any notes about the run.
    """
    name: str
    columns: list
    rows: list = field(default_factory=list)
    meta: dict[str, Any] = field(default_factory=dict)

    def column(self, name: str) -> list:
        index = self.columns.index(name)
        return [row[index] for row in self.rows]

