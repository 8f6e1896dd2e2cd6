"""
Analytic decay laws for the horizontal-polarization probability P_h.

Covers the fixed-angle formulas (free rotation, projective measurements
and partial absorption), the two-state master-equation solutions, the
i.i.d. and persistence-chain results, and the W_n exponent sums.

Formulas written with square roots of possibly negative numbers are
evaluated in complex arithmetic; the real part is returned after checking
that the imaginary residue is negligible. Double roots are handled by
their analytic limits.
"""

from __future__ import annotations

import cmath
import math
from typing import Callable

import numpy as np

from app.domain.models import (
    CorrelationModel,
    DecayCurve,
    DecayPoint,
    MasterSolutionParams,
    WExponent,
    check_theta,
)
from app.physics.errors import ConvergenceError, DivergenceError, DomainError
from app.physics.noise import correlation
from app.physics.spectra import offset_negligible, relaxation_rounds

# Below this root separation the double-root limit is used.
DEGENERACY_TOL = 1e-9
IMAG_RESIDUE_TOL = 1e-10


def _check_count(n: int) -> int:
    if n < 0:
        raise DomainError(f"round-trip count must be >= 0, got {n!r}")
    return int(n)


def _real_part(value: complex, root: complex, label: str) -> float:
    # The residue grows like rounding / |root| close to a double root.
    tolerance = IMAG_RESIDUE_TOL * max(1.0, 1e-6 / abs(root))
    if abs(value.imag) > tolerance:
        raise ConvergenceError(
            f"{label}: imaginary residue {value.imag:.3e} exceeds {tolerance:.1e}"
        )
    return value.real


# --- Fixed rotation angle ---

def p_h_rabi(n: int, delta_phi: float) -> float:
    """Free rotation: cos²(n delta_phi)."""
    n = _check_count(n)
    return math.cos(n * delta_phi) ** 2


def p_h_projective(n: int, delta_phi: float) -> float:
    """Ideal projective measurement after every rotation: cos^{2n}(delta_phi)."""
    n = _check_count(n)
    return math.cos(delta_phi) ** (2 * n)


def p_h_fixed_angle(n: int, delta_phi: float, theta: float) -> float:
    """
    P_h after n round trips with a fixed angle and partial absorption.

    The horizontal amplitude is a(l1^n - l2^n)/D + (l1^n + l2^n)/2 with
    l1,2 = [(1+theta)cos(dphi) +/- D]/2, D² = (1+theta)²cos²(dphi) - 4 theta
    and a = cos(dphi) - (l1 + l2)/2. For |D| < 1e-9 the double-root limit
    l^n + n a l^(n-1) is used.

    Args:
        n (int): Round trips, n >= 0.
        delta_phi (float): Rotation per round trip in radians.
        theta (float): Amplitude transmissivity in [0, 1].

    Raises:
        DomainError: On a negative n or theta outside [0, 1].
        ConvergenceError: If the imaginary residue check fails.

    Returns:
        float: The probability eps_h(n)².
    """
    n = _check_count(n)
    theta = check_theta(theta)
    if n == 0:
        return 1.0

    c = math.cos(delta_phi)
    d = cmath.sqrt((1.0 + theta) ** 2 * c * c - 4.0 * theta)
    mean_root = 0.5 * (1.0 + theta) * c
    a = c - mean_root

    if abs(d) < DEGENERACY_TOL:
        amplitude = mean_root ** n + n * a * mean_root ** (n - 1)
        return amplitude ** 2

    l1 = complex(mean_root) + 0.5 * d
    l2 = complex(mean_root) - 0.5 * d
    l1n, l2n = l1 ** n, l2 ** n
    amplitude = a * (l1n - l2n) / d + 0.5 * (l1n + l2n)
    return _real_part(amplitude, d, "p_h_fixed_angle") ** 2


def p_h_exponential(n: int, delta_phi: float, theta: float) -> float:
    """Small-jump exponential law exp[-(1+theta) dphi² n / (1-theta)]."""
    n = _check_count(n)
    theta = check_theta(theta)
    if theta == 1.0:
        raise DomainError("the exponential law needs theta < 1")
    return math.exp(-(1.0 + theta) * delta_phi ** 2 * n / (1.0 - theta))


def absorption_rate(theta: float, tau_r: float) -> float:
    """
    Mean absorption rate gamma0 = -2 ln(theta) / tau_r.

    Raises:
        DivergenceError: At theta = 0 (instantaneous absorption).
    """
    theta = check_theta(theta)
    if tau_r <= 0:
        raise DomainError(f"tau_r must be positive, got {tau_r!r}")
    if theta == 0.0:
        raise DivergenceError("absorption rate is infinite at theta = 0")
    return -2.0 * math.log(theta) / tau_r


# --- Master equation ---

def _two_state_decay(w: float, g: float) -> float:
    """
    Upper component of exp([[-w, w], [w, -w-g]]) (1, 0).

    Written as a sum of two decaying exponentials so no term overflows.
    """
    s = math.sqrt(w * w + 0.25 * g * g)
    if s == 0.0:
        return 1.0
    ratio = 0.5 * g / s
    slow = math.exp(-(w + 0.5 * g - s))
    fast = math.exp(-(w + 0.5 * g + s))
    return 0.5 * ((1.0 + ratio) * slow + (1.0 - ratio) * fast)


def p_h_master(t: float, params: MasterSolutionParams) -> float:
    """
    Solution of the two-state master equation with constant rates.

    P_h(t) = exp[-(R + gamma0/2) t] (cosh St + gamma0/(2S) sinh St) with
    S = sqrt(R² + gamma0²/4). Returns 1 when S = 0.
    """
    if not t >= 0:
        raise DomainError(f"t must be >= 0, got {t!r}")
    if t == 0:
        return 1.0
    return _two_state_decay(params.r * t, params.gamma0 * t)


# --- Random jumps ---

def p_h_iid(n: int, mean_cos2: float) -> float:
    """1/2 + 1/2 <cos 2 dphi>^n for independent jumps."""
    n = _check_count(n)
    if not -1.0 <= mean_cos2 <= 1.0:
        raise DomainError(f"mean_cos2 must lie in [-1, 1], got {mean_cos2!r}")
    return 0.5 + 0.5 * mean_cos2 ** n


def p_h_persistence_exact(n: int, delta_phi: float, p: float) -> float:
    """
    Exact P_h for the persistence chain (no absorption).

    P_h = 1/2 + [g(r) - g(-r)] / (4r) with g(r) = (qC + r)(pC + r)^n,
    C = cos 2dphi, q = 1 - p and r = sqrt(q² - p² sin² 2dphi). The r -> 0
    limit is 1/2 + 1/2 [(pC)^n + qC n (pC)^(n-1)].

    Args:
        n (int): Round trips, n >= 0.
        delta_phi (float): Jump size in radians.
        p (float): Repeat probability in [0, 1].

    Raises:
        DomainError: On a negative n or p outside [0, 1].
        ConvergenceError: If the imaginary residue check fails.

    Returns:
        float: P_h(n).
    """
    n = _check_count(n)
    if not 0.0 <= p <= 1.0:
        raise DomainError(f"p must lie in [0, 1], got {p!r}")
    if n == 0:
        return 1.0

    q = 1.0 - p
    cos2 = math.cos(2.0 * delta_phi)
    sin2 = math.sin(2.0 * delta_phi)
    r = cmath.sqrt(q * q - (p * sin2) ** 2)

    if abs(r) < DEGENERACY_TOL:
        pc = p * cos2
        return 0.5 + 0.5 * (pc ** n + q * cos2 * n * pc ** (n - 1))

    def g(root: complex) -> complex:
        return (q * cos2 + root) * (p * cos2 + root) ** n

    value = 0.5 + (g(r) - g(-r)) / (4.0 * r)
    return _real_part(value, r, "p_h_persistence_exact")


def p_h_persistence_approx(n: int, delta_phi: float, p: float) -> float:
    """
    Small-jump approximation 1/2 + 1/2 [cos(2 dphi p/q)]^(q n / p).

    Raises:
        DomainError: At p in {0, 1}, or when cos(2 dphi p/q) < 0 so the
            fractional power is undefined.
    """
    n = _check_count(n)
    if not 0.0 < p < 1.0:
        raise DomainError(f"the persistence approximation needs 0 < p < 1, got {p!r}")
    q = 1.0 - p
    base = math.cos(2.0 * delta_phi * p / q)
    if base < 0:
        raise DomainError(
            f"cos(2*delta_phi*p/q) = {base:.4g} is negative; the approximation does not apply"
        )
    return 0.5 + 0.5 * base ** (q * n / p)


# --- Exponent sums ---

def w_exponent_series(correlations: Callable[[int], float], theta: float, n: int) -> float:
    """
    W_n = n K_0 + 2 sum_{m=1}^{n-1} sum_{m'=1}^{m} K_{m'} theta^{m'}.

    Valid for any stationary correlation function.
    """
    n = _check_count(n)
    theta = check_theta(theta)
    if n == 0:
        return 0.0

    lags = np.arange(1, n)
    terms = np.array([correlations(int(m)) for m in lags], dtype=float) * theta ** lags
    inner = np.cumsum(terms)
    return float(n * correlations(0) + 2.0 * inner.sum())


def w_exponent_asymptote(model: CorrelationModel, theta: float, n: int) -> float:
    """
    Large-n form n b²(1+x)/(1-x) - 2 b² x/(1-x)² with x = gamma theta.

    Raises:
        DivergenceError: At gamma theta = 1.
    """
    n = _check_count(n)
    x = model.gamma * check_theta(theta)
    if x >= 1.0:
        raise DivergenceError("the W_n asymptote diverges at gamma*theta = 1")
    b2 = model.b ** 2
    return n * b2 * (1.0 + x) / (1.0 - x) - 2.0 * b2 * x / (1.0 - x) ** 2


def w_exponent(model: CorrelationModel, theta: float, n: int, threshold: float = 0.1) -> WExponent:
    """
    Exact W_n for geometric correlations, with its asymptote.

    The asymptote is flagged valid when n is well beyond the relaxation
    count and the constant offset is negligible.

    Returns:
        WExponent: value, asymptote (None when gamma theta = 1), flag and
            the diagnostics behind the flag.
    """
    value = w_exponent_series(lambda lag: correlation(model, lag), theta, n)

    diagnostics = (
        relaxation_rounds(model, theta, n, threshold),
        offset_negligible(model, theta, threshold),
    )
    try:
        asymptote = w_exponent_asymptote(model, theta, n)
    except DivergenceError:
        return WExponent(value=value, asymptote=None, asymptote_valid=False, diagnostics=diagnostics)

    return WExponent(
        value=value,
        asymptote=asymptote,
        asymptote_valid=all(diag.satisfied for diag in diagnostics),
        diagnostics=diagnostics,
    )


def p_h_master_discrete(n: int, model: CorrelationModel, theta: float) -> float:
    """
    P_h from the matrix exponential of [[-W_n, W_n], [W_n, -W_n - g]] with g = -2n ln(theta).

    At theta = 0 the vertical population is pinned at zero and the result
    is exp(-W_n).
    """
    n = _check_count(n)
    theta = check_theta(theta)
    w = w_exponent_series(lambda lag: correlation(model, lag), theta, n)
    if theta == 0.0:
        return math.exp(-w)
    return _two_state_decay(w, -2.0 * n * math.log(theta))


# --- Curves ---

def decay_curve(law: Callable[[int], float], n_max: int, **meta) -> DecayCurve:
    """
    Tabulates a decay law at n = 0..n_max.

    Args:
        law (Callable[[int], float]): Maps a round-trip count to P_h.
        n_max (int): Last round trip.
        **meta: Provenance stored on the curve (model, theta, tau_r, ...).

    Returns:
        DecayCurve: The tabulated curve.
    """
    n_max = _check_count(n_max)
    points = tuple(DecayPoint(n=n, p_h=law(n)) for n in range(n_max + 1))
    return DecayCurve(points=points, meta=meta)
