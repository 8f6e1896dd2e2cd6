"""
Decay rates, spectra and validity diagnostics.

The decay rate is the overlap R = 2 pi ∫ G(w) F(w) dw of the reservoir
spectrum G (the power spectrum of the rotation noise) with the
measurement-induced broadening F. For discrete round trips both live on
the zone |w| <= pi / tau_r; for the continuous theory they are Lorentzians
on the whole line.

Every "<<" condition is reported as a Diagnostic whose ratio lhs/rhs is
compared against a threshold (0.1 unless the caller overrides it).
"""

from __future__ import annotations

import math
from typing import Callable, Union

import numpy as np

from app.domain.models import (
    ContinuousNoiseModel,
    CorrelationModel,
    Diagnostic,
    RateResult,
    SpectralFunction,
    check_theta,
)
from app.physics.errors import DegenerateError, DivergenceError, DomainError
from app.physics.noise import Correlations, check_series_tail, correlation
from app.physics.quadrature import (
    DEFAULT_MAX_PANELS,
    DEFAULT_TOLERANCE,
    integrate,
    peak_breakpoints,
)

DEFAULT_THRESHOLD = 0.1
ZONE_TOL = 1e-12

ArrayLike = Union[float, np.ndarray]


def _returns_like(omega, values):
    return float(values) if np.ndim(omega) == 0 else values


def _check_tau(tau_r: float) -> float:
    if not (math.isfinite(tau_r) and tau_r > 0):
        raise DomainError(f"tau_r must be positive, got {tau_r!r}")
    return tau_r


def _check_zone(omega, tau_r: float) -> np.ndarray:
    w = np.asarray(omega, dtype=float)
    edge = math.pi / tau_r
    if np.any(np.abs(w) > edge * (1.0 + ZONE_TOL)):
        raise DomainError(f"omega must lie in [-pi/tau_r, pi/tau_r] = [-{edge:.6g}, {edge:.6g}]")
    return w


# --- Validity diagnostics ---

def relaxation_rounds(model: CorrelationModel, theta: float, n: int,
                      threshold: float = DEFAULT_THRESHOLD) -> Diagnostic:
    """n >> |gamma| theta / (1 - (gamma theta)²): enough round trips to forget the start."""
    x = model.gamma * theta
    denom = 1.0 - x * x
    lhs = math.inf if denom <= 0 else abs(model.gamma) * theta / denom
    return Diagnostic("relaxation_rounds", lhs, float(n), threshold)


def small_jumps(model: CorrelationModel, theta: float,
                threshold: float = DEFAULT_THRESHOLD) -> Diagnostic:
    """b² << (1 - gamma)(1 - gamma theta)."""
    rhs = (1.0 - model.gamma) * (1.0 - model.gamma * theta)
    return Diagnostic("small_jumps", model.b ** 2, rhs, threshold)


def offset_negligible(model: CorrelationModel, theta: float,
                      threshold: float = DEFAULT_THRESHOLD) -> Diagnostic:
    """b² << (1 - gamma theta)²: the constant term of the W_n asymptote can be dropped."""
    return Diagnostic("offset_negligible", model.b ** 2, (1.0 - model.gamma * theta) ** 2, threshold)


def cumulant_truncation(rate: float, gamma_r: float,
                        threshold: float = DEFAULT_THRESHOLD) -> Diagnostic:
    """R << gamma_R: the decay is slow on the scale of the noise memory."""
    return Diagnostic("cumulant_truncation", rate, gamma_r, threshold)


def _geometric_rate(model: CorrelationModel, theta: float) -> float:
    x = model.gamma * theta
    if x >= 1.0:
        return math.inf
    return (1.0 + x) / (1.0 - x) * model.b ** 2 / model.tau_r


def validity_check(model: CorrelationModel, theta: float, n: int,
                   threshold: float = DEFAULT_THRESHOLD) -> tuple[Diagnostic, ...]:
    """
    All validity conditions of the discrete rate theory.

    Args:
        model (CorrelationModel): The geometric correlation model.
        theta (float): Amplitude transmissivity in [0, 1].
        n (int): Number of round trips considered.
        threshold (float): Largest ratio still counted as "<<".

    Returns:
        tuple[Diagnostic, ...]: relaxation_rounds, small_jumps,
            offset_negligible and cumulant_truncation.
    """
    theta = check_theta(theta)
    gamma_r = (1.0 - model.gamma) / model.tau_r
    return (
        relaxation_rounds(model, theta, n, threshold),
        small_jumps(model, theta, threshold),
        offset_negligible(model, theta, threshold),
        cumulant_truncation(_geometric_rate(model, theta), gamma_r, threshold),
    )


# --- Discrete decay rates ---

def decay_rate_geometric(model: CorrelationModel, theta: float, n: int = 1000,
                         threshold: float = DEFAULT_THRESHOLD) -> RateResult:
    """
    R = [(1 + gamma theta)/(1 - gamma theta)] b² / tau_r.

    Args:
        model (CorrelationModel): The geometric correlation model.
        theta (float): Amplitude transmissivity in [0, 1].
        n (int, optional): Horizon used by the relaxation diagnostic.
        threshold (float, optional): Diagnostic threshold.

    Raises:
        DivergenceError: At gamma theta = 1.

    Returns:
        RateResult: The rate with the relaxation_rounds and small_jumps diagnostics.
    """
    theta = check_theta(theta)
    if model.gamma * theta >= 1.0:
        raise DivergenceError("decay rate diverges at gamma*theta = 1")
    return RateResult(
        r=_geometric_rate(model, theta),
        diagnostics=(
            relaxation_rounds(model, theta, n, threshold),
            small_jumps(model, theta, threshold),
        ),
    )


def decay_rate_series(correlations: Correlations, theta: float, tau_r: float,
                      truncation: int) -> RateResult:
    """
    R = (1/tau_r) sum_{n=-N}^{N} K_n theta^|n| for an arbitrary stationary K_n.

    Raises:
        ConvergenceError: If |K_{N+1} theta^{N+1}| > 1e-14 |K_0|.
    """
    theta = check_theta(theta)
    _check_tau(tau_r)
    check_series_tail(correlations, truncation, weight=theta)

    tail = math.fsum(correlations(n) * theta ** n for n in range(1, truncation + 1))
    return RateResult(r=(correlations(0) + 2.0 * tail) / tau_r)


def reservoir_spectrum(model: CorrelationModel, omega: ArrayLike) -> ArrayLike:
    """
    G(w) = (b²/2 pi tau_r)(1 - gamma²)/(1 + gamma² - 2 gamma cos w tau_r).

    Raises:
        DomainError: If omega leaves the zone.
        DegenerateError: At |gamma| = 1, where G is a delta comb.
    """
    w = _check_zone(omega, model.tau_r)
    g = model.gamma
    if abs(g) >= 1.0:
        raise DegenerateError("reservoir spectrum is a delta function at |gamma| = 1")
    values = (model.b ** 2 / (2.0 * math.pi * model.tau_r)) * (1.0 - g * g) / (
        1.0 + g * g - 2.0 * g * np.cos(w * model.tau_r)
    )
    return _returns_like(omega, values)


def reservoir_spectrum_series(correlations: Correlations, tau_r: float,
                              omega: ArrayLike, truncation: int) -> ArrayLike:
    """G(w) = (1/2 pi tau_r)(K_0 + 2 sum_{n>=1} K_n cos n w tau_r) for any stationary K_n."""
    _check_tau(tau_r)
    w = _check_zone(omega, tau_r)
    check_series_tail(correlations, truncation)

    total = np.full(w.shape, correlations(0), dtype=float)
    for lag in range(1, truncation + 1):
        total = total + 2.0 * correlations(lag) * np.cos(lag * w * tau_r)
    return _returns_like(omega, total / (2.0 * math.pi * tau_r))


def measurement_broadening(theta: float, tau_r: float, omega: ArrayLike) -> ArrayLike:
    """
    F(w) = (tau_r/2 pi)(1 - theta²)/(1 + theta² - 2 theta cos w tau_r).

    Raises:
        DegenerateError: At theta = 1, where F is a delta function.
    """
    theta = check_theta(theta)
    _check_tau(tau_r)
    w = _check_zone(omega, tau_r)
    if theta == 1.0:
        raise DegenerateError("measurement broadening is a delta function at theta = 1")
    values = (tau_r / (2.0 * math.pi)) * (1.0 - theta * theta) / (
        1.0 + theta * theta - 2.0 * theta * np.cos(w * tau_r)
    )
    return _returns_like(omega, values)


def broadening_extrema(theta: float, tau_r: float) -> tuple[float, float]:
    """(F_min, F_max): F at the zone edges and at w = 0."""
    theta = check_theta(theta)
    _check_tau(tau_r)
    if theta == 1.0:
        raise DegenerateError("measurement broadening is a delta function at theta = 1")
    scale = tau_r / (2.0 * math.pi)
    return scale * (1.0 - theta) / (1.0 + theta), scale * (1.0 + theta) / (1.0 - theta)


def reservoir_spectrum_lorentzian(model: CorrelationModel, omega: ArrayLike) -> ArrayLike:
    """
    Lorentzian approximations of G near its peaks.

    gamma > 0: (b²/pi tau_r²) G_R / (G_R² + w²), G_R = (1 - gamma)/tau_r.
    gamma < 0: the same shape centred on the nearer zone edge with
    G_R' = (1 + gamma)/tau_r. gamma = 0 returns the flat exact spectrum.
    """
    w = _check_zone(omega, model.tau_r)
    tau = model.tau_r
    scale = model.b ** 2 / (math.pi * tau * tau)

    if model.gamma == 0.0:
        values = np.full(w.shape, model.b ** 2 / (2.0 * math.pi * tau))
    elif model.gamma > 0.0:
        width = (1.0 - model.gamma) / tau
        values = scale * width / (width ** 2 + w ** 2)
    else:
        width = (1.0 + model.gamma) / tau
        detuning = math.pi / tau - np.abs(w)
        values = scale * width / (width ** 2 + detuning ** 2)
    return _returns_like(omega, values)


def measurement_broadening_lorentzian(theta: float, tau_r: float, omega: ArrayLike) -> ArrayLike:
    """F(w) ≈ (1/pi)(gamma0/2)/((gamma0/2)² + w²) with gamma0 = -2 ln(theta)/tau_r."""
    theta = check_theta(theta)
    _check_tau(tau_r)
    w = _check_zone(omega, tau_r)
    if theta in (0.0, 1.0):
        raise DegenerateError("the Lorentzian form of F needs 0 < theta < 1")
    half_width = -math.log(theta) / tau_r
    values = half_width / (math.pi * (half_width ** 2 + w ** 2))
    return _returns_like(omega, values)


def sample_spectrum(fn: Callable[[np.ndarray], np.ndarray], tau_r: float, points: int) -> SpectralFunction:
    """Samples a zone spectrum on `points` uniform frequencies including both edges."""
    if points < 2:
        raise DomainError(f"need at least 2 grid points, got {points!r}")
    edge = math.pi / _check_tau(tau_r)
    omega = np.linspace(-edge, edge, points)
    return SpectralFunction(omega=omega, values=np.asarray(fn(omega), dtype=float), tau_r=tau_r)


def _zone_breakpoints(model: CorrelationModel, theta: float) -> list[float]:
    edge = math.pi / model.tau_r
    points = [0.0]
    # F peaks at 0 with half-width ~ (1 - theta)/tau_r.
    points += peak_breakpoints(0.0, (1.0 - theta) / model.tau_r, -edge, edge)
    if model.gamma > 0:
        points += peak_breakpoints(0.0, (1.0 - model.gamma) / model.tau_r, -edge, edge)
    elif model.gamma < 0:
        width = (1.0 + model.gamma) / model.tau_r
        points += peak_breakpoints(edge, width, -edge, edge)
        points += peak_breakpoints(-edge, width, -edge, edge)
    return points


def decay_rate_overlap(model: CorrelationModel, theta: float,
                       tolerance: float = DEFAULT_TOLERANCE,
                       max_panels: int = DEFAULT_MAX_PANELS) -> RateResult:
    """
    R = 2 pi ∫ G(w) F(w) dw over the zone, by adaptive quadrature.

    At theta = 1 F is a delta at w = 0 and the overlap is its limit
    2 pi G(0).

    Raises:
        DivergenceError: At gamma theta = 1.
        DegenerateError: At |gamma| = 1 with theta < 1.
        ConvergenceError: If the quadrature does not converge.

    Returns:
        RateResult: The rate with a quadrature_error diagnostic.
    """
    theta = check_theta(theta)
    if model.gamma * theta >= 1.0:
        raise DivergenceError("decay rate diverges at gamma*theta = 1")

    if theta == 1.0:
        return RateResult(r=2.0 * math.pi * reservoir_spectrum(model, 0.0))

    edge = math.pi / model.tau_r

    def integrand(w):
        return 2.0 * math.pi * reservoir_spectrum(model, w) * measurement_broadening(theta, model.tau_r, w)

    result = integrate(
        integrand, -edge, edge,
        breakpoints=_zone_breakpoints(model, theta),
        abs_tol=tolerance, rel_tol=tolerance, max_panels=max_panels,
    )
    return RateResult(
        r=result.value,
        diagnostics=(Diagnostic("quadrature_error", result.error, abs(result.value), tolerance),),
    )


def effective_measurement_rate(theta: float, tau_r: float) -> float:
    """nu = 2(1 - theta)/[(1 + theta) tau_r] = 1/[pi F(0)]."""
    theta = check_theta(theta)
    return 2.0 * (1.0 - theta) / ((1.0 + theta) * _check_tau(tau_r))


def qze_rate_form(delta_phi: float, tau_r: float, theta: float) -> float:
    """R = 2 (dphi/tau_r)² / nu for fixed jumps under measurement rate nu."""
    nu = effective_measurement_rate(theta, tau_r)
    if nu == 0.0:
        raise DomainError("the measurement-rate form needs theta < 1")
    return 2.0 * (delta_phi / tau_r) ** 2 / nu


# --- Continuous noise ---

def _check_gamma0(gamma0: float) -> float:
    if not (math.isfinite(gamma0) and gamma0 >= 0):
        raise DomainError(f"gamma0 must be a non-negative rate, got {gamma0!r}")
    return gamma0


def continuous_rate(noise: ContinuousNoiseModel, gamma0: float,
                    threshold: float = DEFAULT_THRESHOLD) -> RateResult:
    """
    R = 2 ∫_0^inf k(t) e^{-gamma0 t/2} dt = 2 k0 / (gamma_R + gamma0/2).

    Diagnostics: cumulant_truncation (R vs gamma_R) and kernel_slow
    (R vs gamma_R + gamma0, the decay of the memory kernel).
    """
    gamma0 = _check_gamma0(gamma0)
    rate = 2.0 * noise.k0 / (noise.gamma_r + 0.5 * gamma0)
    return RateResult(
        r=rate,
        diagnostics=(
            cumulant_truncation(rate, noise.gamma_r, threshold),
            Diagnostic("kernel_slow", rate, noise.gamma_r + gamma0, threshold),
        ),
    )


def continuous_rate_at(noise: ContinuousNoiseModel, gamma0: float, t: float) -> float:
    """Transient rate R(t) = 2 k0 (1 - e^{-(gamma_R + gamma0/2) t}) / (gamma_R + gamma0/2)."""
    gamma0 = _check_gamma0(gamma0)
    if not t >= 0:
        raise DomainError(f"t must be >= 0, got {t!r}")
    total = noise.gamma_r + 0.5 * gamma0
    return 2.0 * noise.k0 * -math.expm1(-total * t) / total


def continuous_reservoir_spectrum(noise: ContinuousNoiseModel, omega: ArrayLike) -> ArrayLike:
    """G(w) = (k0/pi) gamma_R / (gamma_R² + w²)."""
    w = np.asarray(omega, dtype=float)
    values = (noise.k0 / math.pi) * noise.gamma_r / (noise.gamma_r ** 2 + w ** 2)
    return _returns_like(omega, values)


def continuous_broadening(gamma0: float, omega: ArrayLike) -> ArrayLike:
    """F(w) = (1/pi)(gamma0/2) / ((gamma0/2)² + w²)."""
    gamma0 = _check_gamma0(gamma0)
    if gamma0 == 0.0:
        raise DegenerateError("continuous broadening is a delta function at gamma0 = 0")
    w = np.asarray(omega, dtype=float)
    half = 0.5 * gamma0
    values = half / (math.pi * (half * half + w ** 2))
    return _returns_like(omega, values)


def continuous_rate_overlap(noise: ContinuousNoiseModel, gamma0: float, span: float = 200.0,
                            tolerance: float = DEFAULT_TOLERANCE,
                            max_panels: int = DEFAULT_MAX_PANELS) -> RateResult:
    """
    2 pi ∫ G(w) F(w) dw over |w| <= span * gamma_R with the continuous Lorentzians.

    Cross-checks continuous_rate; the truncated tails contribute
    O((span)^-3) relative error.
    """
    gamma0 = _check_gamma0(gamma0)
    if gamma0 == 0.0:
        raise DegenerateError("the overlap needs gamma0 > 0")
    if span <= 0:
        raise DomainError(f"span must be positive, got {span!r}")

    limit = span * noise.gamma_r
    breakpoints = [0.0]
    breakpoints += peak_breakpoints(0.0, noise.gamma_r, -limit, limit)
    breakpoints += peak_breakpoints(0.0, 0.5 * gamma0, -limit, limit)

    def integrand(w):
        return 2.0 * math.pi * continuous_reservoir_spectrum(noise, w) * continuous_broadening(gamma0, w)

    result = integrate(integrand, -limit, limit, breakpoints=breakpoints,
                       abs_tol=tolerance, rel_tol=tolerance, max_panels=max_panels)
    return RateResult(
        r=result.value,
        diagnostics=(Diagnostic("quadrature_error", result.error, abs(result.value), tolerance),),
    )
