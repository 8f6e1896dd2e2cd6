"""
Exact round-trip propagation of the photon polarization amplitudes.

One round trip rotates the polarization by an angle and then passes the
photon through the absorber, which scales the vertical amplitude by the
transmissivity theta. Both steps are linear, so the whole trajectory is an
ordered product of 2x2 real matrices.
"""

from __future__ import annotations

import math
from typing import Iterable

import numpy as np

from app.domain.models import (
    PolarizationAmplitudes,
    PolarizationTensor,
    RoundTripOperator,
    check_theta,
)
from app.physics.errors import DomainError


def round_trip_operator(delta_phi: float, theta: float) -> RoundTripOperator:
    """
    Builds the matrix for one rotation followed by one absorber pass.

    Args:
        delta_phi (float): Rotation angle in radians.
        theta (float): Amplitude transmissivity in [0, 1].

    Raises:
        DomainError: If theta is outside [0, 1] or delta_phi is not finite.

    Returns:
        RoundTripOperator: [[cos, -sin], [theta*sin, theta*cos]].
    """
    theta = check_theta(theta)
    if not math.isfinite(delta_phi):
        raise DomainError(f"delta_phi must be finite, got {delta_phi!r}")

    c, s = math.cos(delta_phi), math.sin(delta_phi)
    return RoundTripOperator(np.array([[c, -s], [theta * s, theta * c]], dtype=float))


def step_amplitudes(eps_h, eps_v, delta_phi, theta: float):
    """
    Applies one round trip to arrays of amplitudes.

    Works elementwise, so a whole ensemble (one angle per member) is advanced
    in a single call. Inputs are not validated.

    Returns:
        tuple: The new (eps_h, eps_v) arrays.
    """
    c = np.cos(delta_phi)
    s = np.sin(delta_phi)
    return c * eps_h - s * eps_v, theta * (s * eps_h + c * eps_v)


def propagate(
    initial: PolarizationAmplitudes,
    jumps: Iterable[float],
    theta: float,
) -> list[PolarizationAmplitudes]:
    """
    Propagates a state through a sequence of round trips.

    Args:
        initial (PolarizationAmplitudes): State before the first round trip.
        jumps (Iterable[float]): Rotation angles, applied in order.
        theta (float): Amplitude transmissivity in [0, 1].

    Raises:
        DomainError: On a non-finite state, angle, or a theta outside [0, 1].

    Returns:
        list[PolarizationAmplitudes]: Element 0 is the initial state,
            element n the state after n round trips.
    """
    theta = check_theta(theta)
    angles = np.asarray(list(jumps), dtype=float)

    if not (math.isfinite(initial.eps_h) and math.isfinite(initial.eps_v)):
        raise DomainError("initial amplitudes must be finite")
    if not np.all(np.isfinite(angles)):
        raise DomainError("rotation angles must be finite")

    states = [initial]
    eps_h, eps_v = initial.eps_h, initial.eps_v
    for delta_phi in angles:
        eps_h, eps_v = step_amplitudes(eps_h, eps_v, delta_phi, theta)
        states.append(PolarizationAmplitudes(float(eps_h), float(eps_v)))

    return states


def stokes_tensor(state: PolarizationAmplitudes) -> PolarizationTensor:
    """Returns (eps_h², eps_v², 2 eps_v eps_h) for the given amplitudes."""
    return PolarizationTensor(
        p_h=state.eps_h ** 2,
        p_v=state.eps_v ** 2,
        u=2.0 * state.eps_v * state.eps_h,
    )
