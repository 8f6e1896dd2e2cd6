"""
Exact P_h for a finite Markov chain of rotation angles.

With f_0 = p0 and f_k = P Phi f_{k-1}, where Phi = diag(exp(2i dphi_j)),
the sum of the entries of f_n is the average phase factor <exp(2i phi_n)>
and P_h(n) = 1/2 + 1/2 Re(sum f_n). The vector is never renormalized:
its shrinking modulus is the dephasing.
"""

from __future__ import annotations

import numpy as np

from app.domain.models import ChainSpec
from app.physics.errors import DomainError


def persistence_chain_spec(delta_phi: float, p: float) -> ChainSpec:
    """Two-state chain (+dphi, -dphi) with p0 = (1/2, 1/2) and P = [[p, q], [q, p]]."""
    if not 0.0 <= p <= 1.0:
        raise DomainError(f"p must lie in [0, 1], got {p!r}")
    q = 1.0 - p
    return ChainSpec(values=(delta_phi, -delta_phi), p0=(0.5, 0.5), transition=((p, q), (q, p)))


def _arrays(spec: ChainSpec):
    return np.asarray(spec.values), np.asarray(spec.p0), np.asarray(spec.transition)


def p_h_chain_curve(n_max: int, spec: ChainSpec) -> np.ndarray:
    """
    P_h(0..n_max) in a single pass of the recursion.

    Raises:
        DomainError: If n_max is negative.

    Returns:
        np.ndarray: n_max + 1 probabilities.
    """
    if n_max < 0:
        raise DomainError(f"n_max must be >= 0, got {n_max!r}")
    values, p0, transition = _arrays(spec)
    phase = np.exp(2j * values)

    f = p0.astype(complex)
    out = np.empty(n_max + 1, dtype=float)
    out[0] = 0.5 + 0.5 * f.sum().real
    for n in range(1, n_max + 1):
        f = transition @ (phase * f)
        out[n] = 0.5 + 0.5 * f.sum().real
    return out


def p_h_chain(n: int, spec: ChainSpec) -> float:
    """
    P_h(n) = 1/2 + 1/2 Re[u (P Phi)^n p0] by n matrix-vector products.

    Args:
        n (int): Round trips, n >= 0.
        spec (ChainSpec): The angle chain.

    Returns:
        float: P_h(n).
    """
    return float(p_h_chain_curve(n, spec)[-1])


def p_h_chain_projective(n: int, spec: ChainSpec) -> float:
    """
    P_h(n) = u (P C)^n p0 with C = diag(cos² dphi_j): a projective measurement after each jump.
    """
    if n < 0:
        raise DomainError(f"n must be >= 0, got {n!r}")
    values, p0, transition = _arrays(spec)
    survive = np.cos(values) ** 2

    f = p0.copy()
    for _ in range(n):
        f = transition @ (survive * f)
    return float(f.sum())
