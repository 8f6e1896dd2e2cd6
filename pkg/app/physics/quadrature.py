"""
Adaptive composite Gauss-Legendre quadrature.

The interval is cut at caller-supplied breakpoints, then the panel with the
largest error estimate is halved until the summed estimate meets the
tolerance. A panel's error is the difference between its one-panel rule
and the sum of the rules on its two halves, which is the same doubling
idea as a classic "integrate, halve, compare" loop but applied locally so
narrow spectral peaks get the panels they need.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Iterable

import numpy as np

from app.physics.errors import ConvergenceError, DomainError

DEFAULT_ORDER = 20
DEFAULT_TOLERANCE = 1e-10
DEFAULT_MAX_PANELS = 4000
# Refinements between exact re-sums of the running value and error.
RESUM_INTERVAL = 256


@dataclass(frozen=True)
class QuadratureResult:
    value: float
    error: float
    panels: int


@lru_cache(maxsize=8)
def _nodes(order: int) -> tuple[np.ndarray, np.ndarray]:
    """
    Cached Gauss-Legendre nodes and weights on [-1, 1].

    '@lru_cache' keeps one table per order, so repeated integrals only
    pay for function evaluations.
    """
    return np.polynomial.legendre.leggauss(order)


def gauss_legendre(f: Callable, a: float, b: float, order: int = DEFAULT_ORDER) -> float:
    """Fixed-order Gauss-Legendre rule on [a, b]. f must accept numpy arrays."""
    x, w = _nodes(order)
    half = 0.5 * (b - a)
    mid = 0.5 * (a + b)
    return float(half * np.dot(w, f(mid + half * x)))


def peak_breakpoints(center: float, width: float, lo: float, hi: float, levels: int = 12) -> list[float]:
    """
    Breakpoints that resolve a peak of the given half-width.

    Returns center, and center +/- width * 2^k for k = 0..levels-1, keeping
    only the points that fall strictly inside (lo, hi).
    """
    points = [center]
    if width > 0 and math.isfinite(width):
        for k in range(levels):
            offset = width * 2.0 ** k
            points.extend((center - offset, center + offset))
    return [x for x in points if lo < x < hi]


def integrate(
    f: Callable,
    a: float,
    b: float,
    breakpoints: Iterable[float] = (),
    abs_tol: float = DEFAULT_TOLERANCE,
    rel_tol: float = DEFAULT_TOLERANCE,
    order: int = DEFAULT_ORDER,
    max_panels: int = DEFAULT_MAX_PANELS,
) -> QuadratureResult:
    """
    Integrates f over [a, b] to max(abs_tol, rel_tol * |value|).

    Args:
        f (Callable): Vectorized integrand.
        a (float): Lower limit.
        b (float): Upper limit, b > a.
        breakpoints (Iterable[float]): Extra initial cut points; points
            outside (a, b) are ignored.
        abs_tol (float): Absolute tolerance.
        rel_tol (float): Relative tolerance.
        order (int): Nodes per panel.
        max_panels (int): Panel budget.

    Raises:
        DomainError: If the interval is empty or not finite.
        ConvergenceError: If the tolerance is not met within max_panels.

    Returns:
        QuadratureResult: Value, error estimate and number of panels used.
    """
    if not (math.isfinite(a) and math.isfinite(b)) or b <= a:
        raise DomainError(f"integration interval [{a}, {b}] must be finite and non-empty")

    cuts = sorted({a, b, *(x for x in breakpoints if a < x < b)})

    # Heap entries: (-error, left, right, refined value)
    heap = []
    total = 0.0
    total_error = 0.0
    for left, right in zip(cuts[:-1], cuts[1:]):
        coarse = gauss_legendre(f, left, right, order)
        mid = 0.5 * (left + right)
        fine = gauss_legendre(f, left, mid, order) + gauss_legendre(f, mid, right, order)
        error = abs(fine - coarse)
        heapq.heappush(heap, (-error, left, right, fine))
        total += fine
        total_error += error

    refinements = 0
    while total_error > max(abs_tol, rel_tol * abs(total)):
        if len(heap) >= max_panels:
            raise ConvergenceError(
                f"quadrature on [{a}, {b}] did not converge in {max_panels} panels "
                f"(error estimate {total_error:.3e})"
            )

        neg_error, left, right, fine = heapq.heappop(heap)
        total -= fine
        total_error += neg_error

        mid = 0.5 * (left + right)
        for lo, hi in ((left, mid), (mid, right)):
            coarse = gauss_legendre(f, lo, hi, order)
            centre = 0.5 * (lo + hi)
            refined = gauss_legendre(f, lo, centre, order) + gauss_legendre(f, centre, hi, order)
            error = abs(refined - coarse)
            heapq.heappush(heap, (-error, lo, hi, refined))
            total += refined
            total_error += error

        refinements += 1
        if refinements % RESUM_INTERVAL == 0:
            total, total_error = _resum(heap)

    value, error = _resum(heap)
    return QuadratureResult(value=value, error=error, panels=len(heap))


def _resum(heap: list) -> tuple[float, float]:
    """Exact sums of the panel values and error estimates on the heap."""
    return math.fsum(entry[3] for entry in heap), math.fsum(-entry[0] for entry in heap)
