"""
Monte Carlo estimates of P_h(n) and of the unabsorbed fraction.

Trajectories are grouped into fixed-size blocks. Trajectory i always uses
random stream i of the run seed, each block returns per-step means and
sums of squared deviations, and blocks are merged in block order. The
result is therefore bit-identical for any number of workers.

Absorption is applied as deterministic amplitude scaling; only the
rotation angles are random.
"""

from __future__ import annotations

import dataclasses
import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Optional

import numpy as np

from app.domain.models import DecayCurve, DecayPoint, EnsembleSpec, JumpModel
from app.physics.noise import sample_chains
from app.physics.polarization import step_amplitudes

logger = logging.getLogger(__name__)

MC_BLOCK_SIZE = 1024


@dataclass
class Moments:
    """Streaming per-step statistics: count, mean and sum of squared deviations."""
    count: int
    mean: np.ndarray
    m2: np.ndarray

    def merge(self, other: "Moments") -> "Moments":
        # Pairwise update of Chan, Golub and LeVeque.
        total = self.count + other.count
        delta = other.mean - self.mean
        mean = self.mean + delta * (other.count / total)
        m2 = self.m2 + other.m2 + delta ** 2 * (self.count * other.count / total)
        return Moments(total, mean, m2)

    def stderr(self) -> Optional[np.ndarray]:
        if self.count < 2:
            return None
        return np.sqrt(self.m2 / (self.count - 1) / self.count)


def model_meta(model: JumpModel) -> dict:
    """Plain-data description of a jump model for curve metadata."""
    fields = {f.name: getattr(model, f.name) for f in dataclasses.fields(model) if f.name != "kind"}
    return {"kind": model.kind.value, **fields}


def _column_moments(columns: list[np.ndarray]) -> Moments:
    data = np.stack(columns)
    mean = data.mean(axis=1)
    m2 = ((data - mean[:, None]) ** 2).sum(axis=1)
    return Moments(data.shape[1], mean, m2)


def simulate_block(model: JumpModel, theta: float, n_max: int, seed: int,
                   start: int, count: int) -> tuple[Moments, Moments]:
    """
    Propagates trajectories start..start+count-1 and returns their moments.

    Returns:
        tuple[Moments, Moments]: Statistics of eps_h² and of eps_h² + eps_v²
            at n = 0..n_max.
    """
    angles = sample_chains(model, n_max, seed, count, start)

    eps_h = np.ones(count)
    eps_v = np.zeros(count)
    p_h = [eps_h * eps_h]
    norm = [eps_h * eps_h + eps_v * eps_v]
    for k in range(n_max):
        eps_h, eps_v = step_amplitudes(eps_h, eps_v, angles[:, k], theta)
        horizontal = eps_h * eps_h
        p_h.append(horizontal)
        norm.append(horizontal + eps_v * eps_v)

    return _column_moments(p_h), _column_moments(norm)


def _run_block(args) -> tuple[Moments, Moments]:
    return simulate_block(*args)


def _deterministic_moments(spec: EnsembleSpec) -> tuple[Moments, Moments]:
    p_h, norm = simulate_block(spec.model, spec.theta, spec.n_max, spec.seed, 0, 1)
    zeros = np.zeros(spec.n_max + 1)
    return (
        Moments(spec.trajectories, p_h.mean, zeros),
        Moments(spec.trajectories, norm.mean, zeros.copy()),
    )


def _to_curve(moments: Moments, meta: dict, exact: bool = False) -> DecayCurve:
    # An exact curve has zero spread whatever the ensemble size.
    stderr = np.zeros_like(moments.mean) if exact else moments.stderr()
    points = tuple(
        DecayPoint(n=n, p_h=float(moments.mean[n]), stderr=None if stderr is None else float(stderr[n]))
        for n in range(moments.mean.size)
    )
    return DecayCurve(points=points, meta=meta)


def estimate_ensemble(spec: EnsembleSpec, workers: int = 1,
                      block_size: int = MC_BLOCK_SIZE) -> tuple[DecayCurve, DecayCurve]:
    """
    Runs the ensemble once and returns both the decay and the survival curve.

    Args:
        spec (EnsembleSpec): Model, theta, n_max, trajectories and seed.
        workers (int, optional): Worker processes. 1 runs serially.
        block_size (int, optional): Trajectories per block. Part of the
            result's identity, so keep it fixed between compared runs.

    Returns:
        tuple[DecayCurve, DecayCurve]: (P_h curve, unabsorbed-fraction curve).
    """
    meta = {
        "model": model_meta(spec.model),
        "theta": spec.theta,
        "trajectories": spec.trajectories,
        "seed": spec.seed,
    }

    deterministic = spec.model.is_deterministic
    if deterministic:
        logger.debug("%s jumps: evaluating one deterministic trajectory", spec.model.kind.value)
        decay, survival = _deterministic_moments(spec)
    else:
        jobs = [
            (spec.model, spec.theta, spec.n_max, spec.seed, start, min(block_size, spec.trajectories - start))
            for start in range(0, spec.trajectories, block_size)
        ]
        logger.debug("running %d blocks of up to %d trajectories on %d worker(s)",
                     len(jobs), block_size, workers)

        if workers > 1:
            with ProcessPoolExecutor(max_workers=workers) as pool:
                results = list(pool.map(_run_block, jobs))
        else:
            results = [_run_block(job) for job in jobs]

        decay, survival = results[0]
        for block_decay, block_survival in results[1:]:
            decay = decay.merge(block_decay)
            survival = survival.merge(block_survival)

    unitary = spec.theta == 1.0
    if unitary:
        # The norm is exactly conserved.
        survival = Moments(survival.count, np.ones(spec.n_max + 1), np.zeros(spec.n_max + 1))

    return (
        _to_curve(decay, dict(meta, quantity="p_h"), exact=deterministic),
        _to_curve(survival, dict(meta, quantity="survival"), exact=deterministic or unitary),
    )


def estimate_decay(spec: EnsembleSpec, workers: int = 1) -> DecayCurve:
    """Ensemble mean of eps_h(n)² with standard errors for n = 0..n_max."""
    return estimate_ensemble(spec, workers)[0]


def estimate_survival(spec: EnsembleSpec, workers: int = 1) -> DecayCurve:
    """Ensemble mean of eps_h(n)² + eps_v(n)², the unabsorbed fraction."""
    return estimate_ensemble(spec, workers)[1]


def stderr_ratio(small: DecayCurve, large: DecayCurve) -> float:
    """Median ratio of standard errors between two ensembles (n >= 1)."""
    a = small.stderrs[1:]
    b = large.stderrs[1:]
    mask = np.isfinite(a) & np.isfinite(b) & (b > 0)
    if not np.any(mask):
        return math.nan
    return float(np.median(a[mask] / b[mask]))
