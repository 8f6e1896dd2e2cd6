"""
Manages the decay-curve experiment.

This file defines the DecayManager class, which tabulates P_h(n) for the
persistence chain with free evolution (exact and approximate), with a
projective measurement after every jump and, optionally, from a Monte
Carlo ensemble of the same chain.
"""

from .BaseManager import BaseManager
from app.domain.models import EnsembleSpec, PersistenceJumps
from app.physics import closed_forms, montecarlo
from app.physics.errors import DomainError


class DecayManager(BaseManager):
    """
    Handles the 'decay' experiment.
    """
    def __init__(self, experiment_manager_instance, logger, settings) -> None:
        super().__init__(experiment_manager_instance, logger, settings)

    @staticmethod
    def _approx_or_none(n: int, delta_phi: float, p: float):
        # Outside its domain the approximation column is left empty.
        try:
            return closed_forms.p_h_persistence_approx(n, delta_phi, p)
        except DomainError:
            return None

    def decay(self, delta_phi: float, p: float, n_max: int, with_montecarlo: bool = False,
              trajectories: int = 0, seed: int = 0, workers: int = 1) -> dict:
        """
        Tabulates the decay curves for n = 0..n_max.

        Args:
            delta_phi (float): Jump size in radians.
            p (float): Repeat probability of the persistence chain.
            n_max (int): Last round trip.
            with_montecarlo (bool, optional): Add P_montecarlo and stderr columns.
            trajectories (int, optional): Ensemble size for the Monte Carlo columns.
            seed (int, optional): Run seed for the Monte Carlo columns.
            workers (int, optional): Worker processes; does not change results.

        Returns:
            dict: A standardized response; payload 'table' has columns
                n, P_free_exact, P_free_approx, P_projective
                [, P_montecarlo, stderr].
        """
        params = {"delta_phi": delta_phi, "p": p, "n_max": n_max, "with_montecarlo": with_montecarlo}
        if with_montecarlo:
            params.update(trajectories=trajectories, seed=seed)

        def build():
            columns = ["n", "P_free_exact", "P_free_approx", "P_projective"]
            rows = [
                [
                    n,
                    closed_forms.p_h_persistence_exact(n, delta_phi, p),
                    self._approx_or_none(n, delta_phi, p),
                    closed_forms.p_h_projective(n, delta_phi),
                ]
                for n in range(n_max + 1)
            ]

            if with_montecarlo:
                spec = EnsembleSpec(
                    model=PersistenceJumps(delta_phi=delta_phi, p=p),
                    theta=1.0, n_max=n_max, trajectories=trajectories, seed=seed,
                )
                curve = montecarlo.estimate_decay(spec, workers=workers)
                columns += ["P_montecarlo", "stderr"]
                for row, point in zip(rows, curve.points):
                    row += [point.p_h, point.stderr]

            return self._table("decay", columns, [tuple(row) for row in rows], params,
                               seed=seed if with_montecarlo else None)

        return self._run("decay curves", build)
