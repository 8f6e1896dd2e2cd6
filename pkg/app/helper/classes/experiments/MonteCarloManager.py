"""
Manages the Monte Carlo experiment.

This file defines the MonteCarloManager class, which builds a jump model
from flat parameters, runs the ensemble, and sets the estimate next to the
matching exact result whenever one exists.
"""

from typing import Callable, Optional

import numpy as np

from .BaseManager import BaseManager
from app.domain.models import (
    EnsembleSpec,
    FiniteMarkovJumps,
    FixedJumps,
    IidTwoPointJumps,
    JumpKind,
    JumpModel,
    PersistenceJumps,
)
from app.physics import chain, closed_forms, montecarlo
from app.physics.errors import DomainError


class MonteCarloManager(BaseManager):
    """
    Handles the 'montecarlo' experiment.
    """
    def __init__(self, experiment_manager_instance, logger, settings) -> None:
        super().__init__(experiment_manager_instance, logger, settings)

    @staticmethod
    def build_model(model: str, delta_phi: Optional[float] = None, p: Optional[float] = None,
                    values: Optional[list] = None, p0: Optional[list] = None,
                    transition: Optional[list] = None) -> JumpModel:
        """
        Creates a jump model from its kind and flat parameters.

        Raises:
            DomainError: If a parameter the kind needs is missing or invalid.

        Returns:
            JumpModel: The model.
        """
        kind = JumpKind(model)

        if kind is JumpKind.FINITE_MARKOV:
            if not values or not p0 or not transition:
                raise DomainError("the markov model needs values, p0 and transition")
            return FiniteMarkovJumps(values=tuple(values), p0=tuple(p0), transition=tuple(map(tuple, transition)))

        if delta_phi is None:
            raise DomainError(f"the {kind.value} model needs delta_phi")
        if kind is JumpKind.FIXED:
            return FixedJumps(delta_phi=delta_phi)
        if kind is JumpKind.IID_TWO_POINT:
            return IidTwoPointJumps(delta_phi=delta_phi)
        if p is None:
            raise DomainError("the persistence model needs p")
        return PersistenceJumps(delta_phi=delta_phi, p=p)

    @staticmethod
    def reference_law(model: JumpModel, theta: float, n_max: int) -> Optional[Callable[[int], float]]:
        """
        The exact P_h(n) matching the ensemble, or None when there is none.

        Fixed jumps have a closed form for every theta. The random models
        have one at theta = 1 (free evolution) and at theta = 0 (projective
        measurement after every jump).
        """
        if isinstance(model, FixedJumps):
            return lambda n: closed_forms.p_h_fixed_angle(n, model.delta_phi, theta)

        if theta not in (0.0, 1.0):
            return None

        if isinstance(model, FiniteMarkovJumps):
            spec = model.chain_spec()
            if theta == 1.0:
                curve = chain.p_h_chain_curve(n_max, spec)
                return lambda n: float(curve[n])
            return lambda n: chain.p_h_chain_projective(n, spec)

        if theta == 0.0:
            return lambda n: closed_forms.p_h_projective(n, model.delta_phi)
        if isinstance(model, IidTwoPointJumps):
            mean_cos2 = float(np.cos(2.0 * model.delta_phi))
            return lambda n: closed_forms.p_h_iid(n, mean_cos2)
        return lambda n: closed_forms.p_h_persistence_exact(n, model.delta_phi, model.p)

    def montecarlo(self, model: str, theta: float, n_max: int, trajectories: int, seed: int,
                   delta_phi: Optional[float] = None, p: Optional[float] = None,
                   values: Optional[list] = None, p0: Optional[list] = None,
                   transition: Optional[list] = None, survival: bool = False,
                   workers: int = 1) -> dict:
        """
        Runs the ensemble and tabulates it against the reference law.

        Args:
            model (str): "fixed", "iid", "persistence" or "markov".
            theta (float): Amplitude transmissivity.
            n_max (int): Last round trip.
            trajectories (int): Ensemble size.
            seed (int): Run seed.
            delta_phi, p, values, p0, transition: Model parameters.
            survival (bool, optional): Add the unabsorbed-fraction columns.
            workers (int, optional): Worker processes; does not change results.

        Returns:
            dict: A standardized response; payload 'table' has columns
                n, p_h_mc, stderr, p_h_reference [, survival, survival_stderr].
        """
        params = {
            "model": model, "theta": theta, "n_max": n_max, "trajectories": trajectories, "seed": seed,
            "delta_phi": delta_phi, "p": p, "values": values, "p0": p0, "transition": transition,
            "survival": survival,
        }

        def build():
            jump_model = self.build_model(model, delta_phi, p, values, p0, transition)
            spec = EnsembleSpec(model=jump_model, theta=theta, n_max=n_max,
                                trajectories=trajectories, seed=seed)
            decay, unabsorbed = montecarlo.estimate_ensemble(
                spec, workers=workers, block_size=self._setting("MC_BLOCK_SIZE", montecarlo.MC_BLOCK_SIZE)
            )
            reference = self.reference_law(jump_model, theta, n_max)

            columns = ["n", "p_h_mc", "stderr", "p_h_reference"]
            if survival:
                columns += ["survival", "survival_stderr"]

            rows = []
            for point, norm in zip(decay.points, unabsorbed.points):
                row = [point.n, point.p_h, point.stderr, None if reference is None else reference(point.n)]
                if survival:
                    row += [norm.p_h, norm.stderr]
                rows.append(tuple(row))

            return self._table("montecarlo", columns, rows, params, seed=seed,
                               reference=None if reference is None else "exact")

        return self._run("monte carlo ensemble", build)
