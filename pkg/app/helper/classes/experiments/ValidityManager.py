"""
Manages the validity report.

Lists every "<<" condition of the discrete rate theory as lhs, rhs and
their ratio against the threshold.
"""

from .BaseManager import BaseManager
from app.domain.models import CorrelationModel
from app.physics import spectra


class ValidityManager(BaseManager):
    """
    Handles the 'validate' experiment.
    """
    def __init__(self, experiment_manager_instance, logger, settings) -> None:
        super().__init__(experiment_manager_instance, logger, settings)

    def validate(self, b: float, gamma: float, tau_r: float, theta: float, n: int, threshold: float) -> dict:
        """
        Tabulates the validity diagnostics for one parameter set.

        Returns:
            dict: A standardized response; payload 'table' has columns
                condition, lhs, rhs, ratio, threshold, satisfied.
        """
        params = {"b": b, "gamma": gamma, "tau_r": tau_r, "theta": theta, "n": n, "threshold": threshold}

        def build():
            model = CorrelationModel(b=b, gamma=gamma, tau_r=tau_r)
            rows = [
                (diag.name, diag.lhs, diag.rhs, diag.ratio, diag.threshold, diag.satisfied)
                for diag in spectra.validity_check(model, theta, n, threshold)
            ]
            unsatisfied = [row[0] for row in rows if not row[-1]]
            if unsatisfied:
                self._logger.info("unsatisfied conditions: %s", ", ".join(unsatisfied))
            return self._table("validate", ["condition", "lhs", "rhs", "ratio", "threshold", "satisfied"],
                               rows, params)

        return self._run("validity check", build)
