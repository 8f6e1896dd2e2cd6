"""
Manages the decay-rate experiments.

This file defines the RateManager class, which tabulates the discrete
decay rate against measurement effectiveness (closed form next to the
spectral-overlap quadrature) and the continuous-noise rate against the
mean absorption rate.
"""

from .BaseManager import BaseManager
from app.domain.models import ContinuousNoiseModel, CorrelationModel
from app.physics import spectra


class RateManager(BaseManager):
    """
    Handles the 'rate-curve' and 'continuous-rate' experiments.
    """
    def __init__(self, experiment_manager_instance, logger, settings) -> None:
        super().__init__(experiment_manager_instance, logger, settings)

    def rate_curve(self, b: float, tau_r: float, gamma: list, one_minus_theta: list) -> dict:
        """
        Tabulates R over a grid of 1 - theta for each correlation degree.

        Args:
            b (float): Root-mean-square jump.
            tau_r (float): Round-trip time.
            gamma (list[float]): Correlation degrees, one block of rows each.
            one_minus_theta (list[float]): Measurement effectiveness grid.

        Returns:
            dict: A standardized response; payload 'table' has columns
                gamma, one_minus_theta, R_closed_form, R_overlap_quadrature.
        """
        params = {"b": b, "tau_r": tau_r, "gamma": list(gamma), "one_minus_theta": list(one_minus_theta)}
        tolerance = self._setting("QUADRATURE_TOLERANCE", 1e-10)
        max_panels = self._setting("QUADRATURE_MAX_PANELS", 4000)

        def build():
            rows = []
            for g in gamma:
                model = CorrelationModel(b=b, gamma=g, tau_r=tau_r)
                for effectiveness in one_minus_theta:
                    theta = 1.0 - effectiveness
                    closed = spectra.decay_rate_geometric(model, theta).r
                    overlap = spectra.decay_rate_overlap(model, theta, tolerance, max_panels).r
                    rows.append((g, effectiveness, closed, overlap))
            return self._table("rate-curve", ["gamma", "one_minus_theta", "R_closed_form", "R_overlap_quadrature"],
                               rows, params)

        return self._run("rate curve", build)

    def continuous_rate(self, k0: float, gamma_r: float, gamma0: list, span: float) -> dict:
        """
        Tabulates the continuous-noise rate over a grid of gamma0.

        The overlap column needs gamma0 > 0; at gamma0 = 0 it is left empty.

        Returns:
            dict: A standardized response; payload 'table' has columns
                gamma0, R_closed_form, R_overlap_quadrature, R_over_gamma_r.
        """
        params = {"k0": k0, "gamma_r": gamma_r, "gamma0": list(gamma0), "span": span}
        tolerance = self._setting("QUADRATURE_TOLERANCE", 1e-10)
        max_panels = self._setting("QUADRATURE_MAX_PANELS", 4000)

        def build():
            noise = ContinuousNoiseModel(k0=k0, gamma_r=gamma_r)
            rows = []
            for rate0 in gamma0:
                closed = spectra.continuous_rate(noise, rate0)
                overlap = None
                if rate0 > 0:
                    overlap = spectra.continuous_rate_overlap(noise, rate0, span, tolerance, max_panels).r
                rows.append((rate0, closed.r, overlap, closed.diagnostic("cumulant_truncation").ratio))
            return self._table("continuous-rate",
                               ["gamma0", "R_closed_form", "R_overlap_quadrature", "R_over_gamma_r"],
                               rows, params)

        return self._run("continuous rate", build)
