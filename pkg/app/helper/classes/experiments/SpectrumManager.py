"""
Manages the spectral-overlap experiment.

Samples the reservoir spectrum G and the measurement broadening F on a
uniform grid of the frequency zone, for each requested correlation degree.
"""

from scipy.integrate import trapezoid

from .BaseManager import BaseManager
from app.domain.models import CorrelationModel
from app.physics import spectra


class SpectrumManager(BaseManager):
    """
    Handles the 'spectra' experiment.
    """
    def __init__(self, experiment_manager_instance, logger, settings) -> None:
        super().__init__(experiment_manager_instance, logger, settings)

    def spectra(self, b: float, tau_r: float, gamma: list, theta: float, points: int) -> dict:
        """
        Tabulates G(w), F(w) at theta = 0 and F(w) at the given theta.

        Args:
            b (float): Root-mean-square jump.
            tau_r (float): Round-trip time.
            gamma (list[float]): Correlation degrees, one block of rows each.
            theta (float): Transmissivity for the F_theta column, < 1.
            points (int): Grid points across the zone, edges included.

        Returns:
            dict: A standardized response; payload 'table' has columns
                gamma, omega, G, F_theta0, F_theta and the trapezoid integral
                of F_theta over the zone in meta 'f_theta_zone_integral'.
        """
        params = {"b": b, "tau_r": tau_r, "gamma": list(gamma), "theta": theta, "points": points}

        def build():
            flat = spectra.sample_spectrum(lambda w: spectra.measurement_broadening(0.0, tau_r, w), tau_r, points)
            peaked = spectra.sample_spectrum(lambda w: spectra.measurement_broadening(theta, tau_r, w), tau_r, points)

            rows = []
            for g in gamma:
                model = CorrelationModel(b=b, gamma=g, tau_r=tau_r)
                reservoir = spectra.sample_spectrum(lambda w: spectra.reservoir_spectrum(model, w), tau_r, points)
                for omega, value, f0, f in zip(reservoir.omega, reservoir.values, flat.values, peaked.values):
                    rows.append((g, float(omega), float(value), float(f0), float(f)))

            # Exactly 1 for the continuous F_theta.
            zone_integral = float(trapezoid(peaked.values, peaked.omega))
            self._logger.debug("zone integral of F_theta: %.12f", zone_integral)
            return self._table("spectra", ["gamma", "omega", "G", "F_theta0", "F_theta"], rows, params,
                               f_theta_zone_integral=zone_integral)

        return self._run("spectra", build)
