"""
Defines the ExperimentManager, the central access point for all managers.

This file initializes the ExperimentManager facade. It instantiates the
specific experiment managers and exposes them as properties, and it maps
subcommand names to manager methods so the CLI, the API and 'rerun' can
dispatch by name (e.g. 'current_app.experiment_manager.run("decay", ...)').
"""

import logging

from .BaseManager import BaseManager
from .DecayManager import DecayManager
from .MonteCarloManager import MonteCarloManager
from .RateManager import RateManager
from .SpectrumManager import SpectrumManager
from .ValidityManager import ValidityManager
from app.helper.functions.response_schemas import error_res

# Experiments that take a worker count.
PARALLEL_EXPERIMENTS = {"decay", "montecarlo"}


class ExperimentManager(BaseManager):
    """
    Holds one instance of every experiment manager (Facade pattern).
    """
    def __init__(self, settings: dict, logger: logging.Logger) -> None:
        """
        Initializes the ExperimentManager and all child manager instances.

        Args:
            settings (dict): The Flask config.
            logger (logging.Logger): The application logger.
        """
        super().__init__(self, logger, settings)

        self._rate_manager = RateManager(self, logger, settings)
        self._spectrum_manager = SpectrumManager(self, logger, settings)
        self._decay_manager = DecayManager(self, logger, settings)
        self._montecarlo_manager = MonteCarloManager(self, logger, settings)
        self._validity_manager = ValidityManager(self, logger, settings)

        self._commands = {
            "rate-curve": self._rate_manager.rate_curve,
            "continuous-rate": self._rate_manager.continuous_rate,
            "spectra": self._spectrum_manager.spectra,
            "decay": self._decay_manager.decay,
            "montecarlo": self._montecarlo_manager.montecarlo,
            "validate": self._validity_manager.validate,
        }

    @property
    def rate(self) -> RateManager:
        """
        Provides access to the RateManager instance.

        Returns:
            RateManager: The manager for the rate experiments.
        """
        return self._rate_manager

    @property
    def spectrum(self) -> SpectrumManager:
        return self._spectrum_manager

    @property
    def decay(self) -> DecayManager:
        return self._decay_manager

    @property
    def montecarlo(self) -> MonteCarloManager:
        """
        Provides access to the MonteCarloManager instance.

        Returns:
            MonteCarloManager: The manager for ensemble runs.
        """
        return self._montecarlo_manager

    @property
    def validity(self) -> ValidityManager:
        return self._validity_manager

    @property
    def names(self) -> list[str]:
        return sorted(self._commands)

    def run(self, name: str, params: dict, workers: int = 1) -> dict:
        """
        Runs an experiment by subcommand name.

        Args:
            name (str): Subcommand, e.g. "rate-curve".
            params (dict): Validated parameters for that experiment.
            workers (int, optional): Worker processes for ensemble runs.

        Returns:
            dict: The manager's standardized response.
        """
        handler = self._commands.get(name)
        if handler is None:
            return error_res(msg=f"Unknown experiment '{name}'", error="validation")

        kwargs = dict(params)
        if name in PARALLEL_EXPERIMENTS:
            kwargs["workers"] = workers
        return handler(**kwargs)
