"""
Defines the BaseManager class, the parent for all experiment managers.

This file provides the reusable logic every experiment shares: building
a ResultTable with its reproducibility metadata, and running the numerical
work inside a guard that turns library errors into standardized error
responses (so nothing from app.physics escapes to the CLI or the API).
"""

import logging
from typing import Any, Callable, Optional

from app.domain.models import ResultTable
from app.helper.functions.response_schemas import error_res, success_res
from app.physics.errors import ZenolabError


class BaseManager():
    """
    Provides table construction and error handling for child managers.

    This class is not intended to be used directly, but rather inherited
    by specific experiment managers (e.g., RateManager, DecayManager).
    """
    def __init__(self, experiment_manager_instance, logger: logging.Logger, settings: dict) -> None:
        """
        Initializes the BaseManager.

        Args:
            experiment_manager_instance (ExperimentManager): The facade,
                giving access to the other managers.
            logger (logging.Logger): The application logger.
            settings (dict): The Flask config (tolerances, workers, ...).
        """
        from app.helper.classes.experiments.ExperimentManager import ExperimentManager
        self._experiment_manager: ExperimentManager = experiment_manager_instance
        self._logger = logger
        self._settings = settings

    def _setting(self, key: str, fallback: Any = None) -> Any:
        return self._settings.get(key, fallback)

    @staticmethod
    def _table(name: str, columns: list, rows: list, params: dict, seed: Optional[int] = None,
               **notes) -> ResultTable:
        """
        Creates a ResultTable carrying everything needed to re-run it.

        Args:
            name (str): Subcommand name (e.g. "rate-curve").
            columns (list): Column names.
            rows (list): Data rows.
            params (dict): The full validated parameter set.
            seed (int, optional): The run seed, if the experiment is random.
            **notes: Extra metadata (e.g. reference formula names).

        Returns:
            ResultTable: The table.
        """
        meta = {"params": dict(params), "seed": seed}
        meta.update(notes)
        return ResultTable(name=name, columns=list(columns), rows=rows, meta=meta)

    def _run(self, label: str, build: Callable[[], ResultTable]) -> dict:
        """
        Runs an experiment and wraps the outcome in a response dictionary.

        Args:
            label (str): Human-readable experiment name for messages.
            build (Callable[[], ResultTable]): Does the numerical work.

        Returns:
            dict: success_res with {"table": ResultTable}, or error_res whose
                'error' is the library error kind.
        """
        self._logger.info("Running %s", label)
        try:
            table = build()

        except ZenolabError as e:
            self._logger.warning("%s failed (%s): %s", label, e.kind, e)
            return error_res(msg=f"{label} failed: {e}", error=e.kind)

        except Exception as e:
            self._logger.exception("%s failed with an unexpected error", label)
            return error_res(msg=f"An unknown error occured in {label}: {e}")

        self._logger.info("%s produced %d rows", label, len(table.rows))
        return success_res(payload={"table": table}, msg=f"{label} complete")
