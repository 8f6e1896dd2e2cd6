"""
Defines the configuration classes for the Flask application.

This file loads environment variables from a .env file and defines
separate configuration classes (Default, Production, Testing). The
'create_app' factory in app/__init__.py uses this file to load the
correct settings, and the experiment managers read their numerical
defaults from it.
"""

import os
from dotenv import load_dotenv

# Load environment variables from a .env file (e.g., ZENOLAB_WORKERS)
load_dotenv()


def _env_int(name: str, fallback: int) -> int:
    value = os.environ.get(name)
    return int(value) if value else fallback


class DefaultConfig():
    """
    Base configuration class.

    Contains the settings shared by all environments.
    """
    # 1. Security
    # Not used for sessions (the app has none) but Flask expects one.
    SECRET_KEY = os.environ.get("SECRET_KEY") or "unsecure_dev_key"

    # 2. Application metadata, written into every result file
    APP_NAME = "zenolab"
    APP_VERSION = "1.0.0"
    LOG_LEVEL = os.environ.get("LOG_LEVEL", "INFO")

    # 3. Experiment defaults
    DEFAULT_SEED = 0
    DEFAULT_N_MAX = 1000
    DEFAULT_TRAJECTORIES = 100_000
    OMEGA_GRID_POINTS = 2001
    THETA_GRID_STEP = 0.01
    VALIDITY_THRESHOLD = 0.1

    # 4. Numerical methods
    QUADRATURE_TOLERANCE = 1e-10
    QUADRATURE_MAX_PANELS = 4000

    # Trajectories per block; fixed so results do not depend on MC_WORKERS.
    MC_BLOCK_SIZE = 1024
    MC_WORKERS = _env_int("ZENOLAB_WORKERS", 1)


class ProductionConfig(DefaultConfig):
    """
    Configuration for a deployed API server (e.g., under Gunicorn).
    """
    TESTING = False
    LOG_LEVEL = os.environ.get("LOG_LEVEL", "WARNING")


class TestingConfig(DefaultConfig):
    """
    Configuration for local development and the test suite.
    """
    TESTING = True
    LOG_LEVEL = "DEBUG"

    # Small ensembles keep CLI and API tests fast.
    DEFAULT_TRAJECTORIES = 2000
    MC_WORKERS = 1


# Maps the FLASK_CONFIG value to a configuration class.
config = {
    "default": DefaultConfig,
    "production": ProductionConfig,
    "testing": TestingConfig
}

# A fallback alias for the DefaultConfig.
DEFAULT = DefaultConfig
