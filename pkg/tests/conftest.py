"""
Shared pytest fixtures.

The application is built with the "testing" configuration: one worker
and small default ensembles.
"""

import math

import pytest

from app import create_app

DELTA_PHI_4DEG = math.radians(4.0)


@pytest.fixture()
def app():
    return create_app("testing")


@pytest.fixture()
def runner(app):
    return app.test_cli_runner()


@pytest.fixture()
def client(app):
    return app.test_client()


@pytest.fixture()
def manager(app):
    return app.experiment_manager


@pytest.fixture()
def delta_phi():
    """The 4 degree jump used throughout the decay figures."""
    return DELTA_PHI_4DEG
