"""
Defines the index route (/) for the application.

It describes the service: name, version and the experiments the JSON API
can run.
"""

from flask import current_app, jsonify, url_for

from .route_schemas import core_schema
from app.helper.classes.experiments.ExperimentManager import ExperimentManager


def index():
    """
    View function for the root URL (/).

    **Route:** /
    **Method:** GET

    Returns:
        A 200 JSON document listing the experiment endpoints.
    """
    manager: ExperimentManager = current_app.experiment_manager
    return jsonify({
        "app": current_app.config.get("APP_NAME"),
        "version": current_app.config.get("APP_VERSION"),
        "experiments": {name: url_for("api.run_experiment", name=name) for name in manager.names},
        "presets": url_for("api.presets"),
    }), 200


# The schema used by the route initializer in app/__init__.py
index_route_schema = core_schema(rule="/", endpoint="index", view_func=index, methods=["GET"])
