"""
Defines the API routes that run experiments.

A POST body is a JSON object with the same keys as a CLI config file.
Two extra keys are understood: 'preset' (a named figure preset of the
same experiment) and 'workers' (worker processes for ensemble runs).

Every response has the shape {"success", "message", "payload"}; on
success the payload is the table document {metadata, columns, rows}.
"""

from flask import current_app, jsonify, request

from . import api_bp
from app.experiments.forms import validate_params
from app.experiments.params import ConfigurationError, load_presets, resolve_params
from app.helper.classes.experiments.ExperimentManager import ExperimentManager
from app.helper.functions.output_writer import table_document

# Manager error kinds and their HTTP statuses.
STATUS_CODES = {
    "validation": 400,
    "domain": 422,
    "divergence": 500,
    "convergence": 500,
}


def _response(success: bool, message: str, payload=None, status: int = 200):
    return jsonify({
        "success": success,
        "message": message,
        "payload": payload if payload is not None else {},
    }), status


@api_bp.post(rule="/<name>", endpoint="run_experiment")
def run_experiment(name: str):
    """
    API endpoint to run one experiment.

    Expects:
        A JSON object of parameters, e.g. {"delta_phi": "4deg", "p": 0.3}.
        An empty body runs the experiment with its defaults.

    On Success:
        - Returns 200 with the result table.

    On Failure:
        - 404 if the experiment does not exist.
        - 400 if the body or a parameter is invalid (field errors in payload).
        - 422 if the parameters are outside the domain of the physics.
        - 500 if a numerical method fails to converge or a quantity diverges.
    """
    manager: ExperimentManager = current_app.experiment_manager
    if name not in manager.names:
        return _response(False, f"Unknown experiment '{name}'", status=404)

    body = request.get_json(silent=True)
    if body is None:
        body = {}
    if not isinstance(body, dict):
        return _response(False, "Request body must be a JSON object", status=400)

    body = dict(body)
    preset = body.pop("preset", None)
    workers = body.pop("workers", None)
    if workers is None:
        workers = current_app.config.get("MC_WORKERS", 1)
    if isinstance(workers, bool) or not isinstance(workers, int) or workers < 1:
        return _response(False, "workers must be a positive integer", status=400)

    try:
        params = resolve_params(name, current_app.config, flags=body, preset=preset)
    except ConfigurationError as e:
        return _response(False, str(e), status=400)

    data, errors = validate_params(name, params)
    if errors:
        return _response(False, f"Invalid configuration for '{name}'", payload={"errors": errors}, status=400)

    res = manager.run(name, data, workers=workers)
    if not res.get("success"):
        return _response(False, res.get("msg", ""), status=STATUS_CODES.get(res.get("error"), 500))

    table = res.get("payload", {}).get("table")
    document = table_document(table, current_app.config.get("APP_NAME"), current_app.config.get("APP_VERSION"))
    return _response(True, res.get("msg", ""), payload=document)


@api_bp.get(rule="/presets", endpoint="presets")
def presets():
    """
    API endpoint listing the named figure presets.

    On Success:
        - Returns 200 with {"presets": {name: {subcommand, description, params}}}.
    """
    try:
        figures = load_presets().get("figures", {})
    except RuntimeError as e:
        current_app.logger.error("Could not load presets: %s", e)
        return _response(False, "Presets are unavailable", status=500)

    return _response(True, f"{len(figures)} presets", payload={"presets": figures})
