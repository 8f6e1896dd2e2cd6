"""
Initializes the API blueprint for the application.

This file creates the Flask Blueprint for the JSON endpoints (/api/...),
which run the same experiments as the CLI commands.

The endpoint module is imported at the bottom so its route decorators
register with the blueprint.
"""

from app.routes.route_schemas import blueprint_schema
from flask import Blueprint

# Create the blueprint for all API endpoints, prefixed with /api
api_bp = Blueprint("api", __name__, url_prefix="/api")

# Create the schema dictionary for the route initializer
api_bp_schema = blueprint_schema(blueprint=api_bp)

# --- Bind routes to the blueprint ---
# Imported last to avoid a circular import with 'api_bp'.
from .experiments import run_experiment, presets
