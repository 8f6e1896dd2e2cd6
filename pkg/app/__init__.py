"""
Defines the main application factory, 'create_app'.

This file is the entry point for the Flask application. It uses the
application factory pattern to create and configure a Flask app instance:
it loads the configuration, sets the log level, attaches the experiment
manager, registers the JSON API and registers the CLI commands.
"""

from flask import Flask

from .config import config, DEFAULT
from .experiments.commands import register_commands


def create_app(config_key: str) -> Flask:
    """
    The application factory.

    Args:
        config_key (str): The key for the configuration to use
                          (e.g., "production", "testing").

    Returns:
        Flask: The configured Flask application instance.
    """
    # --- 1. Load configuration ---
    config_settings = config.get(config_key, DEFAULT)
    app = Flask(__name__)
    app.config.from_object(config_settings)

    # --- 2. Configure logging ---
    # app.logger is the single application logger; the managers get it
    # below and the physics library logs under the 'app' name as well.
    app.logger.setLevel(app.config.get("LOG_LEVEL", "INFO"))

    # --- 3. Attach the experiment manager ---
    # Imported here to avoid circular dependencies. Views and commands
    # reach it as 'current_app.experiment_manager'.
    from .helper.classes.experiments.ExperimentManager import ExperimentManager
    app.experiment_manager = ExperimentManager(app.config, app.logger)

    # --- 4. Register all routes and blueprints ---
    from .helper.classes.routes.RouteInitialiser import RouteInitialiser
    from .helper.classes.routes.RouteValidator import RouteValidator
    from .routes import ROUTES
    route_reg = RouteInitialiser(app, RouteValidator())
    route_reg.register_routes(ROUTES)

    # --- 5. Register custom CLI commands ---
    # Makes 'flask rate-curve', 'flask decay', 'flask rerun', etc. available
    register_commands(app)

    return app
