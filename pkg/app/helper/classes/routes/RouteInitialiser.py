"""
Registers the application's route schemas with a Flask app.

create_app builds one RouteInitialiser per app and passes it the ROUTES
list from app/routes/__init__.py. Every schema is checked by the
RouteValidator first; the first failed check is raised and the app is
not created.
"""

from flask import Flask

from .RouteValidator import RouteValidator


class RouteInitialiser():
    """
    Turns route schemas (see app/routes/route_schemas.py) into Flask rules.
    """

    def __init__(self, app: Flask, validator: RouteValidator) -> None:
        """
        Args:
            app (Flask): Application that receives the routes.
            validator (RouteValidator): Checks each schema before registration.

        Raises:
            TypeError: If either argument is missing.
        """
        if app is None:
            raise TypeError("RouteInitialiser needs the Flask app to register routes on")

        if validator is None:
            raise TypeError("RouteInitialiser needs a RouteValidator; routes are never registered unchecked")

        self._app = app
        self._validator = validator

    @staticmethod
    def _raise_first(checks) -> None:
        for is_valid, error in checks:
            if not is_valid:
                raise error

    def _add_blueprint(self, schema: dict) -> bool:
        blueprint = schema.get("blueprint")
        self._raise_first([self._validator.validate_blueprint(blueprint)])

        self._app.register_blueprint(blueprint)
        self._app.logger.debug("Registered blueprint '%s' at %s", blueprint.name, blueprint.url_prefix)
        return True

    def _add_route(self, schema: dict) -> bool:
        """
        Checks and registers one plain route.

        Raises:
            TypeError | ValueError: The first failed check.

        Returns:
            bool: True once the rule is on the app.
        """
        rule = schema.get("rule")
        endpoint = schema.get("endpoint")
        methods = schema.get("methods") or []
        view_func = schema.get("func")

        self._raise_first([
            self._validator.validate_rule(rule),
            self._validator.validate_endpoint(endpoint),
            self._validator.validate_methods(methods),
            self._validator.validate_func(view_func),
        ])

        self._app.add_url_rule(rule, endpoint=endpoint, view_func=view_func, methods=methods)
        self._app.logger.debug("Registered route %s -> %s", rule, endpoint)
        return True

    def handle_route(self, schema: dict) -> bool:
        if schema.get("is_blueprint", False):
            return self._add_blueprint(schema)
        return self._add_route(schema)

    def register_routes(self, schemas: list) -> None:
        """
        Registers every schema in order.

        Raises:
            ValueError: If there is nothing to register.
        """
        if not schemas:
            raise ValueError("RouteInitialiser was given an empty route list")

        for schema in schemas:
            self.handle_route(schema)
