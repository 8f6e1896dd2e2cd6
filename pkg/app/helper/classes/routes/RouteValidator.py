"""
Checks route schemas before the RouteInitialiser hands them to Flask.

zenolab serves one plain route (the JSON index at '/') and the experiment
API as a blueprint under its own prefix. The validator keeps track of the
rules, endpoints and blueprint names it has accepted, so a second schema
that would shadow an experiment endpoint fails at start-up instead of
silently replacing it.
"""

from typing import Iterable, Optional, Tuple

from flask import Blueprint

Check = Tuple[bool, Optional[Exception]]

OK: Check = (True, None)


class RouteValidator():
    """
    Validates the parts of a route schema and the blueprints.

    Each instance starts empty; the app factory creates a fresh one per
    application.
    """

    # The API reads JSON bodies and the index is read-only.
    _allowed_methods: frozenset = frozenset({"GET", "POST"})

    def __init__(self) -> None:
        self._rules: set[str] = set()
        self._endpoints: set[str] = set()
        self._blueprints: set[str] = set()
        self._prefixes: set[str] = set()

    def validate_rule(self, rule) -> Check:
        """
        A rule must be a string that starts with '/' and is not taken yet.

        Returns:
            Check: (True, None), or (False, TypeError | ValueError).
        """
        if not isinstance(rule, str):
            return (False, TypeError(f"URL rule must be a string, got {type(rule).__name__}"))

        if not rule.startswith("/"):
            return (False, ValueError(f"URL rule {rule!r} must start with '/'"))

        if rule in self._rules:
            return (False, ValueError(f"URL rule {rule!r} is already registered"))

        self._rules.add(rule)
        return OK

    def validate_endpoint(self, endpoint) -> Check:
        if not isinstance(endpoint, str) or not endpoint:
            return (False, ValueError(f"Endpoint name must be a non-empty string, got {endpoint!r}"))

        if endpoint in self._endpoints:
            return (False, ValueError(f"Endpoint {endpoint!r} is already registered"))

        self._endpoints.add(endpoint)
        return OK

    def validate_methods(self, methods: Iterable[str]) -> Check:
        methods = list(methods or [])
        rejected = [m for m in methods if str(m).upper() not in self._allowed_methods]
        if not methods or rejected:
            return (False, ValueError(f"Methods must be a non-empty subset of "
                                      f"{sorted(self._allowed_methods)}, got {methods!r}"))

        return OK

    def validate_blueprint(self, blueprint) -> Check:
        """
        A blueprint must have a unique name and a URL prefix of its own.

        Returns:
            Check: (False, TypeError) for anything that is not a Blueprint,
            (False, ValueError) for a reused name or prefix.
        """
        if not isinstance(blueprint, Blueprint):
            return (False, TypeError(f"Expected a Blueprint, got {type(blueprint).__name__}"))

        if blueprint.name in self._blueprints:
            return (False, ValueError(f"Blueprint {blueprint.name!r} is already registered"))

        is_valid, error = self.validate_prefix(blueprint.url_prefix)
        if not is_valid:
            return (False, error)

        self._blueprints.add(blueprint.name)
        return OK

    def validate_prefix(self, prefix) -> Check:
        # A prefix-less blueprint would compete with the index for '/'.
        if not isinstance(prefix, str) or not prefix.startswith("/") or prefix == "/":
            return (False, ValueError(f"Blueprint URL prefix must be a path below '/', got {prefix!r}"))

        if prefix in self._prefixes:
            return (False, ValueError(f"URL prefix {prefix!r} is already used by another blueprint"))

        self._prefixes.add(prefix)
        return OK

    def validate_func(self, func) -> Check:
        if not callable(func):
            return (False, TypeError(f"View function is not callable: {func!r}"))

        return OK
