"""
Schema helpers for registering routes.

'core_schema' describes a single route and 'blueprint_schema' a Blueprint;
the RouteInitialiser consumes both.
"""

from typing import Callable

from flask import Blueprint


def blueprint_schema(blueprint: Blueprint) -> dict:
    return {
        "is_blueprint": True,
        "blueprint": blueprint
    }


def core_schema(rule: str, endpoint: str, view_func: Callable, methods: list[str]) -> dict:
    """
    Describes a single, non-blueprint route.

    Args:
        rule (str): The URL rule (e.g., "/").
        endpoint (str): The endpoint name for 'url_for()' (e.g., "index").
        view_func (Callable): The view function.
        methods (list[str]): Accepted HTTP methods (e.g., ["GET"]).

    Returns:
        dict: A schema recognized by the RouteInitialiser.
    """
    return {
        "is_blueprint": False,
        "rule": rule,
        "endpoint": endpoint,
        "func": view_func,
        "methods": methods
    }
