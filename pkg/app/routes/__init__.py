"""
Central registry for all application routes and blueprints.

This file aggregates the route and blueprint schemas into a single
'ROUTES' list, which the application factory (in app/__init__.py) hands
to the RouteInitialiser.
"""

from .index import index_route_schema
from .api import api_bp_schema

# Every route and blueprint registered with the application.
ROUTES = [
    index_route_schema,
    api_bp_schema,
]
