"""
The main entry point for the Flask application.

This script:
1.  Reads the 'FLASK_CONFIG' environment variable to choose the
    configuration (e.g., 'testing', 'production').
2.  Calls the 'create_app' factory to build the application.
3.  (If run directly as a script) Starts the development server for the
    JSON API on the port given by 'PORT' (default 8080).

The experiment commands run through the Flask CLI, which also uses this
file (see .flaskenv):
    $ flask decay --delta-phi 4deg --p 0.3 --out decay.csv

Serve the API with:
    $ python run.py
    $ gunicorn run:app
"""

import os
from app import create_app

# 1. Get the configuration key, defaulting to 'default'.
config_key = os.environ.get("FLASK_CONFIG", "default")

# 2. Create the Flask application instance
app = create_app(config_key)

if __name__ == "__main__":
    port_num = int(os.environ.get("PORT", 8080))

    # The reloader and debugger are for local use only.
    is_debug_mode = app.config.get("TESTING", False)

    app.run(debug=is_debug_mode, port=port_num)
