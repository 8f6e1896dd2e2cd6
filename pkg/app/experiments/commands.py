"""
Defines the Flask CLI commands that run the experiments.

Every experiment command follows the same path:
1.  Merge the parameter sources (see app/experiments/params.py).
2.  Validate the merged parameters with the experiment's WTForms form.
3.  Run the experiment through 'current_app.experiment_manager'.
4.  Render the result table as CSV or JSON to stdout or to '--out'.

Exit codes: 0 on success, 2 for an invalid configuration or a parameter
outside the domain of the physics, 3 when a series or quadrature does not
converge or a quantity diverges, 1 for anything unexpected.

These commands are registered with the Flask app in app/__init__.py.
"""

from pathlib import Path
from typing import Optional

import click
from flask import Flask, current_app

from .forms import OutputForm, validate_params
from .params import ANGLE, ConfigurationError, load_presets, resolve_params
from app.domain.models import JumpKind, OutputFormat
from app.helper.functions.output_writer import read_metadata, render_table, write_table

EXIT_OK = 0
EXIT_UNKNOWN = 1
EXIT_CONFIG = 2
EXIT_NUMERICAL = 3

# Manager error kinds and their exit codes.
EXIT_CODES = {
    "validation": EXIT_CONFIG,
    "domain": EXIT_CONFIG,
    "divergence": EXIT_NUMERICAL,
    "convergence": EXIT_NUMERICAL,
}

STOCHASTIC_EXPERIMENTS = {"decay", "montecarlo"}


def _fail(message: str, code: int):
    click.echo(f"Error: {message}", err=True)
    click.get_current_context().exit(code)


def _report_errors(errors: dict) -> None:
    for field, messages in errors.items():
        for message in _flatten(messages):
            click.echo(f"  {field}: {message}", err=True)


def _flatten(messages) -> list:
    # FieldList errors are nested per entry.
    if isinstance(messages, dict):
        return [m for value in messages.values() for m in _flatten(value)]
    if isinstance(messages, (list, tuple)):
        return [m for value in messages for m in _flatten(value)]
    return [messages]


def _emit(table, fmt: str, out: Optional[str]) -> None:
    """Writes the table to stdout ('-' or no --out) or to a file."""
    app_name = current_app.config.get("APP_NAME")
    version = current_app.config.get("APP_VERSION")

    if out is None or out == "-":
        click.echo(render_table(table, fmt, app_name, version), nl=False)
        return

    path = write_table(table, Path(out), fmt, app_name, version)
    click.echo(f"Wrote {len(table.rows)} rows to {path}", err=True)


def execute(name: str, params: dict, fmt: str, out: Optional[str], workers: Optional[int] = None) -> None:
    """
    Validates parameters, runs one experiment and emits its table.

    Args:
        name (str): Subcommand, e.g. "decay".
        params (dict): Merged (unvalidated) parameters.
        fmt (str): "csv" or "json".
        out (str, optional): Destination path; None or '-' for stdout.
        workers (int, optional): Worker processes for ensemble runs.
    """
    output_form = OutputForm(data={"format": fmt})
    if not output_form.validate():
        _report_errors(output_form.errors)
        _fail("invalid output options", EXIT_CONFIG)

    data, errors = validate_params(name, params)
    if errors:
        click.echo(f"Invalid configuration for '{name}':", err=True)
        _report_errors(errors)
        click.get_current_context().exit(EXIT_CONFIG)

    if workers is None:
        workers = current_app.config.get("MC_WORKERS", 1)

    res = current_app.experiment_manager.run(name, data, workers=workers)
    if not res.get("success"):
        _fail(res.get("msg", "experiment failed"), EXIT_CODES.get(res.get("error"), EXIT_UNKNOWN))

    _emit(res.get("payload", {}).get("table"), fmt, out)


def experiment_options(func):
    """Adds the options every experiment command shares."""
    options = [
        click.option("--out", "out", default=None, help="Output file; '-' or omitted for stdout."),
        click.option("--format", "fmt", type=click.Choice([f.value for f in OutputFormat]),
                     default=OutputFormat.CSV.value, show_default=True, help="Output format."),
        click.option("--config", "config_file", type=click.Path(dir_okay=False, path_type=Path),
                     default=None, help="JSON file whose keys mirror the long flag names."),
        click.option("--preset", default=None, help="Named figure preset (see 'flask presets')."),
        click.option("--seed", type=click.IntRange(0, 2 ** 64 - 1), default=None,
                     help="Seed for stochastic runs."),
    ]
    for option in reversed(options):
        func = option(func)
    return func


def _run_command(name: str, flags: dict, out, fmt, config_file, preset, seed, workers=None) -> None:
    if name in STOCHASTIC_EXPERIMENTS:
        flags["seed"] = seed
    elif seed is not None:
        current_app.logger.debug("'%s' is deterministic; --seed ignored", name)

    try:
        params = resolve_params(name, current_app.config, flags=flags,
                                config_file=config_file, preset=preset)
    except ConfigurationError as e:
        _fail(str(e), EXIT_CONFIG)
    except RuntimeError as e:
        _fail(str(e), EXIT_UNKNOWN)

    execute(name, params, fmt, out, workers=workers)


def register_commands(app: Flask):
    """
    Registers the experiment commands with the Flask application.

    Args:
        app (Flask): The Flask app instance.
    """

    @app.cli.command("rate-curve")
    @click.option("--b", type=float, default=None, help="RMS jump B (radians).")
    @click.option("--tau-r", type=float, default=None, help="Round-trip time.")
    @click.option("--gamma", type=float, multiple=True, help="Correlation degree; repeatable.")
    @click.option("--one-minus-theta", type=float, multiple=True, help="Grid of 1 - theta; repeatable.")
    @experiment_options
    def rate_curve(b, tau_r, gamma, one_minus_theta, out, fmt, config_file, preset, seed):
        """Decay rate against measurement effectiveness 1 - theta."""
        flags = {"b": b, "tau_r": tau_r, "gamma": gamma, "one_minus_theta": one_minus_theta}
        _run_command("rate-curve", flags, out, fmt, config_file, preset, seed)

    @app.cli.command("spectra")
    @click.option("--b", type=float, default=None, help="RMS jump B (radians).")
    @click.option("--tau-r", type=float, default=None, help="Round-trip time.")
    @click.option("--gamma", type=float, multiple=True, help="Correlation degree; repeatable.")
    @click.option("--theta", type=float, default=None, help="Transmissivity of the F_theta column.")
    @click.option("--points", type=int, default=None, help="Uniform omega points over the zone.")
    @experiment_options
    def spectra(b, tau_r, gamma, theta, points, out, fmt, config_file, preset, seed):
        """Reservoir spectrum G and measurement broadening F over one zone."""
        flags = {"b": b, "tau_r": tau_r, "gamma": gamma, "theta": theta, "points": points}
        _run_command("spectra", flags, out, fmt, config_file, preset, seed)

    @app.cli.command("decay")
    @click.option("--delta-phi", type=ANGLE, default=None, help="Jump size, e.g. 4deg or 0.07rad.")
    @click.option("--p", type=float, default=None, help="Repeat probability of the persistence chain.")
    @click.option("--n-max", type=int, default=None, help="Last round trip.")
    @click.option("--montecarlo/--no-montecarlo", "with_montecarlo", default=None,
                  help="Add a Monte Carlo column.")
    @click.option("--trajectories", type=int, default=None, help="Monte Carlo ensemble size.")
    @click.option("--workers", type=click.IntRange(min=1), default=None, help="Worker processes.")
    @experiment_options
    def decay(delta_phi, p, n_max, with_montecarlo, trajectories, workers, out, fmt, config_file, preset, seed):
        """P_h(n) for free evolution and for projective measurements."""
        flags = {"delta_phi": delta_phi, "p": p, "n_max": n_max,
                 "with_montecarlo": with_montecarlo, "trajectories": trajectories}
        _run_command("decay", flags, out, fmt, config_file, preset, seed, workers=workers)

    @app.cli.command("montecarlo")
    @click.option("--model", type=click.Choice([kind.value for kind in JumpKind]), default=None,
                  help="Jump model; markov parameters come from --config.")
    @click.option("--delta-phi", type=ANGLE, default=None, help="Jump size, e.g. 4deg or 0.07rad.")
    @click.option("--p", type=float, default=None, help="Repeat probability (persistence).")
    @click.option("--theta", type=float, default=None, help="Amplitude transmissivity.")
    @click.option("--n-max", type=int, default=None, help="Last round trip.")
    @click.option("--trajectories", type=int, default=None, help="Ensemble size.")
    @click.option("--survival/--no-survival", default=None, help="Add the unabsorbed-fraction columns.")
    @click.option("--workers", type=click.IntRange(min=1), default=None, help="Worker processes.")
    @experiment_options
    def montecarlo(model, delta_phi, p, theta, n_max, trajectories, survival, workers,
                   out, fmt, config_file, preset, seed):
        """Ensemble estimate of P_h(n) against the exact law."""
        flags = {"model": model, "delta_phi": delta_phi, "p": p, "theta": theta, "n_max": n_max,
                 "trajectories": trajectories, "survival": survival}
        _run_command("montecarlo", flags, out, fmt, config_file, preset, seed, workers=workers)

    @app.cli.command("validate")
    @click.option("--b", type=float, default=None, help="RMS jump B (radians).")
    @click.option("--gamma", type=float, default=None, help="Correlation degree.")
    @click.option("--tau-r", type=float, default=None, help="Round-trip time.")
    @click.option("--theta", type=float, default=None, help="Amplitude transmissivity.")
    @click.option("--n", type=int, default=None, help="Round trips elapsed.")
    @click.option("--threshold", type=float, default=None, help="Ratio below which '<<' holds.")
    @experiment_options
    def validate(b, gamma, tau_r, theta, n, threshold, out, fmt, config_file, preset, seed):
        """Report the validity conditions of the rate theory."""
        flags = {"b": b, "gamma": gamma, "tau_r": tau_r, "theta": theta, "n": n, "threshold": threshold}
        _run_command("validate", flags, out, fmt, config_file, preset, seed)

    @app.cli.command("continuous-rate")
    @click.option("--k0", type=float, default=None, help="Noise strength k(0).")
    @click.option("--gamma-r", type=float, default=None, help="Noise decay rate.")
    @click.option("--gamma0", type=float, multiple=True, help="Absorption rate; repeatable.")
    @click.option("--span", type=float, default=None, help="Quadrature half-range in widths.")
    @experiment_options
    def continuous_rate(k0, gamma_r, gamma0, span, out, fmt, config_file, preset, seed):
        """Continuous-measurement rate, closed form against quadrature."""
        flags = {"k0": k0, "gamma_r": gamma_r, "gamma0": gamma0, "span": span}
        _run_command("continuous-rate", flags, out, fmt, config_file, preset, seed)

    @app.cli.command("rerun")
    @click.argument("result_file", type=click.Path(dir_okay=False, path_type=Path))
    @click.option("--out", "out", default=None, help="Output file; '-' or omitted for stdout.")
    @click.option("--format", "fmt", type=click.Choice([f.value for f in OutputFormat]),
                  default=OutputFormat.CSV.value, show_default=True)
    @click.option("--workers", type=click.IntRange(min=1), default=None, help="Worker processes.")
    def rerun(result_file, out, fmt, workers):
        """Re-run an experiment from the metadata of a result file."""
        try:
            meta = read_metadata(result_file)
        except RuntimeError as e:
            _fail(str(e), EXIT_CONFIG)

        recorded = meta.get("version")
        if recorded != current_app.config.get("APP_VERSION"):
            click.echo(f"Warning: file was written by version {recorded}", err=True)

        execute(meta["subcommand"], dict(meta.get("params") or {}), fmt, out, workers=workers)

    @app.cli.command("presets")
    def presets():
        """List the named figure presets."""
        try:
            figures = load_presets().get("figures", {})
        except RuntimeError as e:
            _fail(str(e), EXIT_UNKNOWN)

        for name in sorted(figures):
            figure = figures[name]
            click.echo(f"{name} ({figure.get('subcommand')}): {figure.get('description', '')}")
