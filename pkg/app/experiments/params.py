"""
Parameter resolution for the experiment commands and API endpoints.

Parameters are merged in this order, later sources winning:
config defaults (app.config) < presets.json defaults < a named figure
preset < a JSON config file < explicit flags or request fields.
Angles may be given with a 'deg', '°' or 'rad' suffix and are stored in
radians from then on.
"""

import json
import math
import re
from functools import lru_cache
from pathlib import Path
from typing import Any, Optional

import click

__PRESETS_DATA_PATH__ = Path(__file__).with_name("presets.json")

ANGLE_KEYS = ("delta_phi", "values")

_ANGLE_PATTERN = re.compile(
    r"^\s*(?P<number>[-+]?(?:\d+\.?\d*|\.\d+)(?:[eE][-+]?\d+)?)\s*(?P<unit>deg|°|rad)\s*$"
)


class ConfigurationError(ValueError):
    """A parameter source (preset, config file, flag) could not be used."""


def parse_angle(value: Any, require_unit: bool = True) -> float:
    """
    Converts an angle to radians.

    Args:
        value (Any): A string such as "4deg", "4°" or "0.0698rad", or a
            plain number already in radians.
        require_unit (bool): Reject strings without a unit suffix.

    Raises:
        ConfigurationError: If the value cannot be read as an angle.

    Returns:
        float: The angle in radians.
    """
    if isinstance(value, (int, float)) and not isinstance(value, bool):
        return float(value)

    text = str(value)
    match = _ANGLE_PATTERN.match(text)
    if match is None:
        if not require_unit:
            try:
                return float(text)
            except ValueError:
                pass
        raise ConfigurationError(f"'{text}' is not an angle; use a unit suffix such as 4deg, 4° or 0.07rad")

    number = float(match.group("number"))
    return number if match.group("unit") == "rad" else math.radians(number)


class AngleParamType(click.ParamType):
    """click parameter type for angles with an explicit unit suffix."""
    name = "angle"

    def convert(self, value, param, ctx):
        if isinstance(value, float):
            return value
        try:
            return parse_angle(value)
        except ConfigurationError as e:
            self.fail(str(e), param, ctx)


ANGLE = AngleParamType()


def get_json_data(path: Path) -> dict:
    """
    Reads and parses a JSON file.

    Raises:
        RuntimeError: If the file is not found or contains invalid JSON.

    Returns:
        dict: The parsed JSON data.
    """
    try:
        return json.loads(Path(path).read_text(encoding="utf-8"))
    except FileNotFoundError as e:
        raise RuntimeError(f"Missing data file: {path}") from e
    except json.JSONDecodeError as e:
        raise RuntimeError(f"Invalid JSON in {path}") from e


@lru_cache(maxsize=1)
def load_presets() -> dict:
    """
    Cached loader for presets.json.

    '@lru_cache(maxsize=1)' ensures the file is read from disk only once.
    """
    return get_json_data(__PRESETS_DATA_PATH__)


def theta_grid(step: float) -> list[float]:
    """1 - theta values 0, step, ..., 1."""
    count = int(round(1.0 / step))
    return [round(k * step, 12) for k in range(count + 1)]


def config_defaults(name: str, settings: dict) -> dict:
    """Defaults that come from the Flask config rather than presets.json."""
    n_max = settings.get("DEFAULT_N_MAX", 1000)
    trajectories = settings.get("DEFAULT_TRAJECTORIES", 100000)
    seed = settings.get("DEFAULT_SEED", 0)

    defaults = {
        "rate-curve": {"one_minus_theta": theta_grid(settings.get("THETA_GRID_STEP", 0.01))},
        "spectra": {"points": settings.get("OMEGA_GRID_POINTS", 2001)},
        "decay": {"n_max": n_max, "trajectories": trajectories, "seed": seed},
        "montecarlo": {"n_max": n_max, "trajectories": trajectories, "seed": seed},
        "validate": {"threshold": settings.get("VALIDITY_THRESHOLD", 0.1)},
        "continuous-rate": {},
    }
    return dict(defaults.get(name, {}))


def load_config_file(path: Path) -> dict:
    """
    Reads a JSON config file whose keys mirror the long flag names.

    Raises:
        ConfigurationError: If the file is unreadable or not a JSON object.

    Returns:
        dict: Parameters with '-' in keys replaced by '_'.
    """
    try:
        data = get_json_data(path)
    except RuntimeError as e:
        raise ConfigurationError(str(e)) from e
    if not isinstance(data, dict):
        raise ConfigurationError(f"Config file {path} must contain a JSON object")
    return {key.replace("-", "_"): value for key, value in data.items()}


def figure_preset(name: str) -> dict:
    """Looks up a named figure preset."""
    figures = load_presets().get("figures", {})
    if name not in figures:
        raise ConfigurationError(f"Unknown preset '{name}'. Available: {', '.join(sorted(figures))}")
    return figures[name]


def _given(value: Any) -> bool:
    return value is not None and value != ()


def resolve_params(name: str, settings: dict, flags: Optional[dict] = None,
                   config_file: Optional[Path] = None, preset: Optional[str] = None) -> dict:
    """
    Merges every parameter source for one experiment.

    Args:
        name (str): Subcommand, e.g. "decay".
        settings (dict): The Flask config.
        flags (dict, optional): Explicit values; None and empty tuples mean
            "not given".
        config_file (Path, optional): JSON config file.
        preset (str, optional): Figure preset name.

    Raises:
        ConfigurationError: On an unknown preset, a preset for another
            subcommand, an unreadable config file or a bad angle.

    Returns:
        dict: The merged parameters, angles in radians.
    """
    params = config_defaults(name, settings)
    params.update(load_presets().get("defaults", {}).get(name, {}))

    if preset:
        figure = figure_preset(preset)
        if figure.get("subcommand") != name:
            raise ConfigurationError(f"Preset '{preset}' belongs to '{figure.get('subcommand')}', not '{name}'")
        params.update(figure.get("params", {}))

    if config_file is not None:
        params.update(load_config_file(config_file))

    for key, value in (flags or {}).items():
        if _given(value):
            params[key] = list(value) if isinstance(value, tuple) else value

    for key in ANGLE_KEYS:
        value = params.get(key)
        if isinstance(value, list):
            params[key] = [parse_angle(v, require_unit=False) for v in value]
        elif value is not None:
            params[key] = parse_angle(value, require_unit=False)

    return params
