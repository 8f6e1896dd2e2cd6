"""
Renders result tables as CSV or JSON and reads their metadata back.

CSV files start with '# key=value' lines (app, version, subcommand,
params, seed and any experiment notes) followed by a header row and the
data rows. Floats are written with 17 significant digits and missing
values as empty cells.
No timestamps are written, so repeating a run reproduces the file byte
for byte.
"""

import csv
import enum
import io
import json
import math
from pathlib import Path
from typing import Any

import numpy as np

from app.domain.models import OutputFormat, ResultTable

METADATA_PREFIX = "# "


def _plain(value: Any) -> Any:
    """Converts numpy scalars, tuples and enums into JSON-friendly values."""
    if isinstance(value, dict):
        return {str(k): _plain(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_plain(v) for v in value]
    if isinstance(value, np.ndarray):
        return [_plain(v) for v in value.tolist()]
    if isinstance(value, np.generic):
        return value.item()
    if isinstance(value, enum.Enum):
        return value.value
    return value


def canonical_json(value: Any) -> str:
    return json.dumps(_plain(value), sort_keys=True, separators=(",", ":"), allow_nan=True)


def format_value(value: Any) -> str:
    """
    Formats one cell.

    Args:
        value (Any): None, bool, int, float or str.

    Returns:
        str: '' for None, 'true'/'false' for booleans, '.17g' for floats.
    """
    value = _plain(value)
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        if math.isnan(value):
            return "nan"
        return format(value, ".17g")
    return str(value)


def build_metadata(table: ResultTable, app_name: str, version: str) -> dict:
    """
    The metadata block written in front of every table.

    Meta entries other than params and seed are collected under 'notes',
    which is left out when there are none.
    """
    meta = {
        "app": app_name,
        "version": version,
        "subcommand": table.name,
        "params": _plain(table.meta.get("params", {})),
        "seed": _plain(table.meta.get("seed")),
    }
    notes = {key: value for key, value in table.meta.items() if key not in ("params", "seed")}
    if notes:
        meta["notes"] = _plain(notes)
    return meta


def render_csv(table: ResultTable, app_name: str, version: str) -> str:
    """
    Renders a table as CSV text with its metadata header.

    Returns:
        str: UTF-8 ready text with LF line endings.
    """
    meta = build_metadata(table, app_name, version)
    buffer = io.StringIO()
    for key in ("app", "version", "subcommand"):
        buffer.write(f"{METADATA_PREFIX}{key}={meta[key]}\n")
    buffer.write(f"{METADATA_PREFIX}params={canonical_json(meta['params'])}\n")
    buffer.write(f"{METADATA_PREFIX}seed={'' if meta['seed'] is None else meta['seed']}\n")
    if "notes" in meta:
        buffer.write(f"{METADATA_PREFIX}notes={canonical_json(meta['notes'])}\n")

    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(table.columns)
    for row in table.rows:
        writer.writerow([format_value(cell) for cell in row])
    return buffer.getvalue()


def table_document(table: ResultTable, app_name: str, version: str) -> dict:
    """The JSON mirror {metadata, columns, rows} as plain Python values."""
    return {
        "metadata": build_metadata(table, app_name, version),
        "columns": list(table.columns),
        "rows": [[_plain(cell) for cell in row] for row in table.rows],
    }


def render_json(table: ResultTable, app_name: str, version: str) -> str:
    return json.dumps(table_document(table, app_name, version), indent=2, sort_keys=True) + "\n"


def render_table(table: ResultTable, fmt: str, app_name: str, version: str) -> str:
    if OutputFormat(fmt) is OutputFormat.JSON:
        return render_json(table, app_name, version)
    return render_csv(table, app_name, version)


def write_table(table: ResultTable, path: Path, fmt: str, app_name: str, version: str) -> Path:
    """
    Writes a rendered table to disk.

    Args:
        table (ResultTable): The result to write.
        path (Path): Destination file; parent directories are created.
        fmt (str): "csv" or "json".
        app_name (str): Recorded as 'app'.
        version (str): Recorded as 'version'.

    Returns:
        Path: The path written.
    """
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", encoding="utf-8", newline="\n") as handle:
        handle.write(render_table(table, fmt, app_name, version))
    return path


def parse_metadata(text: str) -> dict:
    """
    Parses the metadata of rendered CSV or JSON text.

    Raises:
        RuntimeError: If the text has no readable metadata.

    Returns:
        dict: app, version, subcommand, params, seed and, if present, notes.
    """
    stripped = text.lstrip()
    if stripped.startswith("{"):
        try:
            return json.loads(stripped)["metadata"]
        except (json.JSONDecodeError, KeyError) as e:
            raise RuntimeError("Invalid JSON result file") from e

    meta: dict[str, Any] = {}
    for line in text.splitlines():
        if not line.startswith(METADATA_PREFIX):
            break
        key, _, value = line[len(METADATA_PREFIX):].partition("=")
        meta[key] = value

    if "subcommand" not in meta:
        raise RuntimeError("Result file has no metadata header")

    try:
        meta["params"] = json.loads(meta.get("params") or "{}")
    except json.JSONDecodeError as e:
        raise RuntimeError("Invalid params line in metadata header") from e
    if "notes" in meta:
        try:
            meta["notes"] = json.loads(meta["notes"])
        except json.JSONDecodeError as e:
            raise RuntimeError("Invalid notes line in metadata header") from e
    meta["seed"] = int(meta["seed"]) if meta.get("seed") else None
    return meta


def read_metadata(path: Path) -> dict:
    """
    Reads the metadata back from a result file.

    Raises:
        RuntimeError: If the file is missing or has no metadata.
    """
    try:
        return parse_metadata(Path(path).read_text(encoding="utf-8"))
    except FileNotFoundError as e:
        raise RuntimeError(f"Missing result file: {path}") from e
