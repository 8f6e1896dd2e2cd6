"""
Tests for CSV/JSON rendering and metadata parsing of result tables.
"""

import json

import numpy as np
import pytest

from app.domain.models import JumpKind, ResultTable
from app.helper.functions.output_writer import (
    canonical_json,
    format_value,
    parse_metadata,
    read_metadata,
    render_csv,
    render_json,
    render_table,
    table_document,
    write_table,
)
from table_helpers import optional_float, parse_table


@pytest.fixture()
def table():
    return ResultTable(
        name="decay",
        columns=["n", "P_free_exact", "P_free_approx"],
        rows=[(0, 1.0, 1.0), (1, np.float64(0.1) + 0.2, None)],
        meta={"params": {"delta_phi": 0.0698, "p": 0.8, "gamma": (0.7, 0.0)}, "seed": 42},
    )


class TestFormatValue:

    @pytest.mark.parametrize("value, expected", [
        (None, ""),
        (True, "true"),
        (False, "false"),
        (7, "7"),
        (0.1, "0.10000000000000001"),
        (np.float64(0.5), "0.5"),
        (np.int64(3), "3"),
        (float("nan"), "nan"),
        ("small_jumps", "small_jumps"),
    ])
    def test_cells(self, value, expected):
        assert format_value(value) == expected

    def test_enums_and_tuples_are_plain_json(self):
        assert canonical_json({"b": (1, 2), "a": JumpKind.PERSISTENCE}) == '{"a":"persistence","b":[1,2]}'


class TestCsv:

    def test_metadata_header(self, table):
        lines = render_csv(table, "zenolab", "1.0.0").splitlines()
        assert lines[:5] == [
            "# app=zenolab",
            "# version=1.0.0",
            "# subcommand=decay",
            '# params={"delta_phi":0.0698,"gamma":[0.7,0.0],"p":0.8}',
            "# seed=42",
        ]
        assert lines[5] == "n,P_free_exact,P_free_approx"
        assert lines[7] == "1,0.30000000000000004,"

    def test_deterministic_runs_have_an_empty_seed(self, table):
        table.meta["seed"] = None
        assert "# seed=\n" in render_csv(table, "zenolab", "1.0.0")

    def test_parse_back(self, table):
        text = render_csv(table, "zenolab", "1.0.0")
        meta = parse_metadata(text)
        assert meta["subcommand"] == "decay"
        assert meta["params"] == {"delta_phi": 0.0698, "gamma": [0.7, 0.0], "p": 0.8}
        assert meta["seed"] == 42

        header, rows = parse_table(text)
        assert header == table.columns
        assert [optional_float(cell) for cell in rows[1]] == [1.0, 0.30000000000000004, None]

    def test_notes_line(self, table):
        table.meta["f_theta_zone_integral"] = 0.5
        text = render_csv(table, "zenolab", "1.0.0")
        assert text.splitlines()[5] == '# notes={"f_theta_zone_integral":0.5}'
        assert parse_metadata(text)["notes"] == {"f_theta_zone_integral": 0.5}
        assert table_document(table, "zenolab", "1.0.0")["metadata"]["notes"] == {"f_theta_zone_integral": 0.5}

    def test_no_notes_line_without_notes(self, table):
        assert "# notes=" not in render_csv(table, "zenolab", "1.0.0")
        assert "notes" not in parse_metadata(render_csv(table, "zenolab", "1.0.0"))

    def test_missing_header(self):
        with pytest.raises(RuntimeError):
            parse_metadata("n,p\n0,1\n")


class TestJson:

    def test_document(self, table):
        document = json.loads(render_json(table, "zenolab", "1.0.0"))
        assert document == table_document(table, "zenolab", "1.0.0")
        assert document["metadata"]["seed"] == 42
        assert document["rows"][1] == [1, 0.30000000000000004, None]

    def test_parse_back(self, table):
        assert parse_metadata(render_table(table, "json", "zenolab", "1.0.0"))["subcommand"] == "decay"

    def test_unknown_format(self, table):
        with pytest.raises(ValueError):
            render_table(table, "xml", "zenolab", "1.0.0")


class TestFiles:

    def test_write_creates_parents(self, table, tmp_path):
        path = write_table(table, tmp_path / "out" / "decay.csv", "csv", "zenolab", "1.0.0")
        assert path.read_text(encoding="utf-8") == render_csv(table, "zenolab", "1.0.0")
        assert read_metadata(path)["subcommand"] == "decay"

    def test_missing_file(self, tmp_path):
        with pytest.raises(RuntimeError):
            read_metadata(tmp_path / "nope.csv")
