"""
Tests for the experiment CLI commands (flask <command>).
"""

import json

import pytest

from app.experiments.commands import EXIT_CONFIG, EXIT_NUMERICAL, EXIT_OK
from app.helper.functions.output_writer import parse_metadata
from table_helpers import optional_float, parse_table


def _cell(cell):
    try:
        return optional_float(cell)
    except ValueError:
        return cell


def _rows(output):
    header, rows = parse_table(output)
    return header, [[_cell(cell) for cell in row] for row in rows]


class TestRateCurve:

    def test_reference_rates(self, runner):
        result = runner.invoke(args=["rate-curve", "--gamma", "0.7", "--gamma=-0.9", "--one-minus-theta", "0"])
        assert result.exit_code == EXIT_OK, result.output
        header, rows = _rows(result.stdout)
        assert header == ["gamma", "one_minus_theta", "R_closed_form", "R_overlap_quadrature"]
        assert rows[0][2] == pytest.approx(0.8095238, abs=1e-7)
        assert rows[1][2] == pytest.approx(0.0075188, abs=1e-7)

    def test_divergence_exit_code(self, runner):
        result = runner.invoke(args=["rate-curve", "--gamma", "1", "--one-minus-theta", "0"])
        assert result.exit_code == EXIT_NUMERICAL

    def test_invalid_parameter_exit_code(self, runner):
        result = runner.invoke(args=["rate-curve", "--b=-1", "--one-minus-theta", "0.5"])
        assert result.exit_code == EXIT_CONFIG
        assert "b must be non-negative" in result.stderr


class TestSpectra:

    def test_grid(self, runner):
        result = runner.invoke(args=["spectra", "--gamma", "0", "--points", "5", "--format", "json"])
        assert result.exit_code == EXIT_OK, result.output
        document = json.loads(result.stdout)
        assert document["columns"] == ["gamma", "omega", "G", "F_theta0", "F_theta"]
        assert len(document["rows"]) == 5
        assert document["metadata"]["seed"] is None

    def test_frozen_noise_is_a_domain_error(self, runner):
        result = runner.invoke(args=["spectra", "--gamma", "1", "--points", "5"])
        assert result.exit_code == EXIT_CONFIG

    def test_zone_integral_in_the_header(self, runner):
        result = runner.invoke(args=["spectra", "--gamma", "0", "--theta", "0.5", "--points", "201"])
        assert result.exit_code == EXIT_OK, result.output
        notes = parse_metadata(result.stdout)["notes"]
        assert notes["f_theta_zone_integral"] == pytest.approx(1.0, abs=1e-12)


class TestDecay:

    def test_columns_and_values(self, runner):
        result = runner.invoke(args=["decay", "--delta-phi", "4deg", "--p", "0.8", "--n-max", "10"])
        assert result.exit_code == EXIT_OK, result.output
        header, rows = _rows(result.stdout)
        assert header == ["n", "P_free_exact", "P_free_approx", "P_projective"]
        assert rows[10][3] == pytest.approx(0.95239, abs=1e-5)

    def test_approximation_left_empty_outside_its_domain(self, runner):
        result = runner.invoke(args=["decay", "--delta-phi", "4deg", "--p", "0", "--n-max", "3"])
        assert result.exit_code == EXIT_OK, result.output
        _, rows = _rows(result.stdout)
        assert all(row[2] is None for row in rows)

    def test_with_montecarlo(self, runner):
        result = runner.invoke(args=["decay", "--n-max", "20", "--montecarlo", "--trajectories", "200", "--seed", "3"])
        assert result.exit_code == EXIT_OK, result.output
        meta = parse_metadata(result.stdout)
        assert meta["seed"] == 3
        assert meta["params"]["trajectories"] == 200
        header, _ = _rows(result.stdout)
        assert header[-2:] == ["P_montecarlo", "stderr"]

    def test_angle_needs_a_unit(self, runner):
        result = runner.invoke(args=["decay", "--delta-phi", "0.07"])
        assert result.exit_code == 2
        assert "unit suffix" in result.output

    def test_radians(self, runner):
        result = runner.invoke(args=["decay", "--delta-phi", "0.07rad", "--n-max", "1"])
        assert result.exit_code == EXIT_OK, result.output
        assert parse_metadata(result.stdout)["params"]["delta_phi"] == 0.07


class TestMonteCarlo:

    ARGS = ["montecarlo", "--model", "persistence", "--theta", "1", "--n-max", "20",
            "--trajectories", "300", "--seed", "11"]

    def test_deterministic_output(self, runner):
        first = runner.invoke(args=self.ARGS)
        second = runner.invoke(args=self.ARGS)
        assert first.exit_code == EXIT_OK, first.output
        assert first.stdout == second.stdout

    def test_reference_column(self, runner):
        result = runner.invoke(args=self.ARGS)
        header, rows = _rows(result.stdout)
        assert header == ["n", "p_h_mc", "stderr", "p_h_reference"]
        assert rows[0][1] == rows[0][3] == 1.0

    def test_no_reference_with_partial_absorption(self, runner):
        result = runner.invoke(args=["montecarlo", "--theta", "0.5", "--n-max", "5", "--trajectories", "50", "--survival"])
        assert result.exit_code == EXIT_OK, result.output
        header, rows = _rows(result.stdout)
        assert header[-2:] == ["survival", "survival_stderr"]
        assert all(row[3] is None for row in rows)

    def test_markov_from_config_file(self, runner, tmp_path):
        config = tmp_path / "markov.json"
        config.write_text(json.dumps({
            "model": "markov", "n-max": 5, "trajectories": 100,
            "values": ["2deg", "-2deg"], "p0": [0.5, 0.5], "transition": [[0.9, 0.1], [0.1, 0.9]],
        }), encoding="utf-8")
        result = runner.invoke(args=["montecarlo", "--config", str(config)])
        assert result.exit_code == EXIT_OK, result.output
        assert parse_metadata(result.stdout)["params"]["model"] == "markov"

    def test_markov_without_chain(self, runner):
        result = runner.invoke(args=["montecarlo", "--model", "markov", "--n-max", "5"])
        assert result.exit_code == EXIT_CONFIG

    def test_parallel_matches_serial(self, runner):
        serial = runner.invoke(args=self.ARGS + ["--trajectories", "2100", "--workers", "1"])
        parallel = runner.invoke(args=self.ARGS + ["--trajectories", "2100", "--workers", "2"])
        assert serial.exit_code == EXIT_OK, serial.output
        assert serial.stdout == parallel.stdout


class TestValidate:

    def test_report(self, runner):
        result = runner.invoke(args=["validate"])
        assert result.exit_code == EXIT_OK, result.output
        header, rows = _rows(result.stdout)
        assert header == ["condition", "lhs", "rhs", "ratio", "threshold", "satisfied"]
        by_name = {row[0]: row for row in parse_table(result.stdout)[1]}
        assert float(by_name["small_jumps"][3]) == pytest.approx(0.0900901, abs=1e-6)
        assert by_name["small_jumps"][5] == "true"
        assert by_name["cumulant_truncation"][5] == "false"


class TestContinuousRate:

    def test_rates(self, runner):
        result = runner.invoke(args=["continuous-rate", "--gamma0", "0", "--gamma0", "2"])
        assert result.exit_code == EXIT_OK, result.output
        _, rows = _rows(result.stdout)
        assert rows[0][1] == pytest.approx(2.0)
        assert rows[0][2] is None
        assert rows[1][1] == pytest.approx(1.0)
        assert rows[1][2] == pytest.approx(1.0, rel=1e-4)


class TestPresetsAndConfig:

    def test_list(self, runner):
        result = runner.invoke(args=["presets"])
        assert result.exit_code == EXIT_OK
        assert "decay-zeno (decay)" in result.output

    def test_preset(self, runner):
        result = runner.invoke(args=["decay", "--preset", "decay-anti-zeno", "--n-max", "2"])
        assert result.exit_code == EXIT_OK, result.output
        assert parse_metadata(result.stdout)["params"]["p"] == 0.3

    def test_flags_override_config_file(self, runner, tmp_path):
        config = tmp_path / "decay.json"
        config.write_text(json.dumps({"p": 0.3, "n-max": 2}), encoding="utf-8")
        result = runner.invoke(args=["decay", "--config", str(config), "--p", "0.6"])
        assert result.exit_code == EXIT_OK, result.output
        params = parse_metadata(result.stdout)["params"]
        assert params["p"] == 0.6
        assert params["n_max"] == 2

    def test_unknown_preset(self, runner):
        result = runner.invoke(args=["decay", "--preset", "nope"])
        assert result.exit_code == EXIT_CONFIG

    def test_preset_of_another_experiment(self, runner):
        result = runner.invoke(args=["decay", "--preset", "spectral-overlap"])
        assert result.exit_code == EXIT_CONFIG

    def test_unreadable_config_file(self, runner, tmp_path):
        config = tmp_path / "broken.json"
        config.write_text("{", encoding="utf-8")
        result = runner.invoke(args=["decay", "--config", str(config)])
        assert result.exit_code == EXIT_CONFIG


class TestOutputAndRerun:

    def test_write_file(self, runner, tmp_path):
        out = tmp_path / "decay.csv"
        result = runner.invoke(args=["decay", "--n-max", "4", "--out", str(out)])
        assert result.exit_code == EXIT_OK, result.output
        assert result.stdout == ""
        assert "Wrote 5 rows" in result.stderr
        assert out.read_text(encoding="utf-8").startswith("# app=zenolab\n")

    @pytest.mark.parametrize("fmt", ["csv", "json"])
    def test_rerun_reproduces_the_file(self, runner, tmp_path, fmt):
        first = tmp_path / f"first.{fmt}"
        second = tmp_path / f"second.{fmt}"
        args = ["montecarlo", "--n-max", "10", "--trajectories", "100", "--seed", "5", "--format", fmt]
        assert runner.invoke(args=args + ["--out", str(first)]).exit_code == EXIT_OK

        result = runner.invoke(args=["rerun", str(first), "--format", fmt, "--out", str(second)])
        assert result.exit_code == EXIT_OK, result.output
        assert first.read_bytes() == second.read_bytes()

    def test_rerun_deterministic_experiment(self, runner, tmp_path):
        first = tmp_path / "rates.csv"
        assert runner.invoke(args=["rate-curve", "--one-minus-theta", "0.5", "--out", str(first)]).exit_code == EXIT_OK
        result = runner.invoke(args=["rerun", str(first)])
        assert result.exit_code == EXIT_OK, result.output
        assert result.stdout == first.read_text(encoding="utf-8")

    def test_rerun_warns_about_other_versions(self, runner, tmp_path):
        first = tmp_path / "validate.csv"
        assert runner.invoke(args=["validate", "--out", str(first)]).exit_code == EXIT_OK
        first.write_text(first.read_text(encoding="utf-8").replace("# version=1.0.0", "# version=0.9.0"), encoding="utf-8")
        result = runner.invoke(args=["rerun", str(first)])
        assert result.exit_code == EXIT_OK
        assert "version 0.9.0" in result.stderr

    def test_rerun_missing_file(self, runner, tmp_path):
        result = runner.invoke(args=["rerun", str(tmp_path / "nope.csv")])
        assert result.exit_code == EXIT_CONFIG
