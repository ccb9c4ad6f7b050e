"""Tests for the specpred command line."""

import json
from pathlib import Path

import pytest
from click.testing import CliRunner

from specpred.cli import EXIT_INAPPLICABLE, EXIT_INPUT, main


@pytest.fixture
def runner() -> CliRunner:
    """Create a CLI runner."""
    return CliRunner()


@pytest.fixture
def harmonic_file(tmp_path: Path) -> Path:
    """A series file holding sigma_n^2 = 1/n for n = 1..60."""
    path = tmp_path / "harmonic.csv"
    rows = "".join(f"{n},{1 / n!r}\n" for n in range(1, 61))
    path.write_text("# label: harmonic\nn,sigma2\n" + rows)
    return path


class TestParse:
    """specpred parse."""

    def test_shows_ast(self, runner: CliRunner) -> None:
        """Test the AST and singularity panels."""
        result = runner.invoke(main, ["parse", "pollaczek(a=1)"])
        assert result.exit_code == 0
        assert "Call: pollaczek" in result.output
        assert "pollaczek(a=1)" in result.output

    def test_syntax_error(self, runner: CliRunner) -> None:
        """Test that a parse error exits with 1."""
        result = runner.invoke(main, ["parse", "pollaczek(a="])
        assert result.exit_code == EXIT_INPUT
        assert "E002" in result.output

    def test_version(self, runner: CliRunner) -> None:
        """Test --version."""
        result = runner.invoke(main, ["--version"])
        assert result.exit_code == 0
        assert "specpred" in result.output


class TestGeometricMean:
    """specpred gm."""

    def test_constant(self, runner: CliRunner) -> None:
        """Test G(2) = 2 with a nondeterministic verdict."""
        result = runner.invoke(main, ["gm", "const(2)"])
        assert result.exit_code == 0
        assert "geometric_mean: 2.0" in result.output
        assert "verdict: nondeterministic" in result.output

    def test_essential_zero(self, runner: CliRunner) -> None:
        """Test that f_a is deterministic."""
        result = runner.invoke(main, ["gm", "pollaczek(a=1)", "--format", "json"])
        assert result.exit_code == 0
        (facts,) = json.loads(result.stdout)
        assert facts["divergent"] == "true"
        assert facts["verdict"] == "deterministic"

    def test_unknown_constructor(self, runner: CliRunner) -> None:
        """Test the rendered expression error."""
        result = runner.invoke(main, ["gm", "polaczek(a=1)"])
        assert result.exit_code == EXIT_INPUT
        assert "Error[E102]" in result.output
        assert "Did you mean 'pollaczek'?" in result.output


class TestPredict:
    """specpred predict."""

    def test_csv_to_stdout(self, runner: CliRunner) -> None:
        """Test the series on stdout."""
        result = runner.invoke(main, ["predict", "ma1(theta=0.5)", "--n", "8"])
        assert result.exit_code == 0
        lines = result.stdout.splitlines()
        assert "# label: ma1(theta=0.5)" in lines
        assert "n,sigma2,alpha" in lines
        assert lines[-1].startswith("8,1.0")

    def test_json_file(self, runner: CliRunner, tmp_path: Path) -> None:
        """Test writing a JSON series file."""
        target = tmp_path / "ma1.json"
        result = runner.invoke(
            main,
            ["predict", "ma1(theta=0.5)", "--n", "4", "--format", "json", "--out", str(target)],
        )
        assert result.exit_code == 0
        data = json.loads(target.read_text())
        assert data["precision_bits"] == 128
        assert len(data["rows"]) == 4

    def test_normalize(self, runner: CliRunner) -> None:
        """Test the --normalize flag in the provenance."""
        result = runner.invoke(main, ["predict", "white(2)", "--n", "2", "--normalize"])
        assert result.exit_code == 0
        assert "# normalized: true" in result.output

    def test_invalid_precision(self, runner: CliRunner) -> None:
        """Test that off-ladder precisions exit with 1."""
        result = runner.invoke(main, ["predict", "white()", "--precision", "100"])
        assert result.exit_code == EXIT_INPUT
        assert "precision must be one of" in result.output

    def test_config_file(self, runner: CliRunner, tmp_path: Path) -> None:
        """Test that the config file sets N and flags override it."""
        config = tmp_path / "run.conf"
        config.write_text("n = 3\nformat = json\n")
        result = runner.invoke(
            main, ["predict", "white()", "--config", str(config), "--format", "csv"]
        )
        assert result.exit_code == 0
        assert result.stdout.splitlines()[-1].startswith("3,")

    def test_bad_config_key(self, runner: CliRunner, tmp_path: Path) -> None:
        """Test that unknown config keys exit with 1."""
        config = tmp_path / "run.conf"
        config.write_text("order = 3\n")
        result = runner.invoke(main, ["predict", "white()", "--config", str(config)])
        assert result.exit_code == EXIT_INPUT
        assert "unknown key 'order'" in result.output


class TestRatio:
    """specpred ratio."""

    def test_constant_factor(self, runner: CliRunner) -> None:
        """Test the trace for g = 3."""
        result = runner.invoke(main, ["ratio", "ma1(0.5)", "const(3)", "--n", "8"])
        assert result.exit_code == 0
        assert "# target: 3" in result.output
        assert "# membership_basis: positive everywhere" in result.output
        assert "n,ratio" in result.output

    def test_vanishing_factor(self, runner: CliRunner) -> None:
        """Test that G(g) = 0 is inapplicable."""
        result = runner.invoke(main, ["ratio", "white()", "pollaczek(a=1)", "--n", "8"])
        assert result.exit_code == EXIT_INAPPLICABLE
        assert "cannot be a ratio factor" in result.output

    def test_common_zero_mismatch(self, runner: CliRunner) -> None:
        """Test that --common-zero needs equal zero sets."""
        result = runner.invoke(
            main, ["ratio", "pollaczek(a=1)", "hat1(a=1)", "--common-zero", "--n", "8"]
        )
        assert result.exit_code == EXIT_INAPPLICABLE
        assert "different zero sets" in result.output


class TestSeparation:
    """specpred separation."""

    def test_identical_densities(self, runner: CliRunner) -> None:
        """Test the trace of a density against itself."""
        result = runner.invoke(
            main, ["separation", "white()", "white()", "--n", "16", "--format", "json"]
        )
        assert result.exit_code == 0
        body = json.loads(result.stdout)
        assert body["meta"]["decreasing"] == "true"
        assert all(float(row["ratio"]) == pytest.approx(1.0) for row in body["rows"])


class TestTable:
    """specpred table1."""

    def test_single_row(self, runner: CliRunner) -> None:
        """Test the a = 1 row at three decimals."""
        result = runner.invoke(main, ["table1", "1.0"])
        assert result.exit_code == 0
        for cell in ("0.159", "1.598", "0.254"):
            assert cell in result.output

    def test_records_file(self, runner: CliRunner, tmp_path: Path) -> None:
        """Test the JSON records written next to the table."""
        target = tmp_path / "table.json"
        result = runner.invoke(main, ["table1", "2.0", "--out", str(target)])
        assert result.exit_code == 0
        (record,) = json.loads(target.read_text())
        assert record["a"] == 2.0
        assert float(record["rosenblatt"]) == pytest.approx(0.25)
        assert float(record["c"]) == pytest.approx(0.25 * float(record["c_hat"]), rel=1e-12)


class TestPlotData:
    """specpred plotdata."""

    def test_single_density_to_stdout(self, runner: CliRunner) -> None:
        """Test one density on stdout."""
        result = runner.invoke(main, ["plotdata", "white()", "--grid", "3"])
        assert result.exit_code == 0
        lines = result.stdout.splitlines()
        assert lines[:2] == ["# white(1)", "# lambda f(lambda)"]
        assert len(lines) == 5

    def test_preset_files(self, runner: CliRunner, tmp_path: Path) -> None:
        """Test the fig1 preset writes one file per density."""
        result = runner.invoke(
            main, ["plotdata", "--preset", "fig1", "--a", "1", "--grid", "9", "--out", str(tmp_path)]
        )
        assert result.exit_code == 0
        assert sorted(p.name for p in tmp_path.iterdir()) == ["fig1_hat.dat", "fig1_pollaczek.dat"]
        lines = (tmp_path / "fig1_pollaczek.dat").read_text().splitlines()
        assert len(lines) == 11

    def test_nothing_to_plot(self, runner: CliRunner) -> None:
        """Test that an empty request exits with 1."""
        result = runner.invoke(main, ["plotdata"])
        assert result.exit_code == EXIT_INPUT


class TestSeriesDiagnostics:
    """specpred weakvar and fit."""

    def test_weakvar_from_file(self, runner: CliRunner, harmonic_file: Path) -> None:
        """Test that 1/n passes weak variation."""
        result = runner.invoke(main, ["weakvar", str(harmonic_file), "--window", "10"])
        assert result.exit_code == 0
        assert "# passed: true" in result.output
        assert "# window: 10" in result.output

    def test_weakvar_tolerance(self, runner: CliRunner, harmonic_file: Path) -> None:
        """Test that a tight --tol fails the same series."""
        result = runner.invoke(
            main, ["weakvar", str(harmonic_file), "--window", "10", "--tol", "0.001"]
        )
        assert result.exit_code == 0
        assert "# passed: false" in result.output

    def test_weakvar_short_series(self, runner: CliRunner, harmonic_file: Path) -> None:
        """Test that a window of 40 is too long for 60 values."""
        result = runner.invoke(main, ["weakvar", str(harmonic_file), "--window", "40"])
        assert result.exit_code == EXIT_INPUT
        assert "shorter than twice the window" in result.output

    def test_fit_from_file(self, runner: CliRunner, harmonic_file: Path) -> None:
        """Test the fitted exponent of 1/n."""
        result = runner.invoke(main, ["fit", str(harmonic_file), "--format", "json"])
        assert result.exit_code == 0
        (facts,) = json.loads(result.stdout)
        assert float(facts["exponent"]) == pytest.approx(1.0)
        assert facts["window"] == "15:60"
        assert facts["accepted"] == "true"

    def test_fit_from_expression(self, runner: CliRunner) -> None:
        """Test fitting a series computed on the fly."""
        result = runner.invoke(main, ["fit", "white()", "--n", "8"])
        assert result.exit_code == 0
        assert "degenerate" in result.output
