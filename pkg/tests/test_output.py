"""Tests for series files, tables, traces and plot data."""

import json
import math
from pathlib import Path

import mpmath
import pytest

from specpred.errors import InvalidSeriesError
from specpred.output import (
    SERIES_FORMAT_VERSION,
    digits_for,
    format_number,
    plot_grid,
    read_series_json,
    read_series_values,
    render_plot_data,
    render_series,
    render_series_csv,
    render_table,
    render_trace,
    sample_density,
    series_from_json,
    series_to_json,
    write_text,
)
from specpred.predict import PredictionErrorSeries
from specpred.runtime import build_density
from specpred.spectra import (
    PollaczekParams,
    companion_hat1,
    companion_hat2,
    pollaczek,
)


@pytest.fixture
def series() -> PredictionErrorSeries:
    """A short real series at 128 bits."""
    with mpmath.workprec(128):
        return PredictionErrorSeries(
            sigma2=(mpmath.mpf("1.05"), mpmath.mpf(1) / 3),
            reflection=(mpmath.mpf("0.4"), mpmath.mpf("-0.1")),
            r0=mpmath.mpf("1.25"),
            precision_bits=128,
            provenance={"covariance_method": "transform"},
            label="ma1(theta=0.5)",
        )


class TestNumbers:
    """Digit counts and formatting."""

    def test_digits_for(self) -> None:
        """Test the round-trip digit count."""
        assert digits_for(64) == 22
        assert digits_for(128) == 41

    def test_format_number_keeps_zeros(self) -> None:
        """Test fixed-width output."""
        assert format_number(0.5, 5) == "0.50000"

    def test_round_trip_precision(self, series: PredictionErrorSeries) -> None:
        """Test that printed digits recover the stored mantissa."""
        text = format_number(series.sigma2[1], digits_for(128))
        with mpmath.workprec(128):
            assert mpmath.mpf(text) == series.sigma2[1]


class TestSeriesFiles:
    """CSV and JSON series."""

    def test_csv_layout(self, series: PredictionErrorSeries) -> None:
        """Test the provenance header and columns."""
        lines = render_series_csv(series).splitlines()
        assert lines[0] == "# label: ma1(theta=0.5)"
        assert lines[1] == "# precision_bits: 128"
        assert lines[2].startswith("# r0: 1.25")
        assert lines[3] == "# covariance_method: transform"
        assert lines[4] == "n,sigma2,alpha"
        n, sigma2, _ = lines[5].split(",")
        assert n == "1"
        assert abs(mpmath.mpf(sigma2) - mpmath.mpf("1.05")) < mpmath.mpf(10) ** -30
        assert len(lines) == 7

    def test_csv_complex_reflections(self, series: PredictionErrorSeries) -> None:
        """Test the split columns for complex alphas."""
        shifted = PredictionErrorSeries(
            sigma2=series.sigma2,
            reflection=(mpmath.mpc(0.3, 0.4), mpmath.mpc(0, 0.1)),
            r0=series.r0,
            precision_bits=128,
        )
        assert "n,sigma2,alpha_re,alpha_im" in render_series(shifted, "csv")

    def test_json_values(self, series: PredictionErrorSeries) -> None:
        """Test that JSON restores the stored values exactly."""
        restored = series_from_json(json.loads(render_series(series, "json")))
        assert restored.sigma2 == series.sigma2
        assert restored.reflection == series.reflection
        assert restored.r0 == series.r0
        assert restored.provenance == {"covariance_method": "transform"}
        assert restored.label == series.label

    def test_json_fields(self, series: PredictionErrorSeries) -> None:
        """Test the top-level keys."""
        data = series_to_json(series)
        assert data["version"] == SERIES_FORMAT_VERSION
        assert data["degraded_from"] is None
        assert [row["n"] for row in data["rows"]] == [1, 2]

    def test_unknown_version(self, series: PredictionErrorSeries) -> None:
        """Test that other versions are refused."""
        data = {**series_to_json(series), "version": 99}
        with pytest.raises(InvalidSeriesError, match="Unsupported series format version 99"):
            series_from_json(data)

    def test_malformed(self) -> None:
        """Test a file without rows."""
        with pytest.raises(InvalidSeriesError, match="Malformed series file"):
            series_from_json({"version": SERIES_FORMAT_VERSION, "precision_bits": 128})


class TestReadingValues:
    """sigma_n^2 columns from files."""

    def test_json_file(self, series: PredictionErrorSeries, tmp_path: Path) -> None:
        """Test reading a JSON series."""
        path = tmp_path / "s.json"
        write_text(render_series(series, "json"), path)
        assert read_series_json(path).sigma2 == series.sigma2
        assert read_series_values(path) == list(series.sigma2)

    def test_csv_file(self, series: PredictionErrorSeries, tmp_path: Path) -> None:
        """Test reading the sigma2 column past the comment header."""
        path = tmp_path / "s.csv"
        write_text(render_series(series, "csv"), path)
        values = read_series_values(path)
        assert len(values) == 2
        assert values[0] == mpmath.mpf("1.05")

    def test_headerless_column(self, tmp_path: Path) -> None:
        """Test a bare column of numbers."""
        path = tmp_path / "plain.txt"
        path.write_text("0.5\n0.25\n0.125\n")
        assert read_series_values(path) == [0.5, 0.25, 0.125]

    def test_empty_file(self, tmp_path: Path) -> None:
        """Test a file with only comments."""
        path = tmp_path / "empty.csv"
        path.write_text("# nothing\n")
        with pytest.raises(InvalidSeriesError, match="holds no values"):
            read_series_values(path)

    def test_bad_cell(self, tmp_path: Path) -> None:
        """Test a value that is not a number."""
        path = tmp_path / "bad.csv"
        path.write_text("n,sigma2\n1,abc\n")
        with pytest.raises(InvalidSeriesError):
            read_series_values(path)


class TestTablesAndTraces:
    """Records and traces."""

    def test_csv_table(self) -> None:
        """Test the DictWriter layout."""
        text = render_table([{"a": 1, "b": 2, "extra": 0}], ["a", "b"], "csv")
        assert text == "a,b\n1,2\n"

    def test_json_table(self) -> None:
        """Test that JSON keeps only the named columns."""
        text = render_table([{"a": 1, "b": 2, "extra": 0}], ["a"], "json")
        assert json.loads(text) == [{"a": 1}]

    def test_csv_trace(self) -> None:
        """Test summary comments before the rows."""
        text = render_trace({"target": "2"}, [{"n": 1, "ratio": "2.1"}], ["n", "ratio"], "csv")
        assert text == "# target: 2\nn,ratio\n1,2.1\n"

    def test_json_trace(self) -> None:
        """Test the meta and rows object."""
        text = render_trace({"passed": "true"}, [{"n": 3, "ratio": "1"}], ["n", "ratio"], "json")
        assert json.loads(text) == {"meta": {"passed": "true"}, "rows": [{"n": 3, "ratio": "1"}]}


class TestPlotData:
    """Density samples on [-pi, pi]."""

    def test_grid_is_exact(self) -> None:
        """Test that the grid hits -pi, 0 and pi exactly."""
        grid = plot_grid(5)
        assert [str(angle) for angle in grid] == ["-pi", "-pi/2", "0", "pi/2", "pi"]

    def test_grid_too_small(self) -> None:
        """Test that one point is not a grid."""
        with pytest.raises(ValueError, match="at least 2 points"):
            plot_grid(1)

    def test_pollaczek_samples(self) -> None:
        """Test zeros at 0 and pi, and the maximum at pi/2."""
        samples = sample_density(pollaczek(PollaczekParams(1.0)), 5)
        values = [y for _, y in samples]
        assert values[0] == 0 and values[2] == 0 and values[4] == 0
        assert float(values[1]) == pytest.approx(1.0)
        assert float(values[3]) == pytest.approx(1.0)

    def test_companion_samples(self) -> None:
        """Test the companions at their maxima."""
        hat1 = [y for _, y in sample_density(companion_hat1(1.0), 3)]
        hat2 = [y for _, y in sample_density(companion_hat2(1.0), 3)]
        assert hat1[1] == 0
        assert float(hat1[0]) == pytest.approx(math.exp(-1))
        assert float(hat2[1]) == pytest.approx(math.exp(-1))
        assert hat2[0] == 0

    def test_render(self) -> None:
        """Test the header and the inf marker at poles."""
        f = build_density("trig_pow([1, 1], alpha=-0.5)")
        text = render_plot_data(f, sample_density(f, 3))
        lines = text.splitlines()
        assert lines[0] == f"# {f.label}"
        assert lines[1] == "# lambda f(lambda)"
        assert lines[2].endswith(" inf")
        assert lines[3].startswith("0 ")


class TestWriteText:
    """Atomic writes."""

    def test_creates_parents(self, tmp_path: Path) -> None:
        """Test writing into a new directory without leftovers."""
        target = tmp_path / "runs" / "out.csv"
        write_text("n,sigma2\n", target)
        assert target.read_text() == "n,sigma2\n"
        assert [p.name for p in target.parent.iterdir()] == ["out.csv"]

    def test_replaces_existing(self, tmp_path: Path) -> None:
        """Test overwriting a previous result."""
        target = tmp_path / "out.csv"
        target.write_text("old\n")
        write_text("new\n", target)
        assert target.read_text() == "new\n"

    def test_stdout(self, capsys: pytest.CaptureFixture[str]) -> None:
        """Test that no path means stdout."""
        write_text("hello\n", None)
        assert capsys.readouterr().out == "hello\n"
