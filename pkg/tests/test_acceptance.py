"""End-to-end checks on the corpus densities.

The Pollaczek pipelines run hundreds of high-precision quadratures and carry
the ``slow`` marker; ``pytest -m "not slow"`` skips them.
"""

import math
from collections.abc import Callable
from pathlib import Path

import mpmath
import pytest
from click.testing import CliRunner

from specpred.asymptotics import (
    common_zero_comparison,
    normalized_rosenblatt_trace,
    ratio_limit,
    separation_check,
    table1_row,
    weak_variation,
)
from specpred.cli import main
from specpred.integrate import covariance_sequence, geometric_mean
from specpred.predict import PredictionConfig, determinant_oracle, levinson, prediction_errors
from specpred.runtime import build_density
from specpred.spectra import (
    PollaczekParams,
    SpectralDensity,
    companion_hat,
    companion_hat1,
    companion_hat2,
    ma1,
    pollaczek,
    pollaczek_companion_ratio,
    power,
    product,
    scale,
    shift,
)


@pytest.fixture(scope="module")
def base() -> SpectralDensity:
    """The Pollaczek density with a = 1."""
    return pollaczek(PollaczekParams(1.0))


def relative(x: mpmath.mpf, y: mpmath.mpf) -> float:
    """|x/y - 1| as a double."""
    return float(abs(x / y - 1))


class TestOracleEquivalence:
    """Levinson against D_{n+1}/D_n on the corpus."""

    @pytest.mark.parametrize(
        "source",
        [
            "white()",
            "ma1(0.5)",
            "ma1(0.9)",
            "ar1(0.9)",
            pytest.param("pollaczek(a=0.5)", marks=pytest.mark.slow),
            pytest.param("pollaczek(a=1)", marks=pytest.mark.slow),
            pytest.param("pollaczek(a=2)", marks=pytest.mark.slow),
            pytest.param("pollaczek(a=1) * abs_sin(alpha=2)", marks=pytest.mark.slow),
            pytest.param("hat(a=1)", marks=pytest.mark.slow),
        ],
    )
    def test_agreement(self, source: str) -> None:
        """Test agreement to 1e-8 for n <= 30."""
        r = covariance_sequence(build_density(source), 31)
        series = levinson(r, 30)
        for n in (1, 2, 10, 30):
            assert relative(determinant_oracle(r, n), series.at(n)) < 1e-8


class TestStructuralProperties:
    """Scaling, shifts and the geometric-mean rules."""

    def test_scaling_equivariance(self) -> None:
        """Test sigma_n^2(c f) = c sigma_n^2(f)."""
        f = ma1(0.5)
        plain = prediction_errors(f, 16)
        scaled = prediction_errors(scale(f, 3.0), 16)
        assert all(relative(s, 3 * p) < 1e-10 for s, p in zip(scaled.sigma2, plain.sigma2))

    def test_shift_invariance(self) -> None:
        """Test that translating the density leaves sigma_n^2 unchanged."""
        f = ma1(0.5)
        plain = prediction_errors(f, 16)
        moved = prediction_errors(shift(f, 0.7), 16)
        assert all(relative(m, p) < 1e-15 for m, p in zip(moved.sigma2, plain.sigma2))

    @pytest.mark.slow
    def test_pollaczek_shift_invariance(self, base: SpectralDensity) -> None:
        """Test the shift rule on a density with essential zeros."""
        plain = prediction_errors(base, 32)
        moved = prediction_errors(shift(base, 0.7), 32)
        assert all(relative(m, p) < 1e-10 for m, p in zip(moved.sigma2, plain.sigma2))

    def test_geometric_mean_is_multiplicative(self) -> None:
        """Test G(fg) = G(f) G(g)."""
        f, g = ma1(0.5), build_density("abs_sin(alpha=2)")
        combined = geometric_mean(product(f, g)).value
        expected = geometric_mean(f).value * geometric_mean(g).value
        assert relative(combined, expected) < 1e-8
        assert float(expected) == pytest.approx(0.25 / (2 * math.pi), rel=1e-8)

    def test_geometric_mean_power_rule(self) -> None:
        """Test G(f^alpha) = G(f)^alpha."""
        f = ma1(0.5)
        assert relative(geometric_mean(power(f, 3.0)).value, geometric_mean(f).value ** 3) < 1e-10


class TestKolmogorovSzego:
    """sigma_n^2 -> 2 pi G(f) for nondeterministic densities."""

    def test_ma1_limit(self) -> None:
        """Test |sigma_100^2 - 1| <= 1e-10 for theta = 0.5."""
        series = prediction_errors(ma1(0.5), 100)
        assert abs(series.at(100) - 1) <= mpmath.mpf(10) ** -10
        limit = 2 * mpmath.pi * geometric_mean(ma1(0.5)).value
        assert relative(series.at(100), limit) < 1e-10


class TestPlotPresets:
    """Exact samples in the figure files."""

    def test_presets(self, tmp_path: Path) -> None:
        """Test zeros and maxima at the grid points."""
        runner = CliRunner()
        for preset in ("fig1", "fig2"):
            result = runner.invoke(
                main, ["plotdata", "--preset", preset, "--grid", "5", "--out", str(tmp_path)]
            )
            assert result.exit_code == 0

        def values(name: str) -> list[float]:
            rows = (tmp_path / name).read_text().splitlines()[2:]
            return [float(row.split()[1]) for row in rows]

        fig1 = values("fig1_pollaczek.dat")
        assert fig1[0] == fig1[2] == fig1[4] == 0.0
        assert fig1[1] == pytest.approx(1.0, abs=1e-14)
        assert fig1[3] == pytest.approx(1.0, abs=1e-14)
        hat1 = values("fig2_hat1.dat")
        hat2 = values("fig2_hat2.dat")
        assert hat1[0] == hat1[4] == pytest.approx(math.exp(-1), rel=1e-14)
        assert hat1[2] == 0.0
        assert hat2[2] == pytest.approx(math.exp(-1), rel=1e-14)
        assert hat2[0] == hat2[4] == 0.0


@pytest.mark.slow
class TestPollaczekAsymptotics:
    """Long pipelines on f_a with a = 1."""

    def test_rosenblatt_trace(self, base: SpectralDensity) -> None:
        """Test that sigma_n^2 n / K(1) is weakly varying and near 1 on [64, 512]."""
        series = prediction_errors(base, 512)
        trace = normalized_rosenblatt_trace(series, 1.0)[63:]
        assert weak_variation(trace, window=200, tol=0.05).passed
        octave = trace[-256:]
        mean = sum(octave) / len(octave)
        assert abs(float(mean) - 1) < 0.15

    @pytest.mark.parametrize(
        "factor",
        [
            "abs_sin(alpha=2)",
            "abs_poly([0, 1])",
            "trig_pow([1, 1], alpha=0.5)",
            "trig_pow([1, 1], alpha=-1)",
        ],
    )
    def test_ratio_theorem(self, base: SpectralDensity, factor: str) -> None:
        """Test that trailing ratio means approach G(g) as N doubles."""
        config = PredictionConfig(precision_bits=128, max_precision=512)
        g = build_density(factor)
        gaps = [ratio_limit(base, g, n_max, config).relative_gap for n_max in (64, 128, 256)]
        assert gaps[-1] < 0.10
        assert gaps[0] >= gaps[1] >= gaps[2]

    def test_companion_ratio_approaches_c_hat(self, base: SpectralDensity) -> None:
        """Test that sigma_n^2(hat)/sigma_n^2(f_a) closes in on C_hat(1) = G(hat/f_a)."""
        config = PredictionConfig(precision_bits=128, max_precision=512)
        c_hat = float(table1_row(1.0).c_hat)
        runs = [
            common_zero_comparison(
                base, companion_hat(1.0), n_max, config, ratio=pollaczek_companion_ratio(1.0)
            )
            for n_max in (64, 128, 256)
        ]
        assert all(run.target == pytest.approx(c_hat, rel=1e-12) for run in runs)
        gaps = [run.relative_gap for run in runs]
        assert gaps[0] > gaps[1] > gaps[2]
        assert gaps[-1] < 0.05
        assert all(run.trailing_mean < c_hat for run in runs)

    @pytest.mark.parametrize("companion", [companion_hat1, companion_hat2])
    def test_separation(self, base: SpectralDensity, companion: Callable[[float], SpectralDensity]) -> None:
        """Test that sigma_n^2(f_a) / sigma_n^2(companion) falls on [32, 256]."""
        trace = separation_check(base, companion(1.0), 256, start=32)
        assert trace.decreasing
        assert trace.ratios[-1] < trace.ratios[0] / 2

