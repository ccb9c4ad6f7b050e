"""Tests for the Levinson recursion, the determinant oracle and the pipeline."""

import mpmath
import pytest

from specpred.errors import IllConditionedError, InvalidParameterError, PSDViolationError
from specpred.integrate import CovarianceSequence, covariance_sequence
from specpred.predict import (
    PredictionConfig,
    determinant_oracle,
    levinson,
    log_determinant,
    prediction_errors,
    predictor_polynomial,
)
from specpred.spectra import PollaczekParams, ar1, ma1, pollaczek, white_noise

TIGHT = mpmath.mpf(10) ** -25


@pytest.fixture
def ma1_covariances() -> CovarianceSequence:
    """Exact covariances of MA(1) with theta = 1/2 up to lag 120."""
    return CovarianceSequence.from_values([1.25, 0.5] + [0.0] * 119, precision_bits=256)


def closed_form_ma1(n: int) -> mpmath.mpf:
    """sigma_n^2 = (1 - theta^{2(n+2)}) / (1 - theta^{2(n+1)}) for theta = 1/2."""
    q = mpmath.mpf("0.25")
    return (1 - q ** (n + 2)) / (1 - q ** (n + 1))


class TestLevinson:
    """Durbin's recursion on covariance sequences."""

    def test_first_order(self, ma1_covariances: CovarianceSequence) -> None:
        """sigma_1^2 = r0 - r1^2/r0 = 1.05."""
        series = levinson(ma1_covariances, 4)
        with mpmath.workprec(256):
            assert abs(series.at(1) - mpmath.mpf("1.05")) < TIGHT
        assert series.at(0) == ma1_covariances.r0

    def test_closed_form(self, ma1_covariances: CovarianceSequence) -> None:
        """The errors follow the closed form for MA(1) and tend to the innovation variance."""
        series = levinson(ma1_covariances, 100)
        with mpmath.workprec(256):
            for n in (1, 2, 5, 20, 100):
                assert abs(series.at(n) - closed_form_ma1(n)) < TIGHT
            assert abs(series.at(100) - 1) < mpmath.mpf(10) ** -10

    def test_errors_never_increase(self, ma1_covariances: CovarianceSequence) -> None:
        """sigma_n^2 is nonincreasing in n."""
        values = levinson(ma1_covariances, 30).sigma2
        assert all(b <= a for a, b in zip(values, values[1:]))

    def test_product_form(self, ma1_covariances: CovarianceSequence) -> None:
        """sigma_n^2 = r0 prod (1 - |alpha_k|^2)."""
        series = levinson(ma1_covariances, 12)
        assert all(abs(alpha) < 1 for alpha in series.reflection)
        assert abs(series.product_form(12) - series.at(12)) < TIGHT

    def test_order_out_of_range(self, ma1_covariances: CovarianceSequence) -> None:
        """N must not exceed the stored lags."""
        with pytest.raises(ValueError, match="Need 1 <= N"):
            levinson(ma1_covariances, 500)

    def test_breakdown_is_ill_conditioned(self) -> None:
        """A singular Toeplitz matrix breaks the recursion at every precision."""
        r = CovarianceSequence.from_values([1.0, 1.0, 1.0], precision_bits=128)
        with pytest.raises(IllConditionedError) as excinfo:
            levinson(r, 2, max_precision=256)
        assert excinfo.value.last_valid_n == 0
        assert len(excinfo.value.partial) == 0

    def test_truncated(self, ma1_covariances: CovarianceSequence) -> None:
        """A truncated series keeps its first orders."""
        series = levinson(ma1_covariances, 10)
        assert len(series.truncated(3)) == 3
        assert series.truncated(3).at(3) == series.at(3)


class TestDeterminantOracle:
    """sigma_n^2 = D_{n+1}/D_n."""

    def test_agrees_with_levinson(self, ma1_covariances: CovarianceSequence) -> None:
        """Oracle and recursion agree to the working precision."""
        series = levinson(ma1_covariances, 32)
        for n in (1, 8, 16, 32):
            oracle = determinant_oracle(ma1_covariances, n)
            assert abs(oracle / series.at(n) - 1) < TIGHT

    def test_log_determinant(self, ma1_covariances: CovarianceSequence) -> None:
        """det [[1.25, 0.5], [0.5, 1.25]] = 1.3125."""
        with mpmath.workprec(256):
            value = mpmath.exp(log_determinant(ma1_covariances, 2))
            assert abs(value - mpmath.mpf("1.3125")) < TIGHT

    def test_not_positive_definite(self) -> None:
        """r1 > r0 is not a covariance."""
        r = CovarianceSequence.from_values([1.0, 2.0])
        with pytest.raises(PSDViolationError) as excinfo:
            determinant_oracle(r, 1)
        assert excinfo.value.minor == 2

    def test_order_limit(self, ma1_covariances: CovarianceSequence) -> None:
        """The oracle only serves small orders."""
        with pytest.raises(ValueError, match="Oracle order"):
            determinant_oracle(ma1_covariances, 100)


class TestPredictorPolynomial:
    """The monic polynomial of least norm."""

    def test_norm_is_prediction_error(self, ma1_covariances: CovarianceSequence) -> None:
        """||q_n||^2 under f equals sigma_n^2."""
        series = levinson(ma1_covariances, 6)
        q = predictor_polynomial(ma1_covariances, 6)
        assert q.degree == 6
        assert abs(q.squared_norm(ma1_covariances) - series.at(6)) < TIGHT
        assert abs(q.sigma2 - series.at(6)) < TIGHT

    def test_weights_are_negated_coefficients(self, ma1_covariances: CovarianceSequence) -> None:
        """The one-step predictor uses w_k = -c_k."""
        q = predictor_polynomial(ma1_covariances, 3)
        assert q.monic[0] == 1
        assert all(w == -c for w, c in zip(q.predictor_weights, q.coefficients))

    def test_breakdown(self) -> None:
        """A singular matrix has no optimal polynomial."""
        r = CovarianceSequence.from_values([1.0, 1.0, 1.0])
        with pytest.raises(IllConditionedError, match="broke down"):
            predictor_polynomial(r, 2)


class TestPipeline:
    """prediction_errors from a density."""

    def test_config_validation(self) -> None:
        """Precisions must sit on the ladder."""
        with pytest.raises(InvalidParameterError, match="precision_bits"):
            PredictionConfig(precision_bits=100)
        with pytest.raises(InvalidParameterError, match="max_precision"):
            PredictionConfig(precision_bits=512, max_precision=256)
        assert PredictionConfig(precision_bits=128).ladder() == [128, 256, 512, 1024]

    def test_ar1_has_unit_errors(self) -> None:
        """An AR(1) process is predicted perfectly up to its innovation."""
        series = prediction_errors(ar1(0.9), 16)
        for n in range(1, 17):
            assert abs(series.at(n) - 1) < mpmath.mpf(10) ** -20
        assert series.provenance["covariance_method"] == "transform"

    def test_ma1_from_density(self) -> None:
        """The pipeline reproduces the MA(1) closed form."""
        series = prediction_errors(ma1(0.5), 40)
        with mpmath.workprec(128):
            assert abs(series.at(40) - closed_form_ma1(40)) < mpmath.mpf(10) ** -20
        assert series.degraded_from is None
        assert series.provenance["spot_checks"].startswith("n=8:")

    def test_white_noise(self) -> None:
        """White noise cannot be predicted: sigma_n^2 = r(0)."""
        series = prediction_errors(white_noise(2.0), 8)
        assert all(abs(v - 2) < mpmath.mpf(10) ** -20 for v in series.sigma2)

    def test_normalize(self) -> None:
        """Normalization rescales so that r(0) = 1."""
        series = prediction_errors(ma1(0.5), 8, PredictionConfig(normalize=True))
        assert abs(series.r0 - 1) < mpmath.mpf(10) ** -12
        assert abs(series.at(1) - mpmath.mpf("1.05") / mpmath.mpf("1.25")) < mpmath.mpf(10) ** -12
        assert series.provenance["normalized"] == "true"

    def test_pollaczek_errors_decrease_to_zero(self) -> None:
        """A deterministic density has errors falling toward 0.

        f_a is pi-periodic, so odd covariances vanish and odd orders repeat
        the preceding error.
        """
        series = prediction_errors(pollaczek(PollaczekParams(1.0)), 32)
        values = series.sigma2
        assert values[0] == series.r0 or abs(values[0] / series.r0 - 1) < TIGHT
        assert all(b <= a for a, b in zip(values, values[1:]))
        assert values[-1] < values[0] / 10

    def test_covariances_agree_with_pipeline(self) -> None:
        """Levinson on precomputed covariances gives the same series."""
        r = covariance_sequence(ma1(0.5), 8)
        assert abs(levinson(r, 8).at(8) - prediction_errors(ma1(0.5), 8).at(8)) < TIGHT
