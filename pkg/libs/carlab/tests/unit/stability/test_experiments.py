import math

import numpy as np
import pytest
from pydantic import ValidationError

from carlab.discretize.grid import Grid
from carlab.errors import UnsupportedConfigurationError
from carlab.model.presets import PresetName
from carlab.stability.holder import aholder_experiment, holder_experiment
from carlab.stability.lograte import log_experiment, products_verdict, rate_products
from carlab.stability.models import (
    HolderConfig,
    LogConfig,
    PerturbationFamily,
    TwinExperiment,
)
from carlab.stability.theta import theta
from carlab.stability.twins import perturbation_profile
from tests.unit.assertions import assert_close, assert_nonincreasing


class TestConfigValidation:
    def test_eps_must_decrease(self):
        with pytest.raises(ValidationError, match="decreasing"):
            HolderConfig(eps_list=[1e-3, 1e-2])

    def test_holder_eps_must_be_positive(self):
        with pytest.raises(ValidationError):
            HolderConfig(eps_list=[1e-2, 0.0])

    def test_log_eps_may_end_at_zero(self):
        config = LogConfig(eps_list=[1e-2, 1e-3, 0.0])

        assert config.eps_list[-1] == 0.0

    def test_t0_inside_time_interval(self):
        with pytest.raises(ValidationError, match="t0"):
            HolderConfig(t0=1.0)

    def test_alpha_range(self):
        with pytest.raises(ValidationError):
            LogConfig(alpha=1.0)


class TestPerturbationProfile:
    @pytest.mark.parametrize("family", list(PerturbationFamily))
    def test_profiles_vanish_on_dirichlet_boundary(self, family):
        grid = Grid(nx=64, nt=10)
        config = TwinExperiment(perturbation=family, components=2, grid=grid)

        profile = perturbation_profile(config, grid)

        assert profile.shape == (2, grid.size)
        assert np.max(np.abs(profile[:, [0, -1]])) < 1e-12
        assert np.max(np.abs(profile)) > 0.5

    def test_high_mode(self):
        grid = Grid(nx=64, nt=10)
        config = TwinExperiment(perturbation=PerturbationFamily.HIGH_MODE, high_mode=5)

        np.testing.assert_allclose(
            perturbation_profile(config, grid)[0], np.sin(5 * grid.nodes), atol=1e-12
        )


@pytest.mark.slow
class TestHolderExperiment:
    def test_single_mode_linear_slope(self):
        config = HolderConfig(
            preset=PresetName.HEAT1D, t0=0.5, lambda_=4.0, eps_list=[1e-1, 1e-2, 1e-3, 1e-4]
        )

        result = holder_experiment(config)

        assert result.slope == pytest.approx(1.0, abs=0.02)
        assert result.slope_consistent
        assert result.theta == pytest.approx(theta(0.5, 1.0, 4.0))
        assert result.violations == 0
        assert result.passed
        assert all(record.identity_defect < 1e-3 for record in result.records)
        assert all(record.apriori_ok for record in result.records)

    def test_two_mode_slope_between_theta_and_one(self):
        config = HolderConfig(
            perturbation=PerturbationFamily.TWO_MODE,
            t0=0.5,
            lambda_=4.0,
            eps_list=[1e-1, 1e-2, 1e-3, 1e-4],
        )

        result = holder_experiment(config)

        assert result.theta <= result.slope <= 1.02
        assert result.slope_consistent

    async def test_semilinear_example_respects_calibrated_bound(self):
        config = HolderConfig(preset=PresetName.PAPER_EXAMPLE, eps_list=[1e-1, 1e-2, 1e-3, 1e-4])

        result = await aholder_experiment(config)

        assert result.violations == 0
        assert result.failures == 0
        assert all(record.holder_residual <= 0 for record in result.records)
        assert result.constant > 0

    def test_ratio_matches_single_mode_decay(self):
        config = HolderConfig(eps_list=[1e-2, 1e-3])

        result = holder_experiment(config)

        # e^{-t0} ||sin||_L2 / (e^{-T} ||sin||_H1)
        expected = math.exp(0.5) / math.sqrt(2.0)
        for record in result.records:
            assert_close(record.E_t0 / record.E_T, expected, rel=1e-3, label="E_t0 / E_T")


@pytest.mark.slow
class TestLogExperiment:
    def test_products_bounded_and_nonincreasing(self):
        result = log_experiment(LogConfig(alpha=0.5))

        assert result.bounded
        assert result.nonincreasing
        assert result.passed
        assert_nonincreasing([r.product for r in result.records], slack=0.1, label="products")

    def test_single_mode_data_norm_closed_form(self):
        result = log_experiment(LogConfig(eps_list=[1e-2, 1e-4]))

        for record in result.records:
            expected = 3 * record.epsilon * math.exp(-1.0) * math.sqrt(math.pi)
            assert_close(record.D, expected, rel=1e-3, label="D")
            assert_close(record.E_0, record.epsilon * math.sqrt(math.pi / 2), rel=1e-6, label="E_0")

    def test_zero_amplitude_record_is_excluded(self):
        result = log_experiment(LogConfig(eps_list=[1e-3, 0.0], grid=Grid(nx=64, nt=400)))

        assert result.records[-1].excluded
        assert result.records[-1].D == 0.0
        assert result.passed

    def test_semilinear_preset_rejected(self):
        with pytest.raises(UnsupportedConfigurationError):
            log_experiment(LogConfig(preset=PresetName.PAPER_EXAMPLE))

    def test_rate_products_for_other_alpha(self):
        result = log_experiment(LogConfig(eps_list=[1e-2, 1e-3], grid=Grid(nx=64, nt=400)))

        products = rate_products(result.records, 0.25)

        assert products == [
            r.E_0 * math.log(1.0 / r.D) ** 0.25 for r in result.records
        ]


class TestProductsVerdict:
    def test_slack_allows_small_increase(self):
        assert products_verdict([1.0, 1.05, 0.5]) == (True, True)

    def test_large_increase(self):
        assert products_verdict([1.0, 2.0]) == (False, False)

    def test_empty(self):
        assert products_verdict([]) == (False, False)
