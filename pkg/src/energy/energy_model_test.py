"""Tests for the energy model."""
import numpy as np
import pytest

from src.domain.errors import DomainError, InfeasibleError
from src.domain.models import ChannelRealization, HarvesterModel, RisPowerModel

from .energy_model import (
    dc_power_for_cells,
    harvested_rf_power,
    rectifier_dc_power,
    required_rf_input,
    ris_consumption,
)

REFERENCE_HARVESTER = HarvesterModel(a=120.0, b=1e-3, p_max=20e-3, eta_rf=0.5)
REFERENCE_POWER = RisPowerModel(p_static=2e-6, p_dynamic=10e-3, alpha=0.8, p_r=1e-3)


def _random_channels(m_s: int, seed: int) -> ChannelRealization:
    rng = np.random.default_rng(seed)
    h_t = rng.standard_normal(m_s) + 1j * rng.standard_normal(m_s)
    h_r = rng.standard_normal(m_s) + 1j * rng.standard_normal(m_s)
    return ChannelRealization.from_complex(h_t * 1e-3, h_r * 1e-3)


def _equal_gain_channels(m_s: int, beta: float) -> ChannelRealization:
    amp = np.sqrt(beta)
    return ChannelRealization(np.full(m_s, amp), np.zeros(m_s), np.full(m_s, 1.0), np.zeros(m_s))


class TestHarvestedRfPower:
    """Tests for harvested_rf_power()."""

    def test_empty_set_harvests_nothing(self) -> None:
        """An empty harvesting set gives zero."""
        assert harvested_rf_power(_random_channels(4, 0), [], 1.0, REFERENCE_HARVESTER) == 0.0

    def test_equal_gain_is_linear_in_count(self) -> None:
        """With equal gains the harvest is eta * P_t * M_h * beta."""
        # Arrange
        channels = _equal_gain_channels(10, 7.1e-5)
        beta = channels.tx_power_gains[0]

        # Act
        harvested = harvested_rf_power(channels, range(4), 2.0, REFERENCE_HARVESTER)

        # Assert
        assert harvested == pytest.approx(0.5 * 2.0 * 4 * beta, rel=1e-15)

    def test_complement_sum_oracle(self) -> None:
        """Harvest over {2, 5} equals total minus the complement."""
        # Arrange
        channels = _random_channels(6, 42)

        # Act
        subset = harvested_rf_power(channels, [2, 5], 1.0, REFERENCE_HARVESTER)
        total = harvested_rf_power(channels, range(6), 1.0, REFERENCE_HARVESTER)
        rest = harvested_rf_power(channels, [0, 1, 3, 4], 1.0, REFERENCE_HARVESTER)

        # Assert
        assert subset == pytest.approx(total - rest, rel=1e-12)
        assert subset == pytest.approx(0.5 * channels.tx_power_gains[[2, 5]].sum(), rel=1e-15)

    def test_order_does_not_change_bits(self) -> None:
        """Index order is irrelevant down to the last bit."""
        channels = _random_channels(8, 3)
        assert harvested_rf_power(channels, [7, 1, 4], 1.0, REFERENCE_HARVESTER) == harvested_rf_power(
            channels, [1, 4, 7], 1.0, REFERENCE_HARVESTER
        )

    def test_rejects_out_of_range_index(self) -> None:
        """Indices must address existing cells."""
        with pytest.raises(DomainError, match="out of range"):
            harvested_rf_power(_random_channels(3, 0), [3], 1.0, REFERENCE_HARVESTER)


class TestRectifier:
    """Tests for rectifier_dc_power() and required_rf_input()."""

    def test_zero_input_gives_exact_zero(self) -> None:
        """The normalized sigmoid passes through the origin."""
        assert rectifier_dc_power(0.0, REFERENCE_HARVESTER) == 0.0

    def test_saturates_at_p_max(self) -> None:
        """Far above the turn-on point the output equals P_max."""
        # Arrange
        p_harv = REFERENCE_HARVESTER.b + 30.0 / REFERENCE_HARVESTER.a

        # Act / Assert
        assert rectifier_dc_power(p_harv, REFERENCE_HARVESTER) == pytest.approx(20e-3, rel=1e-9)
        assert rectifier_dc_power(1e3, REFERENCE_HARVESTER) == pytest.approx(20e-3, rel=1e-12)

    def test_reference_point(self) -> None:
        """2 mW of RF gives about 2.26 mW of DC with the reference parameters."""
        # Arrange
        a, b, p_max, p = 120.0, 1e-3, 20e-3, 2e-3
        direct = (p_max / (1 + np.exp(-a * (p - b))) - p_max / (1 + np.exp(a * b))) / (1 - 1 / (1 + np.exp(a * b)))

        # Act
        value = rectifier_dc_power(p, REFERENCE_HARVESTER)

        # Assert
        assert value == pytest.approx(direct, rel=1e-12)
        assert value == pytest.approx(2.2616e-3, rel=1e-4)

    def test_strictly_increasing(self) -> None:
        """Output grows with input."""
        values = [rectifier_dc_power(p, REFERENCE_HARVESTER) for p in np.linspace(0, 0.1, 200)]
        assert all(later > earlier for earlier, later in zip(values, values[1:]))

    def test_rejects_negative_input(self) -> None:
        """Negative RF input is invalid."""
        with pytest.raises(DomainError):
            rectifier_dc_power(-1e-9, REFERENCE_HARVESTER)

    def test_inverse_of_zero(self) -> None:
        """Zero DC needs zero RF."""
        assert required_rf_input(0.0, REFERENCE_HARVESTER) == 0.0

    @pytest.mark.parametrize("target", [1e-9, 1e-6, 100e-6, 2.2616e-3, 10e-3, 19.9e-3])
    def test_inverse_round_trip(self, target: float) -> None:
        """rectifier(required(target)) recovers the target."""
        # Act
        rf = required_rf_input(target, REFERENCE_HARVESTER)

        # Assert
        assert rectifier_dc_power(rf, REFERENCE_HARVESTER) == pytest.approx(target, rel=1e-9)

    def test_inverse_round_trip_log_spaced_grid(self) -> None:
        """10^4 targets from 1 pW up to just below P_max all round-trip."""
        # Arrange
        targets = np.logspace(-12, np.log10(REFERENCE_HARVESTER.p_max * (1 - 1e-6)), 10_000)

        # Act
        recovered = np.array([
            rectifier_dc_power(required_rf_input(t, REFERENCE_HARVESTER), REFERENCE_HARVESTER) for t in targets
        ])

        # Assert
        np.testing.assert_allclose(recovered, targets, rtol=1e-9, atol=0)

    @pytest.mark.parametrize("p_harv", [1e-8, 1e-5, 1e-3, 2e-3, 0.02, 0.08])
    def test_forward_round_trip(self, p_harv: float) -> None:
        """required(rectifier(p)) recovers p."""
        dc = rectifier_dc_power(p_harv, REFERENCE_HARVESTER)
        assert required_rf_input(dc, REFERENCE_HARVESTER) == pytest.approx(p_harv, rel=1e-9)

    def test_inverse_near_saturation_is_finite(self) -> None:
        """Targets a hair below P_max map to a large but finite input."""
        # Act
        rf = required_rf_input(20e-3 * (1 - 1e-12), REFERENCE_HARVESTER)

        # Assert
        assert np.isfinite(rf)
        assert rf > 0.2

    def test_inverse_rejects_saturated_target(self) -> None:
        """Targets at P_max are infeasible."""
        with pytest.raises(InfeasibleError, match="saturates"):
            required_rf_input(20e-3, REFERENCE_HARVESTER)

    def test_inverse_rejects_negative_target(self) -> None:
        """Negative targets are a domain error but not an infeasibility."""
        with pytest.raises(DomainError) as excinfo:
            required_rf_input(-1.0, REFERENCE_HARVESTER)
        assert not isinstance(excinfo.value, InfeasibleError)

    def test_dc_power_for_cells_composes(self) -> None:
        """dc_power_for_cells() is rectifier(harvested)."""
        # Arrange
        channels = _random_channels(5, 8)

        # Act
        composite = dc_power_for_cells(channels, [0, 3], 100.0, REFERENCE_HARVESTER)

        # Assert
        expected = rectifier_dc_power(harvested_rf_power(channels, [0, 3], 100.0, REFERENCE_HARVESTER), REFERENCE_HARVESTER)
        assert composite == expected


class TestRisConsumption:
    """Tests for ris_consumption()."""

    def test_reference_dynamic_average(self) -> None:
        """alpha * p_r * P_dynamic is 8 uW for the reference model."""
        assert REFERENCE_POWER.p_d_avg == pytest.approx(8e-6)

    def test_reference_total_for_ten_cells(self) -> None:
        """Ten cells consume 100 uW."""
        assert ris_consumption(REFERENCE_POWER, 10) == pytest.approx(100e-6)

    def test_all_zero_model(self) -> None:
        """A zero model consumes nothing."""
        assert ris_consumption(RisPowerModel(0.0, 0.0, 1.0, 0.0), 25) == 0.0

    def test_scales_linearly(self) -> None:
        """Consumption is linear in M_s."""
        assert ris_consumption(REFERENCE_POWER, 20) == pytest.approx(2 * ris_consumption(REFERENCE_POWER, 10))

    def test_override_dynamic_average(self) -> None:
        """An explicit p_d_avg replaces the model's."""
        assert ris_consumption(REFERENCE_POWER, 10, p_d_avg=0.0) == pytest.approx(20e-6)
