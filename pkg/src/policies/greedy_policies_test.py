"""Tests for the greedy ordering policies."""
import math

import numpy as np
import pytest

from src.channel.channel_model import draw_channels
from src.domain.errors import DomainError
from src.domain.models import (
    ChannelRealization,
    FadingParams,
    HarvesterModel,
    Placement,
    PolicyId,
    ProblemKind,
    ProblemSpec,
    RisGeometry,
)
from src.energy.energy_model import dc_power_for_cells
from src.link.link_metrics import max_snr

from .brute_force import brute_force_b
from .greedy_policies import GreedyPolicy, descending_order, solve_problem_a, solve_problem_b

HARVESTER = HarvesterModel(a=120.0, b=1e-3, p_max=20e-3, eta_rf=0.5)
SIGMA_SQ = 4.004e-11


def _channels(m_x: int = 4, m_y: int = 2, sigma_t_sq: float = 0.1, seed: int = 1) -> ChannelRealization:
    geometry = RisGeometry.half_wavelength(m_x, m_y, 28e9)
    placement = Placement.from_angles(17.0, 20.0, math.radians(45), math.radians(60), 1e4, 10 ** 2.2)
    return draw_channels(geometry, placement, FadingParams(sigma_t_sq, 0.3), seed)


def _problem_a(p_ris: float) -> ProblemSpec:
    return ProblemSpec(ProblemKind.PROBLEM_A, p_ris=p_ris, gamma_0=0.0, p_t=1.0, sigma_sq=SIGMA_SQ)


def _problem_b(gamma_0: float) -> ProblemSpec:
    return ProblemSpec(ProblemKind.PROBLEM_B, p_ris=0.0, gamma_0=gamma_0, p_t=1.0, sigma_sq=SIGMA_SQ)


class TestDescendingOrder:
    """Tests for descending_order()."""

    def test_ties_keep_ascending_index(self) -> None:
        """Equal gains are ordered by ascending cell index."""
        np.testing.assert_array_equal(descending_order(np.array([1.0, 2.0, 2.0, 1.0])), [1, 2, 0, 3])


class TestProblemAPolicies:
    """Tests for A1-A4."""

    @pytest.mark.parametrize("policy", [PolicyId.A1, PolicyId.A2, PolicyId.A3])
    def test_reflecting_prefix_stops_before_starving(self, policy: PolicyId) -> None:
        """The output is the longest feasible prefix; one more cell would starve the harvester."""
        # Arrange
        channels = _channels()
        spec = _problem_a(80e-6)

        # Act
        outcome = solve_problem_a(policy, channels, spec, HARVESTER)

        # Assert
        assert outcome.feasible
        assert outcome.p_dc >= spec.p_ris
        assert outcome.i_stop is not None and outcome.allocation.m_r == outcome.i_stop - 1
        if outcome.i_stop <= channels.m_s:
            order = descending_order({
                PolicyId.A1: channels.rx_gains,
                PolicyId.A2: channels.cascaded_gains,
                PolicyId.A3: channels.tx_gains,
            }[policy])
            assert set(outcome.allocation.a_r) == set(order[: outcome.i_stop - 1].tolist())
            assert dc_power_for_cells(channels, order[outcome.i_stop:], 1.0, HARVESTER) < spec.p_ris

    def test_a1_reflects_top_rx_cells(self) -> None:
        """A1 reflects the strongest RIS-RX cells."""
        # Arrange
        channels = _channels(seed=3)

        # Act
        outcome = solve_problem_a(PolicyId.A1, channels, _problem_a(80e-6), HARVESTER)

        # Assert
        weakest_reflecting = min(channels.rx_gains[list(outcome.allocation.a_r)])
        assert all(channels.rx_gains[i] <= weakest_reflecting for i in outcome.allocation.a_h)

    def test_zero_constraint_reflects_everything(self) -> None:
        """With P_RIS = 0 the loop never stops and A1 harvests nothing."""
        # Act
        outcome = solve_problem_a(PolicyId.A1, _channels(), _problem_a(0.0), HARVESTER)

        # Assert
        assert outcome.allocation.a_h == ()
        assert outcome.i_stop == 9
        assert outcome.feasible

    def test_starved_surface_is_infeasible(self) -> None:
        """If one reflecting cell already breaks the constraint, A1 reports infeasible."""
        # Act
        outcome = solve_problem_a(PolicyId.A1, _channels(), _problem_a(19.9e-3), HARVESTER)

        # Assert
        assert not outcome.feasible
        assert outcome.i_stop == 1
        assert outcome.allocation.a_r == ()
        assert outcome.snr == 0.0

    def test_a4_harvests_minimal_tx_prefix(self) -> None:
        """A4 harvests the shortest strongest-|h_t| prefix that powers the surface."""
        # Arrange
        channels = _channels(seed=5)
        spec = _problem_a(80e-6)

        # Act
        outcome = solve_problem_a(PolicyId.A4, channels, spec, HARVESTER)

        # Assert
        order = descending_order(channels.tx_gains)
        assert outcome.feasible
        assert outcome.allocation.a_h == tuple(sorted(order[: outcome.i_stop].tolist()))
        assert dc_power_for_cells(channels, order[: outcome.i_stop - 1], 1.0, HARVESTER) < spec.p_ris

    def test_a4_infeasible_when_all_cells_are_needed(self) -> None:
        """A4 is infeasible when no reflecting cell can be spared."""
        # Act
        outcome = solve_problem_a(PolicyId.A4, _channels(), _problem_a(19.9e-3), HARVESTER)

        # Assert
        assert not outcome.feasible
        assert outcome.allocation.a_r == ()

    def test_harvest_is_non_increasing_along_the_loop(self) -> None:
        """Growing the reflecting set never increases the harvest."""
        # Arrange
        channels = _channels(seed=9)
        order = descending_order(channels.rx_gains)

        # Act
        harvest = [dc_power_for_cells(channels, order[i:], 1.0, HARVESTER) for i in range(1, channels.m_s + 1)]

        # Assert
        assert all(later <= earlier for earlier, later in zip(harvest, harvest[1:]))


class TestProblemBPolicies:
    """Tests for B1-B4."""

    @pytest.mark.parametrize("policy", [PolicyId.B1, PolicyId.B2, PolicyId.B3, PolicyId.B4])
    def test_feasible_outcomes_meet_snr_target(self, policy: PolicyId) -> None:
        """A feasible outcome satisfies the SNR constraint on recomputed values."""
        # Arrange
        channels = _channels(seed=2)
        spec = _problem_b(20.0)

        # Act
        outcome = solve_problem_b(policy, channels, spec, HARVESTER)

        # Assert
        assert outcome.feasible
        assert outcome.snr >= spec.gamma_0
        assert outcome.snr == max_snr(channels, outcome.allocation.a_r, 1.0, SIGMA_SQ)

    def test_b2_with_zero_target_reflects_best_rx_cell(self) -> None:
        """gamma_0 = 0 is met by the single strongest RIS-RX cell."""
        # Arrange
        channels = _channels(seed=4)

        # Act
        outcome = solve_problem_b(PolicyId.B2, channels, _problem_b(0.0), HARVESTER)

        # Assert
        assert outcome.allocation.a_r == (int(np.argmax(channels.rx_gains)),)
        assert outcome.i_stop == 1

    def test_b2_reflects_minimal_prefix(self) -> None:
        """B2 stops at the first prefix that meets the target."""
        # Arrange
        channels = _channels(seed=6)
        spec = _problem_b(20.0)

        # Act
        outcome = solve_problem_b(PolicyId.B2, channels, spec, HARVESTER)

        # Assert
        order = descending_order(channels.rx_gains)
        assert outcome.i_stop is not None and outcome.allocation.m_r == outcome.i_stop
        assert max_snr(channels, order[: outcome.i_stop - 1], 1.0, SIGMA_SQ) < spec.gamma_0

    def test_unreachable_target_is_infeasible(self) -> None:
        """If all cells reflecting miss gamma_0, nothing harvests and the outcome is infeasible."""
        # Act
        outcome = solve_problem_b(PolicyId.B3, _channels(), _problem_b(1e12), HARVESTER)

        # Assert
        assert not outcome.feasible
        assert outcome.allocation.a_h == ()
        assert outcome.p_dc == 0.0

    @pytest.mark.parametrize("policy", [PolicyId.B1, PolicyId.B2, PolicyId.B3, PolicyId.B4])
    def test_target_needing_every_cell_is_infeasible(self, policy: PolicyId) -> None:
        """A target met only with all cells reflecting leaves no harvesting cell, as in the exhaustive search."""
        # Arrange
        channels = ChannelRealization(np.ones(4), np.zeros(4), np.ones(4), np.zeros(4))
        spec = ProblemSpec(ProblemKind.PROBLEM_B, p_ris=0.0, gamma_0=12.0, p_t=1.0, sigma_sq=1.0)

        # Act
        outcome = solve_problem_b(policy, channels, spec, HARVESTER)
        oracle = brute_force_b(channels, spec, HARVESTER)

        # Assert
        assert outcome.snr == 16.0
        assert outcome.allocation.a_h == ()
        assert not outcome.feasible
        assert outcome.feasible == oracle.feasible
        assert outcome.p_dc == oracle.p_dc == 0.0

    def test_b1_keeps_last_satisfying_harvest(self) -> None:
        """B1 harvests i_stop - 1 strongest-|h_t| cells."""
        # Arrange
        channels = _channels(seed=8)
        spec = _problem_b(20.0)

        # Act
        outcome = solve_problem_b(PolicyId.B1, channels, spec, HARVESTER)

        # Assert
        order = descending_order(channels.tx_gains)
        assert outcome.allocation.a_h == tuple(sorted(order[: outcome.i_stop - 1].tolist()))
        assert max_snr(channels, order[outcome.i_stop:], 1.0, SIGMA_SQ) < spec.gamma_0

    def test_snr_is_non_decreasing_along_the_loop(self) -> None:
        """Growing the reflecting set never lowers the SNR."""
        # Arrange
        channels = _channels(seed=10)
        order = descending_order(channels.cascaded_gains)

        # Act
        snrs = [max_snr(channels, order[:i], 1.0, SIGMA_SQ) for i in range(1, channels.m_s + 1)]

        # Assert
        assert all(later >= earlier for earlier, later in zip(snrs, snrs[1:]))


class TestGreedyPolicyValidation:
    """Input validation."""

    def test_wrong_problem_kind(self) -> None:
        """A Problem-A policy refuses a Problem-B spec."""
        with pytest.raises(DomainError, match="does not solve"):
            GreedyPolicy(PolicyId.A1).solve(_channels(), _problem_b(1.0), HARVESTER)

    def test_single_cell_surface(self) -> None:
        """Both sets must be able to be nonempty."""
        with pytest.raises(DomainError, match="at least 2 cells"):
            GreedyPolicy(PolicyId.B2).solve(_channels(1, 1), _problem_b(1.0), HARVESTER)

    def test_rejects_non_greedy_id(self) -> None:
        """Only A1-A4 and B1-B4 are greedy."""
        with pytest.raises(ValueError):
            GreedyPolicy(PolicyId.BRUTE_FORCE_A)

    def test_partition_is_complete(self) -> None:
        """Every outcome covers every cell exactly once."""
        channels = _channels(seed=12)
        for policy in (PolicyId.A1, PolicyId.A2, PolicyId.A3, PolicyId.A4):
            outcome = GreedyPolicy(policy).solve(channels, _problem_a(80e-6), HARVESTER)
            assert sorted(outcome.allocation.a_h + outcome.allocation.a_r) == list(range(8))
