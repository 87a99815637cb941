"""Tests for the closed-form Problem A solution."""
import math

import numpy as np
import pytest
from scipy.constants import speed_of_light

from src.channel.channel_model import draw_channels, element_gain, los_power_gain
from src.domain.errors import DomainError, InfeasibleError
from src.domain.models import (
    FadingParams,
    HarvesterModel,
    Placement,
    PolicyId,
    ProblemKind,
    ProblemSpec,
    RisGeometry,
)

from .closed_form import ClosedFormPolicy, closed_form_harvesting_cells, closed_form_istop
from .greedy_policies import solve_problem_a

HARVESTER = HarvesterModel(a=120.0, b=1e-3, p_max=20e-3, eta_rf=0.5)
REFERENCE_BETA = los_power_gain(17.0, 1e4, element_gain(math.pi / 4), speed_of_light / 28e9)


def _problem_a(p_ris: float) -> ProblemSpec:
    return ProblemSpec(ProblemKind.PROBLEM_A, p_ris=p_ris, gamma_0=0.0, p_t=1.0, sigma_sq=4.004e-11)


class TestClosedFormIstop:
    """Tests for closed_form_istop() and closed_form_harvesting_cells()."""

    def test_zero_target_needs_no_harvesting(self) -> None:
        """P_RIS = 0 needs no harvesting cell; the A1 loop runs out."""
        # Act / Assert
        assert closed_form_harvesting_cells(REFERENCE_BETA, _problem_a(0.0), HARVESTER, 10) == 0
        assert closed_form_istop(REFERENCE_BETA, _problem_a(0.0), HARVESTER, 10) == 11

    def test_reference_surface_needs_three_cells(self) -> None:
        """Ten cells at 100 uW need three harvesting cells."""
        # Act
        m_h = closed_form_harvesting_cells(REFERENCE_BETA, _problem_a(100e-6), HARVESTER, 10)

        # Assert
        assert m_h == 3
        assert closed_form_istop(REFERENCE_BETA, _problem_a(100e-6), HARVESTER, 10) == 8

    def test_matches_a1_on_equal_gain_channel(self) -> None:
        """The closed form reproduces the stopping index of the A1 loop."""
        # Arrange
        geometry = RisGeometry.half_wavelength(5, 2, 28e9)
        placement = Placement.from_angles(17.0, 20.0, math.radians(45), math.radians(60), 1e4, 10 ** 2.2)
        channels = draw_channels(geometry, placement, FadingParams(0.0, 0.3), 17)
        spec = _problem_a(100e-6)

        # Act
        loop = solve_problem_a(PolicyId.A1, channels, spec, HARVESTER)
        closed = closed_form_istop(float(channels.tx_power_gains[0]), spec, HARVESTER, channels.m_s)

        # Assert
        assert loop.i_stop == closed

    def test_strong_link_needs_one_cell(self) -> None:
        """A very strong TX link powers the surface with one cell."""
        assert closed_form_istop(1.0, _problem_a(100e-6), HARVESTER, 10) == 10

    def test_saturated_target_is_infeasible(self) -> None:
        """Targets at P_max can never be met."""
        with pytest.raises(InfeasibleError):
            closed_form_istop(REFERENCE_BETA, _problem_a(20e-3), HARVESTER, 10)

    def test_too_weak_link_is_infeasible(self) -> None:
        """If every cell must harvest, none is left to reflect."""
        with pytest.raises(InfeasibleError):
            closed_form_istop(1e-9, _problem_a(100e-6), HARVESTER, 10)

    def test_rejects_problem_b(self) -> None:
        """The closed form only covers Problem A."""
        spec = ProblemSpec(ProblemKind.PROBLEM_B, p_ris=0.0, gamma_0=1.0, p_t=1.0, sigma_sq=1.0)
        with pytest.raises(DomainError, match="Problem A"):
            closed_form_harvesting_cells(REFERENCE_BETA, spec, HARVESTER, 10)


class TestClosedFormPolicy:
    """Tests for ClosedFormPolicy."""

    def test_equals_a1_on_equal_gain_channel(self) -> None:
        """On an equal-gain TX link the closed form picks A1's allocation."""
        # Arrange
        geometry = RisGeometry.half_wavelength(4, 2, 28e9)
        placement = Placement.from_angles(17.0, 20.0, math.radians(45), math.radians(60), 1e4, 10 ** 2.2)
        channels = draw_channels(geometry, placement, FadingParams(0.0, 0.3), 5)
        spec = _problem_a(80e-6)

        # Act
        closed = ClosedFormPolicy().solve(channels, spec, HARVESTER)
        loop = solve_problem_a(PolicyId.A1, channels, spec, HARVESTER)

        # Assert
        assert closed.allocation == loop.allocation
        assert closed.snr == loop.snr
        assert closed.feasible

    def test_infeasible_target_gives_infeasible_outcome(self) -> None:
        """An unreachable target yields an infeasible outcome rather than an error."""
        # Arrange
        geometry = RisGeometry.half_wavelength(2, 2, 28e9)
        placement = Placement.from_angles(17.0, 20.0, math.radians(45), math.radians(60), 1e4, 10 ** 2.2)
        channels = draw_channels(geometry, placement, FadingParams(0.1, 0.3), 5)

        # Act
        outcome = ClosedFormPolicy().solve(channels, _problem_a(19e-3), HARVESTER)

        # Assert
        assert not outcome.feasible
        assert outcome.allocation.a_r == ()
        assert np.isclose(outcome.snr, 0.0)
