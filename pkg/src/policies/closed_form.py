"""Closed-form Problem A solution for an equal-gain TX link.

When every cell sees the same TX power gain ``beta``, the fewest
harvesting cells that power the surface is

    M_h = ceil(required_rf_input(P_RIS) / (eta_RF * P_t * beta))

and the best split reflects the ``M_s - M_h`` cells with the strongest
RIS-RX gains.  ``i_stop`` follows the A1 loop convention: the first
reflecting-set size at which the constraint fails, so the reflecting
set has ``i_stop - 1 = M_s - M_h`` cells.
"""
import math

import numpy as np
import structlog

from src.domain.errors import DomainError, InfeasibleError
from src.domain.models import (
    Allocation,
    ChannelRealization,
    HarvesterModel,
    PolicyId,
    PolicyOutcome,
    ProblemKind,
    ProblemSpec,
)
from src.energy.energy_model import rectifier_dc_power, required_rf_input

from .greedy_policies import descending_order
from .policy import AllocationPolicy, evaluate

logger = structlog.get_logger(__name__)


def _require_problem_a(spec: ProblemSpec) -> None:
    if spec.kind is not ProblemKind.PROBLEM_A:
        raise DomainError("the closed form solves Problem A only")


def _equal_gain_dc(count: int, beta: float, spec: ProblemSpec, harvester: HarvesterModel) -> float:
    # Same arithmetic as harvested_rf_power on ``count`` cells of gain beta.
    harvested = float(harvester.eta_rf * spec.p_t * np.sum(np.full(count, beta))) if count else 0.0
    return rectifier_dc_power(harvested, harvester)


def closed_form_harvesting_cells(beta: float, spec: ProblemSpec, harvester: HarvesterModel, m_s: int) -> int:
    """Fewest equal-gain harvesting cells whose DC output reaches ``spec.p_ris``.

    The ceiling estimate is corrected by single steps until the forward
    model agrees, so the count is exact even at rounding boundaries.

    Raises:
        DomainError: If ``beta`` is not positive.
        InfeasibleError: If ``p_ris >= p_max`` or all ``m_s`` cells fall short.
    """
    _require_problem_a(spec)
    if beta <= 0:
        raise DomainError(f"per-cell TX power gain must be positive, got {beta!r}")
    rf_needed = required_rf_input(spec.p_ris, harvester)
    per_cell = harvester.eta_rf * spec.p_t * beta
    m_h = math.ceil(rf_needed / per_cell) if rf_needed > 0 else 0

    while m_h > 0 and _equal_gain_dc(m_h - 1, beta, spec, harvester) >= spec.p_ris:
        m_h -= 1
    while m_h <= m_s and _equal_gain_dc(m_h, beta, spec, harvester) < spec.p_ris:
        m_h += 1
    if m_h > m_s:
        raise InfeasibleError(f"{m_s} equal-gain cells cannot deliver {spec.p_ris!r} W")
    return m_h


def closed_form_istop(beta: float, spec: ProblemSpec, harvester: HarvesterModel, m_s: int) -> int:
    """Stopping index of the A1 loop on an equal-gain TX link, ``M_s - M_h + 1``.

    Args:
        beta: Per-cell TX power gain ``|h_t|^2``.
        spec: Problem A constraints.
        harvester: Rectifier and combining model.
        m_s: Number of cells.

    Returns:
        ``i_stop``; ``M_s + 1`` when no harvesting is needed.

    Raises:
        InfeasibleError: If ``p_ris >= p_max`` or no reflecting cell can be
            spared.
    """
    m_h = closed_form_harvesting_cells(beta, spec, harvester, m_s)
    if m_h > m_s - 1:
        raise InfeasibleError(f"powering the surface needs all {m_s} cells; none left to reflect")
    return m_s - m_h + 1


class ClosedFormPolicy(AllocationPolicy):
    """Problem A by the closed form, using the mean TX power gain as ``beta``.

    Exact when the TX link is equal-gain; a heuristic otherwise.
    """

    policy_id = PolicyId.CLOSED_FORM_A

    def solve(
        self,
        channels: ChannelRealization,
        spec: ProblemSpec,
        harvester: HarvesterModel,
    ) -> PolicyOutcome:
        self._check(channels, spec)
        m_s = channels.m_s
        gains = channels.tx_power_gains
        beta = float(gains[0]) if np.ptp(gains) == 0 else float(np.mean(gains))
        try:
            i_stop = closed_form_istop(beta, spec, harvester, m_s)
        except InfeasibleError as exc:
            logger.debug("closed_form_infeasible", reason=str(exc))
            allocation = Allocation.from_reflecting((), m_s)
            return evaluate(self.policy_id, allocation, channels, spec, harvester, feasible=False)

        order = descending_order(channels.rx_gains)
        allocation = Allocation.from_reflecting(order[: i_stop - 1], m_s)
        return evaluate(self.policy_id, allocation, channels, spec, harvester, i_stop=i_stop)
