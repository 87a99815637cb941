"""Greedy ordering policies for Problems A and B.

Every policy sorts the cells by one channel-gain key (descending, ties
broken by ascending cell index), then grows one of the two sets along
that order:

======  =========  ==========  ==========================================
policy  key        grows       stops at the first size where
======  =========  ==========  ==========================================
A1      abs(h_r)   reflecting  the DC constraint fails (keeps size - 1)
A2      g          reflecting  the DC constraint fails (keeps size - 1)
A3      abs(h_t)   reflecting  the DC constraint fails (keeps size - 1)
A4      abs(h_t)   harvesting  the DC constraint holds
B1      abs(h_t)   harvesting  the SNR constraint fails (keeps size - 1)
B2      abs(h_r)   reflecting  the SNR constraint holds
B3      g          reflecting  the SNR constraint holds
B4      abs(h_t)   reflecting  the SNR constraint holds
======  =========  ==========  ==========================================

``g = abs(h_t) * abs(h_r)``.  ``i_stop`` is ``M_s + 1`` when the loop
runs out of cells without stopping.

Under a positive constraint both sets must end up nonempty, the same
allocations the exhaustive search enumerates; a loop that would leave
either set empty reports the outcome as infeasible.
"""
from collections.abc import Callable

import numpy as np
import structlog

from src.domain.models import (
    Allocation,
    ChannelRealization,
    HarvesterModel,
    PolicyId,
    PolicyOutcome,
    ProblemSpec,
)
from src.energy.energy_model import dc_power_for_cells
from src.link.link_metrics import max_snr

from .policy import AllocationPolicy, evaluate

logger = structlog.get_logger(__name__)

GainKey = Callable[[ChannelRealization], np.ndarray]


def _rx_key(channels: ChannelRealization) -> np.ndarray:
    return channels.rx_gains


def _tx_key(channels: ChannelRealization) -> np.ndarray:
    return channels.tx_gains


def _product_key(channels: ChannelRealization) -> np.ndarray:
    return channels.cascaded_gains


_ORDERING: dict[PolicyId, GainKey] = {
    PolicyId.A1: _rx_key,
    PolicyId.A2: _product_key,
    PolicyId.A3: _tx_key,
    PolicyId.A4: _tx_key,
    PolicyId.B1: _tx_key,
    PolicyId.B2: _rx_key,
    PolicyId.B3: _product_key,
    PolicyId.B4: _tx_key,
}

GREEDY_POLICIES = tuple(_ORDERING)


def descending_order(gains: np.ndarray) -> np.ndarray:
    """Cell indices by descending gain; equal gains keep ascending index order."""
    return np.argsort(-gains, kind="stable")


class GreedyPolicy(AllocationPolicy):
    """One of the eight greedy orderings A1-A4, B1-B4."""

    def __init__(self, policy_id: PolicyId) -> None:
        if policy_id not in _ORDERING:
            raise ValueError(f"{policy_id.value} is not a greedy policy")
        self.policy_id = policy_id

    def solve(
        self,
        channels: ChannelRealization,
        spec: ProblemSpec,
        harvester: HarvesterModel,
    ) -> PolicyOutcome:
        self._check(channels, spec)
        order = descending_order(_ORDERING[self.policy_id](channels))

        if self.policy_id in (PolicyId.A1, PolicyId.A2, PolicyId.A3):
            outcome = self._reflect_until_starved(order, channels, spec, harvester)
        elif self.policy_id is PolicyId.A4:
            outcome = self._harvest_until_powered(order, channels, spec, harvester)
        elif self.policy_id is PolicyId.B1:
            outcome = self._harvest_until_degraded(order, channels, spec, harvester)
        else:
            outcome = self._reflect_until_served(order, channels, spec, harvester)

        logger.debug(
            "greedy_policy_solved",
            policy=self.policy_id.value,
            i_stop=outcome.i_stop,
            m_h=outcome.m_h,
            feasible=outcome.feasible,
        )
        return outcome

    def _reflect_until_starved(
        self,
        order: np.ndarray,
        channels: ChannelRealization,
        spec: ProblemSpec,
        harvester: HarvesterModel,
    ) -> PolicyOutcome:
        m_s = channels.m_s
        i_stop = m_s + 1
        for i in range(1, m_s + 1):
            if dc_power_for_cells(channels, order[i:], spec.p_t, harvester) < spec.p_ris:
                i_stop = i
                break

        allocation = Allocation.from_reflecting(order[: i_stop - 1], m_s)
        # A single reflecting cell already starves the harvester.
        feasible = False if i_stop == 1 else None
        return evaluate(self.policy_id, allocation, channels, spec, harvester, feasible=feasible, i_stop=i_stop)

    def _harvest_until_powered(
        self,
        order: np.ndarray,
        channels: ChannelRealization,
        spec: ProblemSpec,
        harvester: HarvesterModel,
    ) -> PolicyOutcome:
        m_s = channels.m_s
        i_stop = m_s + 1
        for i in range(1, m_s + 1):
            if dc_power_for_cells(channels, order[:i], spec.p_t, harvester) >= spec.p_ris:
                i_stop = i
                break

        if i_stop >= m_s:
            # Powering the surface would leave no reflecting cell.
            allocation = Allocation.from_harvesting(order, m_s)
            return evaluate(self.policy_id, allocation, channels, spec, harvester, feasible=False, i_stop=i_stop)

        allocation = Allocation.from_harvesting(order[:i_stop], m_s)
        return evaluate(self.policy_id, allocation, channels, spec, harvester, i_stop=i_stop)

    def _harvest_until_degraded(
        self,
        order: np.ndarray,
        channels: ChannelRealization,
        spec: ProblemSpec,
        harvester: HarvesterModel,
    ) -> PolicyOutcome:
        m_s = channels.m_s
        i_stop = m_s + 1
        for i in range(1, m_s + 1):
            if max_snr(channels, order[i:], spec.p_t, spec.sigma_sq) < spec.gamma_0:
                i_stop = i
                break

        allocation = Allocation.from_harvesting(order[: i_stop - 1], m_s)
        # Harvesting even the first cell breaks the SNR target.
        feasible = False if i_stop == 1 and spec.gamma_0 > 0 else None
        return evaluate(self.policy_id, allocation, channels, spec, harvester, feasible=feasible, i_stop=i_stop)

    def _reflect_until_served(
        self,
        order: np.ndarray,
        channels: ChannelRealization,
        spec: ProblemSpec,
        harvester: HarvesterModel,
    ) -> PolicyOutcome:
        m_s = channels.m_s
        i_stop = m_s + 1
        for i in range(1, m_s + 1):
            if max_snr(channels, order[:i], spec.p_t, spec.sigma_sq) >= spec.gamma_0:
                i_stop = i
                break

        if i_stop > m_s:
            allocation = Allocation.from_reflecting(order, m_s)
            return evaluate(self.policy_id, allocation, channels, spec, harvester, feasible=False, i_stop=i_stop)

        allocation = Allocation.from_reflecting(order[:i_stop], m_s)
        # The target needs every cell, which leaves nothing to harvest.
        feasible = False if i_stop == m_s and spec.gamma_0 > 0 else None
        return evaluate(self.policy_id, allocation, channels, spec, harvester, feasible=feasible, i_stop=i_stop)


def solve_problem_a(
    policy_id: PolicyId,
    channels: ChannelRealization,
    spec: ProblemSpec,
    harvester: HarvesterModel,
) -> PolicyOutcome:
    """Run greedy policy A1-A4 on one realization."""
    return GreedyPolicy(policy_id).solve(channels, spec, harvester)


def solve_problem_b(
    policy_id: PolicyId,
    channels: ChannelRealization,
    spec: ProblemSpec,
    harvester: HarvesterModel,
) -> PolicyOutcome:
    """Run greedy policy B1-B4 on one realization."""
    return GreedyPolicy(policy_id).solve(channels, spec, harvester)
