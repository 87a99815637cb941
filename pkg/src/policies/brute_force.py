"""Exhaustive search over every proper, nonempty split of the surface.

Subset sums for all ``2^M_s`` masks are built in one vectorized pass by
doubling: the sums of masks with top bit ``k`` are the sums of the
masks below ``2^k`` plus the weight of cell ``k``.  Bit ``k`` of a mask
marks cell ``k`` as reflecting; the harvesting sums of a mask are read
from the complementary mask ``full ^ mask``, which is the reversed table.

The winner is re-verified with the same routines the greedy policies
use, so a reported ``feasible=True`` always holds on recomputed values.
"""
import numpy as np
import structlog

from src.domain.errors import BruteForceCapError, InfeasibleError
from src.domain.models import (
    Allocation,
    ChannelRealization,
    HarvesterModel,
    PolicyId,
    PolicyOutcome,
    ProblemKind,
    ProblemSpec,
)
from src.energy.energy_model import required_rf_input

from .policy import AllocationPolicy, evaluate

logger = structlog.get_logger(__name__)

DEFAULT_BRUTE_FORCE_CAP = 22

# Table sums and the rectifier inverse are only accurate to a few ulps and
# about 1e-9 respectively; candidates inside this band are re-checked exactly.
_THRESHOLD_SLACK = 1e-8


def allocation_count(m_s: int) -> int:
    """Number of allocations with both sets nonempty, ``2^M_s - 2``."""
    return 2 ** m_s - 2


def subset_sums(weights: np.ndarray) -> np.ndarray:
    """Sum of ``weights`` over every subset, indexed by bit mask."""
    sums = np.zeros(1 << weights.size)
    for k, weight in enumerate(weights):
        half = 1 << k
        np.add(sums[:half], weight, out=sums[half: 2 * half])
    return sums


def _mask_cells(mask: int, m_s: int) -> tuple[int, ...]:
    return tuple(k for k in range(m_s) if mask >> k & 1)


class BruteForcePolicy(AllocationPolicy):
    """Exhaustive oracle for Problem A or Problem B.

    Ties on the objective go to the lexicographically smallest reflecting
    set (Problem A) or harvesting set (Problem B).
    """

    def __init__(self, policy_id: PolicyId, cap: int = DEFAULT_BRUTE_FORCE_CAP) -> None:
        if not policy_id.is_brute_force:
            raise ValueError(f"{policy_id.value} is not an exhaustive policy")
        self.policy_id = policy_id
        self.cap = cap

    def solve(
        self,
        channels: ChannelRealization,
        spec: ProblemSpec,
        harvester: HarvesterModel,
    ) -> PolicyOutcome:
        self._check(channels, spec)
        m_s = channels.m_s
        if m_s > self.cap:
            raise BruteForceCapError(m_s=m_s, cap=self.cap)

        full = (1 << m_s) - 1
        amplitude = subset_sums(channels.cascaded_gains)
        harvest = subset_sums(channels.tx_power_gains)[::-1]
        valid = np.ones(full + 1, dtype=bool)
        valid[0] = valid[full] = False

        if spec.kind is ProblemKind.PROBLEM_A:
            try:
                rf_needed = required_rf_input(spec.p_ris, harvester) / (harvester.eta_rf * spec.p_t)
            except InfeasibleError:
                return self._infeasible(channels, spec, harvester)
            candidates = valid & (harvest >= rf_needed * (1 - _THRESHOLD_SLACK))
            objective = amplitude
        else:
            amplitude_needed = np.sqrt(spec.gamma_0 * spec.sigma_sq / spec.p_t)
            candidates = valid & (amplitude >= amplitude_needed * (1 - _THRESHOLD_SLACK))
            objective = harvest

        while candidates.any():
            best = objective[candidates].max()
            tied = np.flatnonzero(candidates & (objective == best))
            mask = min(tied, key=lambda m: self._tie_key(int(m), m_s, spec.kind))
            outcome = evaluate(
                self.policy_id,
                Allocation.from_reflecting(_mask_cells(int(mask), m_s), m_s),
                channels,
                spec,
                harvester,
                evaluated=allocation_count(m_s),
            )
            if outcome.feasible:
                logger.debug("brute_force_solved", policy=self.policy_id.value, m_s=m_s, m_h=outcome.m_h)
                return outcome
            candidates[mask] = False

        return self._infeasible(channels, spec, harvester)

    @staticmethod
    def _tie_key(mask: int, m_s: int, kind: ProblemKind) -> tuple[int, ...]:
        if kind is ProblemKind.PROBLEM_A:
            return _mask_cells(mask, m_s)
        return _mask_cells(((1 << m_s) - 1) ^ mask, m_s)

    def _infeasible(
        self,
        channels: ChannelRealization,
        spec: ProblemSpec,
        harvester: HarvesterModel,
    ) -> PolicyOutcome:
        m_s = channels.m_s
        if spec.kind is ProblemKind.PROBLEM_A:
            allocation = Allocation.from_reflecting((), m_s)
        else:
            allocation = Allocation.from_harvesting((), m_s)
        return evaluate(
            self.policy_id, allocation, channels, spec, harvester,
            feasible=False, evaluated=allocation_count(m_s),
        )


def brute_force_a(
    channels: ChannelRealization,
    spec: ProblemSpec,
    harvester: HarvesterModel,
    cap: int = DEFAULT_BRUTE_FORCE_CAP,
) -> PolicyOutcome:
    """Exhaustive optimum of Problem A (max SNR subject to P_DC >= P_RIS)."""
    return BruteForcePolicy(PolicyId.BRUTE_FORCE_A, cap).solve(channels, spec, harvester)


def brute_force_b(
    channels: ChannelRealization,
    spec: ProblemSpec,
    harvester: HarvesterModel,
    cap: int = DEFAULT_BRUTE_FORCE_CAP,
) -> PolicyOutcome:
    """Exhaustive optimum of Problem B (max P_DC subject to SNR >= gamma_0)."""
    return BruteForcePolicy(PolicyId.BRUTE_FORCE_B, cap).solve(channels, spec, harvester)
