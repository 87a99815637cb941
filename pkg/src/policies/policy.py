"""Allocation policy interface and outcome bookkeeping."""
from abc import ABC, abstractmethod
from typing import Optional

from src.domain.errors import DomainError
from src.domain.models import (
    Allocation,
    ChannelRealization,
    HarvesterModel,
    PolicyId,
    PolicyOutcome,
    ProblemKind,
    ProblemSpec,
)
from src.energy.energy_model import dc_power_for_cells
from src.link.link_metrics import max_snr


class AllocationPolicy(ABC):
    """Splits the cells of one realization into harvesting and reflecting sets.

    Concrete policies are pure: the same channels and problem always give
    the same outcome.  They never draw random numbers.
    """

    policy_id: PolicyId

    @abstractmethod
    def solve(
        self,
        channels: ChannelRealization,
        spec: ProblemSpec,
        harvester: HarvesterModel,
    ) -> PolicyOutcome:
        """Solve the problem described by ``spec`` on ``channels``.

        Args:
            channels: One fading realization.
            spec: Problem kind, constraint and link parameters.
            harvester: Rectifier and combining model.

        Returns:
            The chosen allocation with recomputed SNR and DC power.

        Raises:
            DomainError: If the policy does not solve ``spec.kind`` or the
                surface is too small.
        """
        pass

    def _check(self, channels: ChannelRealization, spec: ProblemSpec) -> None:
        if self.policy_id.problem_kind is not spec.kind:
            raise DomainError(f"policy {self.policy_id.value} does not solve {spec.kind.value}")
        if channels.m_s < 2:
            raise DomainError(f"allocation needs at least 2 cells, got {channels.m_s}")


def constraint_holds(spec: ProblemSpec, snr: float, p_dc: float) -> bool:
    """Whether the constraint of ``spec.kind`` holds for the given metrics."""
    if spec.kind is ProblemKind.PROBLEM_A:
        return p_dc >= spec.p_ris
    return snr >= spec.gamma_0


def evaluate(
    policy_id: PolicyId,
    allocation: Allocation,
    channels: ChannelRealization,
    spec: ProblemSpec,
    harvester: HarvesterModel,
    feasible: Optional[bool] = None,
    i_stop: Optional[int] = None,
    evaluated: Optional[int] = None,
) -> PolicyOutcome:
    """Build an outcome with SNR and DC power recomputed from ``allocation``.

    ``feasible=False`` forces an infeasible verdict; otherwise the verdict
    is the recomputed constraint.
    """
    snr = max_snr(channels, allocation.a_r, spec.p_t, spec.sigma_sq)
    p_dc = dc_power_for_cells(channels, allocation.a_h, spec.p_t, harvester)
    verdict = constraint_holds(spec, snr, p_dc) if feasible is None else feasible and constraint_holds(spec, snr, p_dc)
    return PolicyOutcome(
        policy_id=policy_id,
        allocation=allocation,
        snr=snr,
        p_dc=p_dc,
        feasible=verdict,
        i_stop=i_stop,
        evaluated=evaluated,
    )
