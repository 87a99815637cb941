"""Policy factory and single-call dispatch."""
from typing import Union

from src.domain.errors import DomainError
from src.domain.models import ChannelRealization, HarvesterModel, PolicyId, PolicyOutcome, ProblemSpec

from .brute_force import DEFAULT_BRUTE_FORCE_CAP, BruteForcePolicy
from .closed_form import ClosedFormPolicy
from .greedy_policies import GREEDY_POLICIES, GreedyPolicy
from .policy import AllocationPolicy


def create_policy(policy_id: Union[PolicyId, str], brute_force_cap: int = DEFAULT_BRUTE_FORCE_CAP) -> AllocationPolicy:
    """Create a policy instance by id.

    Args:
        policy_id: Which policy to build, as a PolicyId or its name.
        brute_force_cap: Largest surface the exhaustive policies accept.

    Returns:
        A ready-to-use AllocationPolicy

    Raises:
        ValueError: If policy_id is not recognized
    """
    if not isinstance(policy_id, PolicyId):
        try:
            policy_id = PolicyId(policy_id)
        except ValueError:
            valid = ", ".join(p.value for p in PolicyId)
            raise ValueError(f"Unknown policy: {policy_id!r}; valid names: {valid}") from None

    if policy_id in GREEDY_POLICIES:
        return GreedyPolicy(policy_id)
    elif policy_id.is_brute_force:
        return BruteForcePolicy(policy_id, cap=brute_force_cap)
    elif policy_id is PolicyId.CLOSED_FORM_A:
        return ClosedFormPolicy()
    else:
        raise ValueError(f"Unknown policy: {policy_id}")


def solve(
    policy_id: PolicyId,
    channels: ChannelRealization,
    spec: ProblemSpec,
    harvester: HarvesterModel,
    brute_force_cap: int = DEFAULT_BRUTE_FORCE_CAP,
) -> PolicyOutcome:
    """Run ``policy_id`` on one realization.

    Raises:
        DomainError: If the policy does not solve ``spec.kind``.
        BruteForceCapError: If an exhaustive policy meets a surface above the cap.
    """
    if policy_id.problem_kind is not spec.kind:
        raise DomainError(f"policy {policy_id.value} does not solve {spec.kind.value}")
    return create_policy(policy_id, brute_force_cap).solve(channels, spec, harvester)
