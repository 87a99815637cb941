"""Allocation policies: greedy orderings, exhaustive oracle and closed form."""
from .policy import AllocationPolicy
from .policy_factory import create_policy, solve

__all__ = ["AllocationPolicy", "create_policy", "solve"]
