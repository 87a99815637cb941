"""Workflows package for running simulation studies end to end."""
from src.workflows.montecarlo_workflow import MonteCarloWorkflow
from src.workflows.policy_demo_workflow import PolicyDemoWorkflow
from src.workflows.tracking_workflow import TrackingWorkflow
from src.workflows.workflow import Workflow
from src.workflows.workflow_factory import create_workflow

__all__ = [
    "Workflow",
    "MonteCarloWorkflow",
    "TrackingWorkflow",
    "PolicyDemoWorkflow",
    "create_workflow",
]
