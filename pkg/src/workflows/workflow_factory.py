"""Workflow factory for creating workflow instances."""
from .montecarlo_workflow import MonteCarloWorkflow
from .policy_demo_workflow import PolicyDemoWorkflow
from .tracking_workflow import TrackingWorkflow
from .workflow import Workflow


def create_workflow(workflow_name: str) -> Workflow:
    """Create a workflow instance by name.

    Args:
        workflow_name: Name of the workflow to create (montecarlo, tracking, policy-demo)

    Returns:
        A fully-wired Workflow instance

    Raises:
        ValueError: If workflow_name is not recognized
    """
    if workflow_name == "montecarlo":
        return MonteCarloWorkflow()
    elif workflow_name == "tracking":
        return TrackingWorkflow()
    elif workflow_name == "policy-demo":
        return PolicyDemoWorkflow()
    else:
        raise ValueError(f"Unknown workflow: {workflow_name}")
