"""Tests for workflow factory."""
import pytest

from src.workflows.montecarlo_workflow import MonteCarloWorkflow
from src.workflows.policy_demo_workflow import PolicyDemoWorkflow
from src.workflows.tracking_workflow import TrackingWorkflow
from src.workflows.workflow_factory import create_workflow


def test_create_workflow_raises_on_unknown_name() -> None:
    """create_workflow() raises ValueError for unknown workflow names."""
    # Act & Assert
    with pytest.raises(ValueError, match="Unknown workflow"):
        create_workflow("unknown-workflow")


@pytest.mark.parametrize("name,expected", [
    ("montecarlo", MonteCarloWorkflow),
    ("tracking", TrackingWorkflow),
    ("policy-demo", PolicyDemoWorkflow),
])
def test_create_workflow_by_name(name: str, expected: type) -> None:
    """Each subcommand maps to its workflow, whose command matches the name."""
    # Act
    workflow = create_workflow(name)

    # Assert
    assert isinstance(workflow, expected)
    assert workflow.command == name
    assert callable(getattr(workflow, "run", None))
