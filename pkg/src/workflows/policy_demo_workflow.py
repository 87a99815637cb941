"""Single-draw policy demonstration workflow."""
import dataclasses
import json
import sys
import time
from typing import Any, Optional, TextIO

import structlog

from src.channel.channel_model import channel_dump_rows, draw_channels
from src.config.run_config import RunConfig
from src.domain.models import RunManifest
from src.montecarlo.experiment import trial_seed
from src.policies import solve
from src.repository.file_result_repository import FileResultRepository
from src.workflows.workflow import RepositoryFactory, Workflow

logger = structlog.get_logger(__name__)


class PolicyDemoWorkflow(Workflow):
    """Solve one channel draw with ``demo.policy`` and print the outcome as JSON.

    The draw is trial 0 of ``experiment.seed``, i.e. the first realization a
    Monte-Carlo run with the same seed would see.  The policy is solved for
    its own problem kind, so ``--set policy=B2`` works on any preset.  The
    record also lands in ``outcome.json`` next to the manifest, and with
    ``experiment.dump_channels`` the draw goes to ``channels.csv``.
    """

    command = "policy-demo"

    def __init__(
        self,
        repository_factory: RepositoryFactory = FileResultRepository,
        stdout: Optional[TextIO] = None,
    ) -> None:
        super().__init__(repository_factory)
        self._stdout = stdout

    def run(self, run_config: RunConfig, out_dir: str) -> RunManifest:
        started = time.perf_counter()
        scenario = run_config.scenario()
        policy_id = run_config.demo_policy()
        spec = dataclasses.replace(run_config.problem_spec(scenario), kind=policy_id.problem_kind)
        cap = run_config.section("experiment")["brute_force_cap"]

        channels = draw_channels(scenario.geometry, scenario.placement, scenario.fading, trial_seed(run_config.seed, 0))
        outcome = solve(policy_id, channels, spec, scenario.harvester, cap)
        logger.info(
            "policy_demo_solved",
            policy=policy_id.value,
            feasible=outcome.feasible,
            m_h=outcome.m_h,
        )

        record: dict[str, Any] = {
            "problem": spec.kind.value,
            "m_s": scenario.geometry.m_s,
            "seed": run_config.seed,
            **outcome.to_record(),
        }
        out = self._stdout or sys.stdout
        out.write(json.dumps(record, sort_keys=True) + "\n")

        repository = self._repository_factory(out_dir)
        outputs = [repository.write_json("outcome.json", record)]
        if run_config.dump_channels():
            outputs.append(repository.write_table("channels.csv", channel_dump_rows(channels)))
        return self._finish(repository, run_config, outputs, started)
