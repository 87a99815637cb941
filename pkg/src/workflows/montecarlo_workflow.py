"""Monte-Carlo policy comparison workflow."""
import time

import structlog

from src.config.run_config import RunConfig
from src.domain.models import RunManifest
from src.montecarlo.experiment import channel_dump, run_experiment
from src.montecarlo.statistics import cdf_table, summarize
from src.workflows.workflow import Workflow

logger = structlog.get_logger(__name__)


class MonteCarloWorkflow(Workflow):
    """Run every configured policy on shared channel draws.

    Writes ``samples.csv`` (one row per trial and policy), ``cdf.csv``
    (empirical CDF of each policy's objective in dB), ``summary.json``
    and finally ``manifest.json``.  With ``experiment.dump_channels`` the
    drawn realizations also go to ``channels.csv``.
    """

    command = "montecarlo"

    def run(self, run_config: RunConfig, out_dir: str) -> RunManifest:
        started = time.perf_counter()
        config = run_config.experiment_config()
        logger.info("montecarlo_workflow_started", source=run_config.source, out_dir=out_dir)

        result = run_experiment(config)

        repository = self._repository_factory(out_dir)
        outputs = [
            repository.write_table("samples.csv", result.samples_frame()),
            repository.write_table("cdf.csv", cdf_table(result)),
            repository.write_json("summary.json", summarize(result)),
        ]
        if run_config.dump_channels():
            outputs.append(repository.write_table("channels.csv", channel_dump(config)))
        logger.info("montecarlo_workflow_complete", trials=config.trials, out_dir=out_dir)
        return self._finish(repository, run_config, outputs, started)
