"""User-mobility tracking workflow."""
import time

import pandas as pd
import structlog

from src.config.run_config import RunConfig
from src.domain.errors import UndefinedCadenceError
from src.domain.models import RunManifest
from src.tracking.tracking import (
    PDAVG_COLUMNS,
    dynamic_power_curve,
    event_spacings,
    simulate_tracking,
)
from src.workflows.workflow import Workflow

logger = structlog.get_logger(__name__)


class TrackingWorkflow(Workflow):
    """Walk the user along the path and record when the surface must re-optimize.

    Outputs: ``trace.csv`` (continuous and stale SNR per sample),
    ``events.csv``, ``spacings.csv`` (cadence per segment), ``pdavg.csv``
    (average dynamic consumption per reconfiguration duration and
    P_dynamic) and ``manifest.json``.

    When the run has fewer than two events the cadence is undefined;
    ``pdavg.csv`` is then written with its header only and a warning is
    logged.
    """

    command = "tracking"

    def run(self, run_config: RunConfig, out_dir: str) -> RunManifest:
        started = time.perf_counter()
        scenario = run_config.tracking_scenario()
        settings = run_config.section("tracking")
        logger.info("tracking_workflow_started", source=run_config.source, out_dir=out_dir)

        result = simulate_tracking(scenario)

        curves = []
        for duration in settings["reconfig_durations"]:
            try:
                curves.append(dynamic_power_curve(result.events, scenario, duration, settings["p_dynamic_grid"]))
            except UndefinedCadenceError as exc:
                logger.warning("cadence_undefined", reconfig_duration_s=duration, reason=str(exc))
        pdavg = pd.concat(curves, ignore_index=True) if curves else pd.DataFrame(columns=PDAVG_COLUMNS)

        repository = self._repository_factory(out_dir)
        outputs = [
            repository.write_table("trace.csv", result.trace_frame()),
            repository.write_table("events.csv", result.events_frame()),
            repository.write_table("spacings.csv", event_spacings(result.events, result.start)),
            repository.write_table("pdavg.csv", pdavg),
        ]
        logger.info("tracking_workflow_complete", events=len(result.events), out_dir=out_dir)
        return self._finish(repository, run_config, outputs, started)
