"""Workflow interface for simulation runs."""
import time
from abc import ABC, abstractmethod
from collections.abc import Callable
from typing import Sequence

import structlog

from src import __version__
from src.config.run_config import RunConfig
from src.domain.models import OutputFile, RunManifest
from src.repository.file_result_repository import FileResultRepository
from src.repository.result_repository import ResultRepository

logger = structlog.get_logger(__name__)

RepositoryFactory = Callable[[str], ResultRepository]


class Workflow(ABC):
    """Abstract workflow interface.

    A workflow turns a resolved :class:`RunConfig` into result files in
    an output directory and finishes by writing the run manifest.  The
    manifest carries the resolved configuration, so loading it again with
    ``--config manifest.json`` reproduces every output.
    """

    command: str = ""

    def __init__(self, repository_factory: RepositoryFactory = FileResultRepository) -> None:
        self._repository_factory = repository_factory

    @abstractmethod
    def run(self, run_config: RunConfig, out_dir: str) -> RunManifest:
        """Run the workflow and write its outputs under *out_dir*.

        Args:
            run_config: Fully resolved scenario configuration.
            out_dir: Directory receiving the result files.

        Returns:
            The manifest that was written

        Raises:
            ConfigError: If the configuration cannot build the run.
            DomainError: If the run itself is refused (e.g. the brute-force cap).
        """

    def _finish(
        self,
        repository: ResultRepository,
        run_config: RunConfig,
        outputs: Sequence[OutputFile],
        started: float,
    ) -> RunManifest:
        manifest = RunManifest(
            tool_version=__version__,
            command=self.command,
            config=run_config.to_dict(),
            master_seed=run_config.seed,
            duration_s=time.perf_counter() - started,
            outputs=list(outputs),
        )
        repository.write_manifest(manifest)
        logger.info(
            "run_manifest_written",
            command=self.command,
            outputs=[o.name for o in outputs],
            duration_s=manifest.duration_s,
        )
        return manifest
