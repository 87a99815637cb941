"""Main entry point for the RIS harvesting simulator."""
import sys
from typing import Optional, Sequence

import structlog
from dotenv import load_dotenv

from src.config.config import CLIConfig, get_config
from src.config.logging_config import configure
from src.config.run_config import load_run_config
from src.domain.errors import ConfigError, DomainError
from src.workflows.workflow_factory import create_workflow

logger = structlog.get_logger(__name__)

EXIT_OK = 0
EXIT_DOMAIN_ERROR = 1
EXIT_CONFIG_ERROR = 2


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Parse CLI arguments, load the scenario and run the requested workflow.

    Returns:
        0 on success, 1 when the run is refused (e.g. the brute-force cap),
        2 on configuration errors.  argparse exits with 2 on bad flags.
    """
    load_dotenv()
    cli = CLIConfig.from_cli(argv)
    configure(cli.log_level)

    try:
        env = get_config()
        run_config = load_run_config(cli.config, cli.effective_overrides(env), command=cli.command)
        workflow = create_workflow(cli.command)
        manifest = workflow.run(run_config, cli.out_dir(env))
    except ConfigError as exc:
        logger.error("config_error", command=cli.command, error=str(exc))
        print(f"ris-harvest: error: {exc}", file=sys.stderr)
        return EXIT_CONFIG_ERROR
    except DomainError as exc:
        logger.error("run_refused", command=cli.command, error=str(exc))
        print(f"ris-harvest: error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN_ERROR

    logger.info("workflow_complete", workflow=cli.command, outputs=[o.name for o in manifest.outputs])
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
