"""Configuration management for the RIS harvesting engine."""
import argparse
import os
from dataclasses import dataclass, field
from typing import Optional, Sequence

import structlog

from src.domain.errors import ConfigError

logger = structlog.get_logger(__name__)

COMMANDS = ("montecarlo", "tracking", "policy-demo")


def _positive_int(name: str, raw: str) -> int:
    try:
        value = int(raw)
    except ValueError:
        raise ConfigError(f"{name} must be a whole number, got {raw!r}") from None
    if value < 1:
        raise ConfigError(f"{name} must be >= 1, got {value}")
    return value


@dataclass
class Config:
    """Process-wide settings.

    All options come from environment variables.
    """
    log_level: Optional[str] = None
    out_dir: str = "results"
    threads: Optional[int] = None

    @classmethod
    def from_env(cls) -> 'Config':
        """Load all configuration from environment variables only.

        Returns:
            Config instance with values from environment variables

        Raises:
            ConfigError: If RIS_THREADS is not a positive whole number.
        """
        threads = os.getenv('RIS_THREADS')
        return cls(
            log_level=os.getenv('LOG_LEVEL'),
            out_dir=os.getenv('RIS_OUT_DIR', 'results'),
            threads=_positive_int('RIS_THREADS', threads) if threads else None,
        )


# Global config instance - lazy loaded
_config: Optional[Config] = None


def get_config() -> Config:
    """Get the global configuration instance.

    This is lazy-loaded on first access and reused for subsequent calls.
    """
    global _config
    if _config is None:
        _config = Config.from_env()
    return _config


def reload_config() -> Config:
    """Force reload configuration from environment.

    Useful for testing or when environment changes at runtime.
    """
    global _config
    _config = Config.from_env()
    return _config


def _u64(raw: str) -> int:
    try:
        value = int(raw)
    except ValueError:
        raise argparse.ArgumentTypeError(f"seed must be a whole number, got {raw!r}") from None
    if not 0 <= value < 2 ** 64:
        raise argparse.ArgumentTypeError(f"seed must lie in 0..2^64-1, got {value}")
    return value


def _threads(raw: str) -> int:
    try:
        return _positive_int("--threads", raw)
    except ConfigError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def build_parser() -> argparse.ArgumentParser:
    """Argument parser with the three subcommands and their shared flags."""
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument(
        "--config",
        default=None,
        help="Preset name or path to a YAML config (default: the command's reference preset)",
    )
    common.add_argument("--out", default=None, help="Output directory (default: RIS_OUT_DIR or ./results)")
    common.add_argument("--seed", type=_u64, default=None, help="Master seed, overrides experiment.seed")
    common.add_argument("--threads", type=_threads, default=None, help="Worker threads for Monte-Carlo trials")
    common.add_argument(
        "--set",
        dest="overrides",
        action="append",
        default=[],
        metavar="KEY=VALUE",
        help="Override one config entry, e.g. --set sigma_t_sq=0 (repeatable)",
    )
    common.add_argument("--log-level", default=None, help="DEBUG, INFO, WARNING or ERROR")

    parser = argparse.ArgumentParser(
        prog="ris-harvest",
        description="Simulate and optimize RIS power splitting between harvesting and reflection.",
    )
    commands = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")
    montecarlo = commands.add_parser("montecarlo", parents=[common], help="Run a Monte-Carlo policy comparison")
    commands.add_parser("tracking", parents=[common], help="Run the user-mobility tracking study")
    demo = commands.add_parser("policy-demo", parents=[common], help="Solve one channel draw and print the outcome")
    for sub in (montecarlo, demo):
        sub.add_argument(
            "--dump-channels",
            action="store_true",
            help="Also write the drawn channels to channels.csv (same as --set dump_channels=true)",
        )
    return parser


@dataclass
class CLIConfig:
    """CLI argument configuration for workflow execution.

    Parses command-line arguments and provides a clean interface
    for main.py to dispatch to workflows.
    """
    command: str
    config: Optional[str] = None
    out: Optional[str] = None
    seed: Optional[int] = None
    threads: Optional[int] = None
    overrides: list[str] = field(default_factory=list)
    log_level: Optional[str] = None
    dump_channels: bool = False

    @classmethod
    def from_cli(cls, argv: Optional[Sequence[str]] = None) -> 'CLIConfig':
        """Parse CLI arguments and return a CLIConfig instance.

        Args:
            argv: Arguments without the program name; ``sys.argv[1:]`` when None.

        Returns:
            CLIConfig instance with values from command-line arguments
        """
        args = build_parser().parse_args(argv)
        return cls(
            command=args.command,
            config=args.config,
            out=args.out,
            seed=args.seed,
            threads=args.threads,
            overrides=list(args.overrides),
            log_level=args.log_level,
            dump_channels=getattr(args, "dump_channels", False),
        )

    def effective_overrides(self, config: Optional[Config] = None) -> list[str]:
        """``--set`` entries followed by the ones implied by ``--seed``, ``--threads`` and ``--dump-channels``.

        Without ``--threads``, RIS_THREADS (if set) picks the worker count.
        """
        overrides = list(self.overrides)
        if self.seed is not None:
            overrides.append(f"experiment.seed={self.seed}")
        threads = self.threads if self.threads is not None else (config.threads if config else None)
        if threads is not None:
            overrides.append(f"experiment.threads={threads}")
        if self.dump_channels:
            overrides.append("experiment.dump_channels=true")
        return overrides

    def out_dir(self, config: Config) -> str:
        return self.out or config.out_dir
