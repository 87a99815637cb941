"""Configuration module."""
from .config import CLIConfig, Config, get_config, reload_config
from .run_config import RunConfig, load_run_config, preset_names

__all__ = ['CLIConfig', 'Config', 'RunConfig', 'get_config', 'load_run_config', 'preset_names', 'reload_config']
