"""Command line and run configuration."""
from .config import EXPERIMENTS, RunConfig, dump_run_config, load_run_config, loads_run_config
from .main import main, run

__all__ = ["EXPERIMENTS", "RunConfig", "dump_run_config", "load_run_config", "loads_run_config", "main", "run"]
