from carlab_runner.config import RunConfig, resolve_config
from carlab_runner.models import Command, ExitCode, InvariantCheck, RunOutcome
from carlab_runner.runner import run

__all__ = [
    "Command",
    "ExitCode",
    "InvariantCheck",
    "RunConfig",
    "RunOutcome",
    "resolve_config",
    "run",
]
