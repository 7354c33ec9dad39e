from enum import Enum, IntEnum
from pathlib import Path
from typing import Callable

from pydantic import BaseModel, Field


class Command(str, Enum):
    FORWARD = "forward"
    CARLEMAN = "carleman"
    HOLDER = "holder"
    LOGRATE = "lograte"
    RECONSTRUCT = "reconstruct"
    VALIDATE = "validate"


class ExitCode(IntEnum):
    PASSED = 0
    CONFIG_ERROR = 1
    NUMERICAL_FAILURE = 2
    INVARIANT_VIOLATION = 3


class InvariantCheck(BaseModel):
    name: str
    passed: bool
    detail: str = ""


class Table(BaseModel):
    name: str
    fieldnames: list[str]
    rows: list[dict]


class Export(BaseModel):
    """A CSV produced by one of the library writers instead of table rows."""

    name: str
    write: Callable[[Path], None]


class CommandResult(BaseModel):
    """What a command handler hands back to the runner before anything touches disk."""

    tables: list[Table]
    checks: list[InvariantCheck] = Field(default_factory=list)
    summary: list[str] = Field(default_factory=list)
    numerical_failures: list[str] = Field(default_factory=list)
    exports: list[Export] = Field(default_factory=list)


class RunOutcome(BaseModel):
    command: Command
    exit_code: ExitCode
    output_dir: Path | None = None
    checks: list[InvariantCheck] = Field(default_factory=list)
    artifacts: list[Path] = Field(default_factory=list)
    message: str = ""

    @property
    def failed_checks(self) -> list[InvariantCheck]:
        return [check for check in self.checks if not check.passed]
