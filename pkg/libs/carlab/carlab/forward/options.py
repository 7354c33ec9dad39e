from enum import Enum

from pydantic import Field
from pydantic.dataclasses import dataclass

from carlab.consts import DEFAULT_PICARD_MAX, DEFAULT_PICARD_TOL


class TimeScheme(str, Enum):
    BACKWARD_EULER = "backward_euler"
    CRANK_NICOLSON = "crank_nicolson"


@dataclass
class SolveOptions:
    scheme: TimeScheme = TimeScheme.CRANK_NICOLSON
    picard_max: int = Field(default=DEFAULT_PICARD_MAX, ge=1)
    picard_tol: float = Field(default=DEFAULT_PICARD_TOL, gt=0)
    freeze_nonlinearity: bool = False

    @property
    def implicitness(self) -> float:
        return 1.0 if self.scheme == TimeScheme.BACKWARD_EULER else 0.5
