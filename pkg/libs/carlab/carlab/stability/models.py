from enum import Enum

from pydantic import BaseModel, Field, field_validator, model_validator
from pydantic.dataclasses import dataclass

from carlab.consts import DEFAULT_HIGH_MODE, DEFAULT_MAX_CONCURRENCY
from carlab.discretize.grid import Grid
from carlab.forward.options import TimeScheme
from carlab.model.boundary import BoundaryKind
from carlab.model.presets import PresetName


class PerturbationFamily(str, Enum):
    SINGLE_MODE = "single_mode"
    TWO_MODE = "two_mode"
    HIGH_MODE = "high_mode"
    RANDOM_SMOOTH = "random_smooth"


def _default_grid() -> Grid:
    return Grid(nx=200, nt=2000)


def _strictly_decreasing(values: list[float], allow_zero: bool) -> list[float]:
    if not values:
        raise ValueError("epsilon list must not be empty")
    floor_ok = all(v >= 0 for v in values) if allow_zero else all(v > 0 for v in values)
    if not floor_ok:
        raise ValueError(f"epsilon values must be {'nonnegative' if allow_zero else 'positive'}")
    if any(later >= earlier for earlier, later in zip(values, values[1:])):
        raise ValueError("epsilon values must be strictly decreasing")
    return values


@dataclass
class TwinExperiment:
    preset: PresetName = PresetName.HEAT1D
    grid: Grid = Field(default_factory=_default_grid)
    perturbation: PerturbationFamily = PerturbationFamily.SINGLE_MODE
    high_mode: int = Field(default=DEFAULT_HIGH_MODE, ge=1)
    boundary: BoundaryKind = BoundaryKind.DIRICHLET
    robin_p: float = 0.5
    components: int = Field(default=1, ge=1)
    scheme: TimeScheme = TimeScheme.CRANK_NICOLSON
    seed: int = 0
    max_concurrency: int = Field(default=DEFAULT_MAX_CONCURRENCY, ge=1)


@dataclass
class HolderConfig(TwinExperiment):
    t0: float = Field(default=0.5, gt=0)
    lambda_: float = Field(default=4.0, gt=0)
    eps_list: list[float] = Field(default_factory=lambda: [1e-1, 1e-2, 1e-3, 1e-4])
    M: float = Field(default=10.0, gt=0)
    base_amplitude: float = 1.0
    calibrate_on_linear_part: bool | None = None
    calibration_margin: float | None = Field(default=None, gt=0)

    @field_validator("eps_list")
    @classmethod
    def _check_eps(cls, value: list[float]) -> list[float]:
        return _strictly_decreasing(value, allow_zero=False)

    @model_validator(mode="after")
    def _check_t0(self):
        if not self.t0 < self.grid.final_time:
            raise ValueError(f"t0={self.t0} must lie strictly inside (0, {self.grid.final_time})")
        return self


@dataclass
class LogConfig(TwinExperiment):
    alpha: float = Field(default=0.5, gt=0, lt=1)
    eps_list: list[float] = Field(
        default_factory=lambda: [1e-2, 1e-3, 1e-4, 1e-5, 1e-6]
    )

    @field_validator("eps_list")
    @classmethod
    def _check_eps(cls, value: list[float]) -> list[float]:
        return _strictly_decreasing(value, allow_zero=True)


class ExperimentRecord(BaseModel):
    epsilon: float
    E_T: float | None = None
    E_t0: float | None = None
    E_0: float | None = None
    D: float | None = None
    M1: float | None = None
    ratio: float | None = None
    theta: float | None = None
    product: float | None = None
    s: float | None = None
    bound: float | None = None
    holder_residual: float | None = None
    identity_defect: float | None = None
    apriori_ok: bool | None = None
    excluded: bool = False
    failure: str | None = None

    @property
    def usable(self) -> bool:
        return not self.excluded and self.failure is None


class HolderResult(BaseModel):
    records: list[ExperimentRecord]
    theta: float
    slope: float
    slope_consistent: bool
    constant: float
    violations: int
    failures: int

    @property
    def passed(self) -> bool:
        return self.slope_consistent and self.violations == 0 and self.failures == 0


class LogResult(BaseModel):
    records: list[ExperimentRecord]
    alpha: float
    bounded: bool
    nonincreasing: bool
    failures: int

    @property
    def passed(self) -> bool:
        return self.bounded and self.nonincreasing and self.failures == 0
