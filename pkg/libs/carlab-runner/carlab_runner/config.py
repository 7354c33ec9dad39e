import math
import os
from pathlib import Path
from typing import Any, Literal

import numpy as np
from carlab.consts import (
    DEFAULT_DELTA_LIST,
    DEFAULT_LAMBDA_LIST,
    DEFAULT_MAX_CONCURRENCY,
    DEFAULT_S_LIST,
    DEFAULT_VALIDATION_SAMPLES,
)
from carlab.errors import ConfigurationError
from carlab.forward import TimeScheme
from carlab.model import (
    BoundaryCondition,
    BoundaryKind,
    CoefficientSet,
    PresetName,
    Semilinearity,
    preset,
)
from carlab.reconstruct import FilterKind
from carlab.stability import PerturbationFamily
from carlab.utils.pythonic import deep_merge
from pydantic import BaseModel, ConfigDict, Field, ValidationError, model_validator

from carlab_runner.models import Command

try:
    import tomllib
except ImportError:
    import tomli as tomllib  # type: ignore[no-redef]

OUTPUT_DIR_ENV = "CARLAB_OUTPUT_DIR"
DEFAULT_OUTPUT_DIR = "carlab-runs"
KEY_ALIASES = {"T": "final_time", "lambda": "lambda_"}
INLINE_COMMANDS = {Command.FORWARD, Command.CARLEMAN, Command.RECONSTRUCT, Command.VALIDATE}


def default_output_dir() -> Path:
    return Path(os.environ.get(OUTPUT_DIR_ENV, DEFAULT_OUTPUT_DIR))


class InlineCoefficients(BaseModel):
    """Constant-coefficient operator given directly in the config file (n = 1)."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    diffusion: list[list[float]]
    reaction: list[list[float]] | None = None
    sigma: float = Field(gt=0)
    name: str = "inline"

    @model_validator(mode="after")
    def _check_shapes(self):
        size = len(self.diffusion)
        for label, matrix in (("diffusion", self.diffusion), ("reaction", self.reaction)):
            if matrix is None:
                continue
            if len(matrix) != size or any(len(row) != size for row in matrix):
                raise ValueError(f"{label} must be a square {size}x{size} matrix")
        return self

    def build(
        self, boundary: BoundaryKind, robin_p: float
    ) -> tuple[CoefficientSet, BoundaryCondition, Semilinearity]:
        diffusion = np.asarray(self.diffusion, dtype=float)
        bc = BoundaryCondition(kind=boundary)
        coeffs = CoefficientSet.from_constants(
            diffusion.reshape(diffusion.shape + (1, 1)),
            c=None if self.reaction is None else np.asarray(self.reaction, dtype=float),
            p=robin_p if boundary == BoundaryKind.ROBIN else None,
            sigma=self.sigma,
            name=self.name,
        )
        return coeffs, bc, Semilinearity.zero()


class RunConfig(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid", populate_by_name=True)

    command: Command
    preset: PresetName | None = None
    coefficients: InlineCoefficients | None = None
    boundary: BoundaryKind = BoundaryKind.DIRICHLET
    robin_p: float = Field(default=0.5, ge=0)
    components: int = Field(default=1, ge=1)

    length: float = Field(default=math.pi, gt=0)
    nx: int = Field(default=200, ge=3)
    nt: int = Field(default=2000, ge=2)
    final_time: float = Field(default=1.0, gt=0, alias="T")

    t0: float = Field(default=0.5, gt=0)
    lambda_: float = Field(default=4.0, gt=0, alias="lambda")
    alpha: float = Field(default=0.5, gt=0, lt=1)
    s_list: list[float] = Field(default_factory=lambda: list(DEFAULT_S_LIST), min_length=1)
    lambda_list: list[float] = Field(
        default_factory=lambda: list(DEFAULT_LAMBDA_LIST), min_length=1
    )
    eps_list: list[float] | None = None
    delta_list: list[float] = Field(
        default_factory=lambda: list(DEFAULT_DELTA_LIST), min_length=2
    )
    perturbation: PerturbationFamily = PerturbationFamily.SINGLE_MODE
    filter: FilterKind = FilterKind.TIKHONOV
    scheme: TimeScheme = TimeScheme.CRANK_NICOLSON
    samples: int = Field(default=DEFAULT_VALIDATION_SAMPLES, ge=1)
    trajectory_stride: int = Field(default=1, ge=1)
    terminal: Path | None = None
    noise_level: float = Field(default=0.0, ge=0, allow_inf_nan=False)

    seed: int = 0
    max_concurrency: int = Field(default=DEFAULT_MAX_CONCURRENCY, ge=1)
    output_dir: Path = Field(default_factory=default_output_dir)
    log_level: Literal["DEBUG", "INFO", "WARNING", "ERROR"] = "WARNING"

    @model_validator(mode="after")
    def _check_problem(self):
        if self.preset is not None and self.coefficients is not None:
            raise ValueError("give either a preset or inline coefficients, not both")
        if self.coefficients is not None and self.command not in INLINE_COMMANDS:
            raise ValueError(f"'{self.command.value}' runs on presets only")
        if self.command == Command.HOLDER and self.t0 >= self.final_time:
            raise ValueError(f"t0 must lie before T, got t0={self.t0}, T={self.final_time}")
        if self.terminal is not None and self.command != Command.RECONSTRUCT:
            raise ValueError("terminal data applies to reconstruct only")
        return self

    @property
    def resolved_preset(self) -> PresetName:
        return self.preset or PresetName.HEAT1D

    def problem(self) -> tuple[CoefficientSet, BoundaryCondition, Semilinearity]:
        if self.coefficients is not None:
            return self.coefficients.build(self.boundary, self.robin_p)
        return preset(
            self.resolved_preset,
            components=self.components,
            boundary=self.boundary,
            robin_p=self.robin_p,
        )

    def manifest_dict(self) -> dict[str, Any]:
        return self.model_dump(mode="json", by_alias=True, exclude={"output_dir", "log_level"})


def read_config_file(path: Path) -> dict[str, Any]:
    try:
        with open(path, "rb") as f:
            return tomllib.load(f)
    except tomllib.TOMLDecodeError as e:
        # the decoder reports line and column in its message
        raise ConfigurationError(f"{path}: {e}") from e
    except OSError as e:
        raise ConfigurationError(f"cannot read config file {path}: {e.strerror}") from e


def describe_validation_error(error: ValidationError) -> str:
    lines = []
    for detail in error.errors():
        location = ".".join(str(part) for part in detail["loc"]) or "config"
        lines.append(f"{location}: {detail['msg']}")
    return "\n".join(lines)


def resolve_config(
    command: Command, config_path: Path | None = None, overrides: dict | None = None
) -> RunConfig:
    """File values first, then every flag that was actually given."""
    values = read_config_file(config_path) if config_path else {}
    values = {KEY_ALIASES.get(key, key): value for key, value in values.items()}
    file_command = values.pop("command", None)
    if file_command is not None and file_command != command.value:
        raise ConfigurationError(
            f"config file is for '{file_command}', but '{command.value}' was requested"
        )
    given = {key: value for key, value in (overrides or {}).items() if value is not None}
    merged = deep_merge(values, given)
    try:
        return RunConfig(command=command, **merged)
    except ValidationError as e:
        raise ConfigurationError(describe_validation_error(e)) from e
