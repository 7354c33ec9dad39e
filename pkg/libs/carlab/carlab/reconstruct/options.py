import math
from enum import Enum

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator
from pydantic.dataclasses import dataclass


class FilterKind(str, Enum):
    TIKHONOV = "tikhonov"
    TRUNCATION = "truncation"


@dataclass
class ReconstructOptions:
    filter: FilterKind = FilterKind.TIKHONOV
    alpha: float = Field(default=0.5, gt=0, lt=1)
    noise_level: float = Field(default=0.0, ge=0)

    @field_validator("noise_level")
    @classmethod
    def _finite(cls, value: float) -> float:
        if not math.isfinite(value):
            raise ValueError("noise level must be finite")
        return value

    @property
    def gamma(self) -> float:
        return self.noise_level

    @property
    def log_rate_s(self) -> float | None:
        if not 0.0 < self.noise_level < 1.0:
            return None
        return math.log(1.0 / self.noise_level) ** self.alpha


class ReconstructionResult(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed=True)

    estimate: np.ndarray
    retained_modes: int
    filter: FilterKind
    gamma: float
    s: float | None = None


class ReconstructionRecord(BaseModel):
    delta: float
    error: float
    retained_modes: int
    gamma: float
    s: float | None = None


class ReconstructionSweep(BaseModel):
    records: list[ReconstructionRecord]
    alpha: float
    filter: FilterKind
    noise_mode: int
    slope: float
    slope_ok: bool = Field(description="fitted slope <= -alpha + slack")
