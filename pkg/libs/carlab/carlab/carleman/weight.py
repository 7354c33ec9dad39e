import math

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from carlab.consts import MAX_EXPONENT
from carlab.errors import DomainError


class CarlemanWeight(BaseModel):
    """phi(t) = exp(lambda t), mu(t) = phi(t) - 1, weight factor exp(2 s phi(t))."""

    model_config = ConfigDict(frozen=True)

    lambda_: float = Field(gt=0)
    s: float = Field(gt=0)

    def phi(self, t):
        return np.exp(self.lambda_ * np.asarray(t, dtype=float))

    def mu(self, t):
        return np.expm1(self.lambda_ * np.asarray(t, dtype=float))

    def exponent(self, t):
        return 2 * self.s * self.phi(t)


class WeightValue(BaseModel):
    phi: float
    mu: float
    log_factor: float
    factor: float | None
    scaled: bool


class ScaledValue(BaseModel):
    """``mantissa * exp(exponent)``; the exponent is shared across a budget."""

    mantissa: float
    exponent: float

    @property
    def log_value(self) -> float:
        return math.log(self.mantissa) + self.exponent if self.mantissa > 0 else -math.inf

    @property
    def value(self) -> float:
        if self.mantissa == 0.0:
            return 0.0
        if self.log_value > MAX_EXPONENT:
            return math.inf
        return self.mantissa * math.exp(self.exponent)


def weight(t: float, w: CarlemanWeight, final_time: float | None = None) -> WeightValue:
    if t < 0 or (final_time is not None and t > final_time):
        raise DomainError(f"weight evaluated outside [0, T]: t={t}")
    log_factor = float(w.exponent(t))
    scaled = log_factor > MAX_EXPONENT
    return WeightValue(
        phi=float(w.phi(t)),
        mu=float(w.mu(t)),
        log_factor=log_factor,
        factor=None if scaled else math.exp(log_factor),
        scaled=scaled,
    )
