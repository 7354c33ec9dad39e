import math

import numpy as np
from pydantic import BaseModel

from carlab.errors import DomainError


def theta(t0: float, final_time: float, lambda_: float) -> float:
    """Hoelder exponent mu(t0) / (3 phi(T) + mu(t0)) with phi = exp(lambda t)."""
    if lambda_ <= 0:
        raise DomainError(f"lambda must be positive, got {lambda_}")
    if t0 <= 0:
        raise DomainError(f"t0 must be positive, got {t0}; t0 = 0 follows the logarithmic rate")
    if t0 > final_time:
        raise DomainError(f"t0={t0} exceeds the final time {final_time}")
    mu = math.expm1(lambda_ * t0)
    return mu / (3 * math.exp(lambda_ * final_time) + mu)


class HolderBound(BaseModel):
    s: float
    bound: float
    theta: float


def optimal_carleman_parameter(
    terminal_norm: float, apriori: float, t0: float, final_time: float, lambda_: float
) -> HolderBound:
    """
    Minimize E^2 exp(3 s phi(T)) + M^2 exp(-s mu(t0)) over s >= 0.

    The minimizer balances both terms and the minimum scales like
    E^{2 theta} M^{2 (1 - theta)}; ``bound`` is its square root.
    """
    exponent = theta(t0, final_time, lambda_)
    if terminal_norm == 0.0:
        return HolderBound(s=math.inf, bound=0.0, theta=exponent)
    phi_end = math.exp(lambda_ * final_time)
    mu = math.expm1(lambda_ * t0)
    log_ratio = math.log(mu * apriori**2 / (3 * phi_end * terminal_norm**2))
    s = max(log_ratio / (3 * phi_end + mu), 0.0)
    log_bound = np.logaddexp(
        2 * math.log(terminal_norm) + 3 * s * phi_end, 2 * math.log(apriori) - s * mu
    )
    return HolderBound(s=s, bound=float(np.exp(0.5 * log_bound)), theta=exponent)


def log_rate_parameter(data_norm: float, alpha: float) -> float:
    """s = (log 1/D)^alpha, defined for 0 < D < 1."""
    if not 0.0 < alpha < 1.0:
        raise DomainError(f"alpha must lie in (0, 1), got {alpha}")
    if not 0.0 < data_norm < 1.0:
        raise DomainError(f"log-rate parameter needs 0 < D < 1, got D={data_norm}")
    return math.log(1.0 / data_norm) ** alpha


def log_bound(data_norm: float, apriori: float, alpha: float, constant: float = 1.0) -> float:
    """C D^2 exp(C s) + C M1^2 / s at s = (log 1/D)^alpha."""
    s = log_rate_parameter(data_norm, alpha)
    return constant * data_norm**2 * math.exp(constant * s) + constant * apriori**2 / s
