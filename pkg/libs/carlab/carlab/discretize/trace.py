import functools

import numpy as np
from pydantic import BaseModel
from scipy.integrate import trapezoid

from carlab.consts import TRACE_CALIBRATION_MARGIN, TRACE_CALIBRATION_NX
from carlab.discretize.grid import Grid, RectGrid
from carlab.discretize.norms import gradient_squared, l2_squared
from carlab.errors import DomainError

CALIBRATION_EPSILONS = np.linspace(0.02, 0.98, 49)


class TraceCheck(BaseModel):
    epsilon: float
    constant: float
    lhs: float
    rhs: float
    holds: bool


def _calibration_family(grid: Grid) -> list[np.ndarray]:
    x = grid.nodes
    length = grid.length
    center = x - length / 2
    candidates = [np.ones_like(x)]
    candidates += [np.cos(k * np.pi * x / length) for k in range(1, 7)]
    for rate in np.geomspace(0.05, 50.0, 60) * np.pi / length:
        candidates += [
            np.cosh(rate * center),
            np.sinh(rate * center),
            np.exp(-rate * x),
            np.exp(-rate * (length - x)),
        ]
    return [candidate / np.max(np.abs(candidate)) for candidate in candidates]


@functools.lru_cache(maxsize=8)
def trace_constant(length: float) -> float:
    """
    K in |u|^2_{boundary} <= eps |u'|^2 + (K / eps) |u|^2 on (0, length).

    Maximized once over a fixed candidate family (constants, cosines, cosh/sinh
    profiles and boundary layers) and a grid of eps in (0, 1), then padded by
    ``TRACE_CALIBRATION_MARGIN``.
    """
    grid = Grid(length=length, nx=TRACE_CALIBRATION_NX, nt=2)
    required = 0.0
    for candidate in _calibration_family(grid):
        boundary = candidate[0] ** 2 + candidate[-1] ** 2
        grad = gradient_squared(candidate, grid)
        mass = l2_squared(candidate, grid)
        needed = CALIBRATION_EPSILONS * (boundary - CALIBRATION_EPSILONS * grad) / mass
        required = max(required, float(np.max(needed)))
    return required * (1 + TRACE_CALIBRATION_MARGIN)


def _boundary_squared(field: np.ndarray, grid: Grid | RectGrid) -> float:
    field = np.asarray(field, dtype=float)
    if isinstance(grid, RectGrid):
        values = field.reshape((-1,) + field.shape[-2:])
        vertical = np.sum(values[:, 0, :] ** 2 + values[:, -1, :] ** 2, axis=0)
        horizontal = np.sum(values[:, :, 0] ** 2 + values[:, :, -1] ** 2, axis=0)
        return float(
            trapezoid(vertical, dx=grid.hy) + trapezoid(horizontal, dx=grid.hx)
        )
    values = field.reshape((-1, field.shape[-1]))
    return float(np.sum(values[:, 0] ** 2 + values[:, -1] ** 2))


def trace_check(field: np.ndarray, epsilon: float, grid: Grid | RectGrid) -> TraceCheck:
    if not 0.0 < epsilon < 1.0:
        raise DomainError(f"trace estimate needs epsilon in (0, 1), got {epsilon}")
    if isinstance(grid, RectGrid):
        constant = trace_constant(grid.length_x) + trace_constant(grid.length_y)
    else:
        constant = trace_constant(grid.length)
    lhs = _boundary_squared(field, grid)
    rhs = epsilon * gradient_squared(field, grid) + constant / epsilon * l2_squared(
        field, grid
    )
    return TraceCheck(
        epsilon=epsilon, constant=constant, lhs=lhs, rhs=rhs, holds=bool(lhs <= rhs)
    )
