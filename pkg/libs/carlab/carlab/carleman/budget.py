import numpy as np
from pydantic import BaseModel, computed_field
from scipy.integrate import trapezoid

from carlab.carleman.weight import CarlemanWeight, ScaledValue
from carlab.consts import MAX_EXPONENT
from carlab.discretize.operators import apply_P, gradient, time_derivative
from carlab.discretize.trajectory import Trajectory
from carlab.model.coefficients import CoefficientSet


def space_integral(density: np.ndarray, traj: Trajectory) -> np.ndarray:
    """Trapezoidal integral over x of a density summed over components."""
    return trapezoid(np.sum(density, axis=-2), dx=traj.grid.h, axis=-1)


def relative_weights(traj: Trajectory, w: CarlemanWeight) -> tuple[np.ndarray, float]:
    """exp(2 s phi(t_m) - E) with E = 2 s phi(T), the largest exponent on [0, T]."""
    times = traj.grid.times
    top = float(w.exponent(traj.grid.final_time))
    return np.exp(w.exponent(times) - top), top


def _ratio(numerator: float, denominator: float) -> float:
    if numerator == 0.0:
        return 0.0
    if denominator == 0.0:
        return float("inf")
    return numerator / denominator


class CarlemanLhs(BaseModel):
    """Weighted interior energy split into its three integrals, all sharing ``exponent``."""

    time_part: float
    gradient_part: float
    state_part: float
    exponent: float

    @computed_field
    @property
    def mantissa(self) -> float:
        return self.time_part + self.gradient_part + self.state_part

    @property
    def value(self) -> ScaledValue:
        return ScaledValue(mantissa=self.mantissa, exponent=self.exponent)

    @property
    def scaled(self) -> bool:
        return self.exponent > MAX_EXPONENT


class CarlemanBudget(BaseModel):
    s: float
    lambda_: float
    exponent: float
    lhs: CarlemanLhs | None = None
    rhs_interior: float
    rhs_terminal: float
    rhs_initial: float
    bc_warning: bool = False

    @computed_field
    @property
    def rhs_total(self) -> float:
        return self.rhs_interior + self.rhs_terminal + self.rhs_initial

    @computed_field
    @property
    def c_star(self) -> float:
        lhs = self.lhs.mantissa if self.lhs is not None else 0.0
        return _ratio(lhs, self.rhs_total)

    def part(self, mantissa: float) -> ScaledValue:
        return ScaledValue(mantissa=mantissa, exponent=self.exponent)

    @property
    def scaled(self) -> bool:
        return self.exponent > MAX_EXPONENT


def lhs_car(z: Trajectory, w: CarlemanWeight) -> CarlemanLhs:
    grid = z.grid
    shift, top = relative_weights(z, w)
    phi = w.phi(grid.times)
    rate = time_derivative(z.values, grid.dt)
    slope = gradient(z.values, grid)

    def integrate(factor: np.ndarray, density: np.ndarray) -> float:
        return float(trapezoid(shift * factor * space_integral(density, z), dx=grid.dt))

    return CarlemanLhs(
        time_part=integrate(1.0 / (w.s * phi), rate**2),
        gradient_part=integrate(np.full_like(phi, w.lambda_), slope**2),
        state_part=integrate(w.s * w.lambda_**2 * phi, z.values**2),
        exponent=top,
    )


def rhs_car(
    z: Trajectory,
    coeffs: CoefficientSet,
    w: CarlemanWeight,
    residual: np.ndarray | None = None,
) -> CarlemanBudget:
    grid = z.grid
    shift, top = relative_weights(z, w)
    if residual is None:
        residual = apply_P(z, coeffs, full=True)
    interior = float(trapezoid(shift * space_integral(residual**2, z), dx=grid.dt))

    terminal, initial = z.values[-1:], z.values[:1]
    phi_end = float(w.phi(grid.final_time))
    terminal_part = float(
        (w.s * w.lambda_ * phi_end * space_integral(terminal**2, z)
         + space_integral(gradient(terminal, grid) ** 2, z))[0]
    )
    initial_part = float(
        (w.s * w.lambda_ * space_integral(initial**2, z)
         + space_integral(gradient(initial, grid) ** 2, z))[0]
    ) * np.exp(2 * w.s - top)
    return CarlemanBudget(
        s=w.s,
        lambda_=w.lambda_,
        exponent=top,
        rhs_interior=interior,
        rhs_terminal=terminal_part,
        rhs_initial=float(initial_part),
    )


def carleman_budget(
    z: Trajectory,
    coeffs: CoefficientSet,
    w: CarlemanWeight,
    residual: np.ndarray | None = None,
    bc_warning: bool = False,
) -> CarlemanBudget:
    budget = rhs_car(z, coeffs, w, residual=residual)
    return budget.model_copy(update={"lhs": lhs_car(z, w), "bc_warning": bc_warning})
