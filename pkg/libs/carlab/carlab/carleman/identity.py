import numpy as np
from pydantic import BaseModel
from scipy.integrate import trapezoid

from carlab.carleman.budget import relative_weights, space_integral
from carlab.carleman.weight import CarlemanWeight
from carlab.discretize.operators import (
    apply_A_series,
    apply_P,
    gradient,
    time_derivative,
)
from carlab.discretize.trajectory import Trajectory
from carlab.model.coefficients import CoefficientSet


def _relative_defect(first: float, second: float) -> float:
    scale = max(abs(first), abs(second))
    return 0.0 if scale == 0.0 else abs(first - second) / scale


class J1Check(BaseModel):
    lhs_j1: float
    rhs_j1: float
    defect: float
    exponent: float


class EnergyCheck(BaseModel):
    pairing: float
    slice_terms: float
    weight_term: float
    dissipation: float
    gradient_term: float
    defect: float
    exponent: float


def j1_identity_check(z: Trajectory, w: CarlemanWeight) -> J1Check:
    """
    J1 = -2 s lambda int_Q phi (d_t v, v) with v = exp(s phi) z, directly and after
    integrating by parts in time. Both sides carry the factor exp(-E) of the budget.
    """
    grid = z.grid
    shift, top = relative_weights(z, w)
    phi = w.phi(grid.times)
    scaled_v = np.sqrt(shift)[:, None, None] * z.values
    rate = time_derivative(scaled_v, grid.dt)
    direct = -2 * w.s * w.lambda_ * float(
        trapezoid(phi * space_integral(rate * scaled_v, z), dx=grid.dt)
    )

    mass = space_integral(z.values**2, z)
    slices = mass[-1] * phi[-1] * shift[-1] - mass[0] * phi[0] * shift[0]
    parts = -w.s * w.lambda_ * slices + w.s * w.lambda_**2 * float(
        trapezoid(shift * phi * mass, dx=grid.dt)
    )
    return J1Check(
        lhs_j1=direct,
        rhs_j1=float(parts),
        defect=_relative_defect(direct, float(parts)),
        exponent=top,
    )


def weighted_energy_check(
    z: Trajectory, coeffs: CoefficientSet, w: CarlemanWeight
) -> EnergyCheck:
    """
    Pairing of P z with z exp(2 s phi):

        2 int_Q (Pz, z) e = [int |z|^2 e]_0^T - 2 s lambda int_Q phi |z|^2 e - 2 int_Q (Az, z) e

    ``gradient_term`` is 2 sigma int_Q |grad z|^2 e, the lower bound ellipticity
    gives for the dissipation when b = c = 0 under Dirichlet data.
    """
    grid = z.grid
    shift, top = relative_weights(z, w)
    phi = w.phi(grid.times)
    residual = apply_P(z, coeffs, full=True)
    action = apply_A_series(coeffs, grid, z.bc, z.values, grid.times)

    def integrate(density: np.ndarray, factor=1.0) -> float:
        return float(trapezoid(shift * factor * space_integral(density, z), dx=grid.dt))

    pairing = 2 * integrate(residual * z.values)
    mass = space_integral(z.values**2, z)
    slice_terms = float(mass[-1] * shift[-1] - mass[0] * shift[0])
    weight_term = 2 * w.s * w.lambda_ * integrate(z.values**2, phi)
    dissipation = -2 * integrate(action * z.values)
    gradient_term = 2 * coeffs.sigma * integrate(gradient(z.values, grid) ** 2)
    expected = slice_terms - weight_term + dissipation
    return EnergyCheck(
        pairing=pairing,
        slice_terms=slice_terms,
        weight_term=weight_term,
        dissipation=dissipation,
        gradient_term=gradient_term,
        defect=_relative_defect(pairing, expected),
        exponent=top,
    )
