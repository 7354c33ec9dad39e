import logging

import numpy as np
import scipy.linalg

from carlab.consts import (
    NOISELESS_AMPLIFICATION_CAP,
    NOISELESS_COEFFICIENT_FLOOR,
    SYMMETRY_TOLERANCE,
)
from carlab.discretize.grid import Grid
from carlab.discretize.operators import assemble_A, from_vector, to_vector
from carlab.errors import UnsupportedConfigurationError
from carlab.model.boundary import BoundaryCondition
from carlab.model.coefficients import CoefficientSet
from carlab.reconstruct.options import FilterKind, ReconstructOptions, ReconstructionResult

logger = logging.getLogger(__name__)


def _require_self_adjoint(coeffs: CoefficientSet, grid: Grid, bc: BoundaryCondition):
    if not bc.is_dirichlet:
        raise UnsupportedConfigurationError("reconstruction supports Dirichlet conditions only")
    if not coeffs.time_independent:
        raise UnsupportedConfigurationError("reconstruction needs time-independent coefficients")
    points = grid.points
    if np.any(coeffs.drift(points, 0.0) != 0.0):
        raise UnsupportedConfigurationError("reconstruction needs b = 0")
    a = coeffs.diffusion(points, 0.0)
    c = coeffs.reaction(points, 0.0)
    scale = max(float(np.abs(a).max()), 1.0)
    if np.abs(a - a.transpose(1, 0, 3, 2, 4)).max() > SYMMETRY_TOLERANCE * scale:
        raise UnsupportedConfigurationError("reconstruction needs a symmetric diffusion tensor")
    if np.abs(c - c.transpose(1, 0, 2)).max() > SYMMETRY_TOLERANCE * max(float(np.abs(c).max()), 1.0):
        raise UnsupportedConfigurationError("reconstruction needs a symmetric reaction matrix")


def spectrum(coeffs: CoefficientSet, grid: Grid) -> tuple[np.ndarray, np.ndarray]:
    """Eigenpairs (mu, V) of -A on the interior unknowns, mu ascending, V orthonormal."""
    N = coeffs.N
    operator = assemble_A(coeffs, 0.0, grid, BoundaryCondition.dirichlet())
    interior = slice(N, N * (grid.size - 1))
    block = -operator[interior, interior].toarray()
    return scipy.linalg.eigh(0.5 * (block + block.T))


def filter_factors(
    mu: np.ndarray, final_time: float, opts: ReconstructOptions
) -> np.ndarray:
    amplification = mu * final_time
    if opts.filter == FilterKind.TRUNCATION:
        cap = 1.0 / opts.noise_level if opts.noise_level > 0 else NOISELESS_AMPLIFICATION_CAP
        keep = amplification <= np.log(cap)
        return np.where(keep, np.exp(np.where(keep, amplification, 0.0)), 0.0)
    if opts.gamma > 0:
        # e^{mu T} / (1 + gamma e^{mu T}) written without overflow
        return 1.0 / (np.exp(-amplification) + opts.gamma)
    keep = amplification <= np.log(NOISELESS_AMPLIFICATION_CAP)
    return np.where(keep, np.exp(np.where(keep, amplification, 0.0)), 0.0)


def reconstruct(
    terminal: np.ndarray,
    coeffs: CoefficientSet,
    grid: Grid,
    opts: ReconstructOptions | None = None,
    bc: BoundaryCondition | None = None,
) -> ReconstructionResult:
    """
    Back-propagate terminal data over [0, T] through a damped eigen-expansion.

    Tikhonov scales mode k by e^{mu_k T} / (1 + gamma e^{mu_k T}) with gamma = delta;
    truncation keeps the modes with e^{mu_k T} <= 1 / delta. Noiseless data keep the
    modes whose amplification stays below 1 / sqrt(machine epsilon) and whose
    projection of the data clears the round-off floor.
    """
    opts = opts or ReconstructOptions()
    bc = bc or BoundaryCondition.dirichlet()
    _require_self_adjoint(coeffs, grid, bc)
    terminal = np.atleast_2d(np.asarray(terminal, dtype=float))
    if terminal.shape != (coeffs.N, grid.size):
        raise UnsupportedConfigurationError(
            f"terminal data must have shape {(coeffs.N, grid.size)}, got {terminal.shape}"
        )

    mu, modes = spectrum(coeffs, grid)
    data = to_vector(terminal)[coeffs.N : coeffs.N * (grid.size - 1)]
    coefficients = modes.T @ data
    factors = filter_factors(mu, grid.final_time, opts)
    if opts.noise_level == 0.0:
        floor = NOISELESS_COEFFICIENT_FLOOR * float(np.abs(coefficients).max(initial=0.0))
        factors = np.where(np.abs(coefficients) > floor, factors, 0.0)
    interior = modes @ (factors * coefficients)

    stacked = np.zeros(coeffs.N * grid.size)
    stacked[coeffs.N : coeffs.N * (grid.size - 1)] = interior
    retained = int(np.count_nonzero(factors))
    logger.debug(
        f"{opts.filter.value} reconstruction: delta={opts.noise_level:.1e}, "
        f"{retained}/{mu.size} modes retained"
    )
    return ReconstructionResult(
        estimate=from_vector(stacked, coeffs.N),
        retained_modes=retained,
        filter=opts.filter,
        gamma=opts.gamma,
        s=opts.log_rate_s,
    )
