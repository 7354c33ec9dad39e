import numpy as np
from scipy.sparse.linalg import expm_multiply

from carlab.discretize.grid import Grid
from carlab.discretize.operators import assemble_A, from_vector, to_vector
from carlab.errors import UnsupportedConfigurationError
from carlab.model.boundary import BoundaryCondition
from carlab.model.coefficients import CoefficientSet


def propagate(
    u0: np.ndarray,
    coeffs: CoefficientSet,
    grid: Grid,
    bc: BoundaryCondition | None = None,
    final_time: float | None = None,
) -> np.ndarray:
    """Exact discrete semigroup exp(T A) u0 for t-independent coefficients."""
    if not coeffs.time_independent:
        raise UnsupportedConfigurationError("propagate requires time-independent coefficients")
    bc = bc or BoundaryCondition.dirichlet()
    horizon = grid.final_time if final_time is None else final_time
    operator = assemble_A(coeffs, 0.0, grid, bc)
    state = np.atleast_2d(np.asarray(u0, dtype=float))
    return from_vector(expm_multiply(horizon * operator, to_vector(state)), coeffs.N)
