import logging

import numpy as np
import scipy.sparse as sp
from scipy.sparse.linalg import splu

from carlab.consts import (
    BOUNDARY_ZERO_TOLERANCE,
    MAX_TIME_DERIVATIVE_ORDER,
    PICARD_STEP_LIMIT,
)
from carlab.discretize.grid import Grid
from carlab.discretize.operators import (
    assemble_A,
    from_vector,
    gradient,
    time_derivative,
    to_vector,
)
from carlab.discretize.trajectory import Trajectory
from carlab.errors import (
    BoundaryConditionError,
    ConfigurationError,
    DivergenceError,
    DomainError,
    NumericalError,
    PicardConvergenceError,
    UnsupportedConfigurationError,
)
from carlab.forward.options import SolveOptions
from carlab.model.boundary import BoundaryCondition
from carlab.model.coefficients import CoefficientSet
from carlab.model.semilinear import Semilinearity

logger = logging.getLogger(__name__)


def _prepare_initial_state(
    u0: np.ndarray, coeffs: CoefficientSet, bc: BoundaryCondition, grid: Grid
) -> np.ndarray:
    u0 = np.array(np.atleast_2d(u0), dtype=float)
    if u0.shape != (coeffs.N, grid.size):
        raise ConfigurationError(
            f"initial state must have shape (N, nx+2) = ({coeffs.N}, {grid.size}), got {u0.shape}"
        )
    if bc.is_dirichlet:
        scale = float(np.max(np.abs(u0))) or 1.0
        edge = float(np.max(np.abs(u0[:, [0, -1]])))
        if edge > BOUNDARY_ZERO_TOLERANCE * scale:
            raise BoundaryConditionError(
                f"Dirichlet initial state does not vanish on the boundary (max {edge:.3e})"
            )
        u0[:, [0, -1]] = 0.0
    return u0


class _StepSystem:
    """Factorized (I - theta dt A(t_{m+1})) with A(t_m) kept for the explicit half."""

    def __init__(self, coeffs, bc, grid, implicitness):
        self.coeffs, self.bc, self.grid = coeffs, bc, grid
        self.implicitness = implicitness
        self.identity = sp.identity(coeffs.N * grid.size, format="csc")
        self._cached = None

    def factorize(self, t: float):
        if self.coeffs.time_independent and self._cached is not None:
            return self._cached
        operator = assemble_A(self.coeffs, t, self.grid, self.bc)
        matrix = (self.identity - self.implicitness * self.grid.dt * operator).tocsc()
        try:
            factor = splu(matrix)
        except RuntimeError as e:
            raise NumericalError(f"step matrix at t={t} is singular: {e}") from e
        self._cached = (factor, operator)
        return self._cached


def solve_forward(
    coeffs: CoefficientSet,
    bc: BoundaryCondition,
    f: Semilinearity,
    u0: np.ndarray,
    grid: Grid,
    opts: SolveOptions | None = None,
) -> Trajectory:
    opts = opts or SolveOptions()
    bc.check_compatible(coeffs)
    state = _prepare_initial_state(u0, coeffs, bc, grid)
    N, dt = coeffs.N, grid.dt
    implicit_f = not f.is_linear and not opts.freeze_nonlinearity
    if implicit_f and dt * f.lipschitz > PICARD_STEP_LIMIT:
        raise ConfigurationError(
            f"dt * L = {dt * f.lipschitz:.3f} exceeds {PICARD_STEP_LIMIT}; refine nt"
        )

    theta = opts.implicitness
    system = _StepSystem(coeffs, bc, grid, theta)
    boundary_mask = np.ones((N, grid.size))
    if bc.is_dirichlet:
        boundary_mask[:, [0, -1]] = 0.0

    def source(t: float, u: np.ndarray) -> np.ndarray:
        return to_vector(
            boundary_mask * f(grid.points, t, u, gradient(u, grid)[:, None, :])
        )

    times = grid.times
    values = np.empty((grid.nt + 1, N, grid.size))
    values[0] = state
    picard_counts = []
    _, current_operator = system.factorize(times[0])
    for m in range(grid.nt):
        t, t_next = times[m], times[m + 1]
        factor, next_operator = system.factorize(t_next)
        vector = to_vector(values[m])
        explicit = vector + (1 - theta) * dt * (current_operator @ vector)

        if f.is_linear:
            new = factor.solve(explicit)
        elif opts.freeze_nonlinearity:
            new = factor.solve(explicit + dt * source(t, values[m]))
        else:
            base = explicit + (1 - theta) * dt * source(t, values[m])
            guess, residual = vector, np.inf
            for iteration in range(1, opts.picard_max + 1):
                new = factor.solve(base + theta * dt * source(t_next, from_vector(guess, N)))
                if not np.all(np.isfinite(new)):
                    raise DivergenceError(f"non-finite state at step {m + 1}", step=m + 1)
                size = float(np.linalg.norm(new))
                residual = float(np.linalg.norm(new - guess)) / (size if size > 0 else 1.0)
                guess = new
                if residual <= opts.picard_tol:
                    break
            else:
                raise PicardConvergenceError(
                    f"Picard iteration did not converge at step {m + 1} after "
                    f"{opts.picard_max} iterations (last residual {residual:.3e})",
                    step=m + 1,
                    last_residual=residual,
                )
            picard_counts.append(iteration)

        if not np.all(np.isfinite(new)):
            raise DivergenceError(f"non-finite state at step {m + 1}", step=m + 1)
        field = from_vector(new, N)
        if bc.is_dirichlet:
            field[:, [0, -1]] = 0.0
        values[m + 1] = field
        current_operator = next_operator

    if picard_counts:
        logger.debug(
            f"Picard iterations per step: mean {np.mean(picard_counts):.2f}, max {max(picard_counts)}"
        )
    metadata = {"scheme": opts.scheme.value, "preset": coeffs.name, "semilinearity": f.name}
    if picard_counts:
        metadata["picard_max_iterations"] = int(max(picard_counts))
    return Trajectory(values=values, grid=grid, bc=bc, metadata=metadata)


def time_derivative_trajectories(
    coeffs: CoefficientSet,
    bc: BoundaryCondition,
    u0: np.ndarray,
    grid: Grid,
    opts: SolveOptions | None = None,
    order: int = MAX_TIME_DERIVATIVE_ORDER,
) -> list[Trajectory]:
    """
    Trajectories of d_t^j u for j = 0..order of the linear problem.

    With t-independent coefficients d_t^j u solves the same system from A^j u0.
    Each derivative is compared with finite differences of the base trajectory
    and the relative discrepancy is stored as ``metadata["fd_discrepancy"]``.
    """
    if not coeffs.time_independent:
        raise UnsupportedConfigurationError(
            "time-derivative trajectories require time-independent coefficients"
        )
    if not 0 <= order <= MAX_TIME_DERIVATIVE_ORDER:
        raise DomainError(f"derivative order must be in [0, {MAX_TIME_DERIVATIVE_ORDER}]")
    zero = Semilinearity.zero()
    base = solve_forward(coeffs, bc, zero, u0, grid, opts)
    trajectories = [base.model_copy(update={"metadata": {**base.metadata, "derivative_order": 0}})]

    operator = assemble_A(coeffs, 0.0, grid, bc)
    data = to_vector(base.initial)
    differenced = base.values
    for j in range(1, order + 1):
        data = operator @ data
        derivative = solve_forward(coeffs, bc, zero, from_vector(data, coeffs.N), grid, opts)
        differenced = time_derivative(differenced, grid.dt)
        scale = float(np.max(np.abs(derivative.values))) or 1.0
        discrepancy = float(
            np.max(np.abs(differenced[j:-j] - derivative.values[j:-j]))
        ) / scale
        logger.debug(f"d_t^{j} u finite-difference discrepancy {discrepancy:.3e}")
        trajectories.append(
            derivative.model_copy(
                update={
                    "metadata": {
                        **derivative.metadata,
                        "derivative_order": j,
                        "fd_discrepancy": discrepancy,
                    }
                }
            )
        )
    return trajectories
