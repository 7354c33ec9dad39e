from typing import TYPE_CHECKING

import numpy as np
import scipy.sparse as sp

from carlab.discretize.grid import Grid
from carlab.errors import UnsupportedConfigurationError
from carlab.model.boundary import BoundaryCondition, BoundaryKind
from carlab.model.coefficients import CoefficientSet

if TYPE_CHECKING:
    from carlab.discretize.trajectory import Trajectory

ONE_SIDED = np.array([-3.0, 4.0, -1.0])


def gradient(field: np.ndarray, grid: Grid) -> np.ndarray:
    return np.gradient(field, grid.h, axis=-1, edge_order=2)


def time_derivative(values: np.ndarray, dt: float) -> np.ndarray:
    return np.gradient(values, dt, axis=0, edge_order=2)


def gradient_matrix(grid: Grid) -> sp.csr_matrix:
    """Sparse form of :func:`gradient`: centered inside, one-sided second order at the ends."""
    size, h = grid.size, grid.h
    interior = np.arange(1, size - 1)
    rows = np.concatenate([interior, interior, [0, 0, 0], [size - 1] * 3])
    cols = np.concatenate(
        [interior - 1, interior + 1, [0, 1, 2], [size - 1, size - 2, size - 3]]
    )
    vals = np.concatenate(
        [
            np.full(interior.size, -1.0),
            np.full(interior.size, 1.0),
            ONE_SIDED,
            -ONE_SIDED,
        ]
    ) / (2 * h)
    return sp.coo_matrix((vals, (rows, cols)), shape=(size, size)).tocsr()


def to_vector(field: np.ndarray) -> np.ndarray:
    # node-major ordering keeps A block-banded with N x N blocks
    return np.ascontiguousarray(np.atleast_2d(field).T).reshape(-1)


def from_vector(vector: np.ndarray, components: int) -> np.ndarray:
    return vector.reshape(-1, components).T


class _Triplets:
    def __init__(self, components: int):
        self.components = components
        self.rows, self.cols, self.vals = [], [], []

    def add(self, row_nodes, row_comp, col_nodes, col_comp, values):
        row_nodes = np.atleast_1d(row_nodes)
        self.rows.append(row_nodes * self.components + row_comp)
        self.cols.append(np.atleast_1d(col_nodes) * self.components + col_comp)
        self.vals.append(np.broadcast_to(values, row_nodes.shape).astype(float))

    def build(self, size: int) -> sp.csr_matrix:
        if not self.rows:
            return sp.csr_matrix((size, size))
        return sp.coo_matrix(
            (
                np.concatenate(self.vals),
                (np.concatenate(self.rows), np.concatenate(self.cols)),
            ),
            shape=(size, size),
        ).tocsr()


def assemble_A(
    coeffs: CoefficientSet,
    t: float,
    grid: Grid,
    bc: BoundaryCondition,
    *,
    lower_order: bool = True,
) -> sp.csr_matrix:
    """
    Discrete A(t) acting on node-major stacked grid functions.

    Diffusion uses the conservative three-point stencil with a^{kl} sampled at
    midpoints. Dirichlet boundary rows and columns are zero, so a symmetric
    diffusion tensor without drift gives a symmetric matrix. Robin rows come from eliminating
    a ghost node with the centered conormal condition, which leaves the half-cell
    balance ``(2/h) * (flux(h/2) - p u_0)`` at x = 0 and its mirror at x = length.
    """
    if coeffs.n != 1:
        raise UnsupportedConfigurationError(
            f"the discrete operator supports one spatial dimension, got n={coeffs.n}"
        )
    bc.check_compatible(coeffs)
    N, size, h = coeffs.N, grid.size, grid.h
    robin = bc.kind == BoundaryKind.ROBIN
    interior = np.arange(1, size - 1)
    last = size - 1
    triplets = _Triplets(N)

    a_mid = coeffs.diffusion(grid.midpoints, t)[:, :, 0, 0, :]
    for k in range(N):
        for l in range(N):
            west = a_mid[k, l, :-1] / h**2
            east = a_mid[k, l, 1:] / h**2
            triplets.add(interior, l, interior - 1, k, west)
            triplets.add(interior, l, interior + 1, k, east)
            triplets.add(interior, l, interior, k, -(west + east))
            if robin:
                first_flux = 2 * a_mid[k, l, 0] / h**2
                last_flux = 2 * a_mid[k, l, -1] / h**2
                triplets.add(0, l, 1, k, first_flux)
                triplets.add(0, l, 0, k, -first_flux)
                triplets.add(last, l, last - 1, k, last_flux)
                triplets.add(last, l, last, k, -last_flux)

    if robin:
        p = coeffs.robin(grid.boundary_points, t)
        for l in range(N):
            triplets.add(0, l, 0, l, -2 * p[0] / h)
            triplets.add(last, l, last, l, -2 * p[1] / h)

    if lower_order and coeffs.has_lower_order:
        b = coeffs.drift(grid.points, t)[:, :, 0, :]
        c = coeffs.reaction(grid.points, t)
        reaction_nodes = np.arange(size) if robin else interior
        for k in range(N):
            for l in range(N):
                centered = b[k, l, interior] / (2 * h)
                triplets.add(interior, l, interior + 1, k, centered)
                triplets.add(interior, l, interior - 1, k, -centered)
                triplets.add(reaction_nodes, l, reaction_nodes, k, c[k, l, reaction_nodes])
                if robin:
                    triplets.add(
                        np.zeros(3, dtype=int), l, [0, 1, 2], k,
                        b[k, l, 0] * ONE_SIDED / (2 * h),
                    )
                    triplets.add(
                        np.full(3, last), l, [last, last - 1, last - 2], k,
                        -b[k, l, last] * ONE_SIDED / (2 * h),
                    )

    operator = triplets.build(N * size)
    if robin:
        return operator
    # boundary nodes carry no Dirichlet unknowns: drop their columns with their rows
    unknowns = np.ones(N * size)
    unknowns[:N] = 0.0
    unknowns[-N:] = 0.0
    return (operator @ sp.diags(unknowns)).tocsr()


def apply_A_series(
    coeffs: CoefficientSet,
    grid: Grid,
    bc: BoundaryCondition,
    values: np.ndarray,
    times: np.ndarray,
    *,
    lower_order: bool = True,
) -> np.ndarray:
    steps, N, size = values.shape
    stacked = values.transpose(0, 2, 1).reshape(steps, size * N)
    if coeffs.time_independent:
        operator = assemble_A(coeffs, times[0], grid, bc, lower_order=lower_order)
        applied = (operator @ stacked.T).T
    else:
        applied = np.stack(
            [
                assemble_A(coeffs, t, grid, bc, lower_order=lower_order) @ row
                for t, row in zip(times, stacked)
            ]
        )
    return applied.reshape(steps, size, N).transpose(0, 2, 1)


def apply_P(traj: "Trajectory", coeffs: CoefficientSet, full: bool = True) -> np.ndarray:
    """Residual ``d_t u - A(t) u`` on every time slice; ``full=False`` drops b and c (P0)."""
    grid = traj.grid
    return time_derivative(traj.values, grid.dt) - apply_A_series(
        coeffs, grid, traj.bc, traj.values, grid.times, lower_order=full
    )


def boundary_defect(traj: "Trajectory", coeffs: CoefficientSet) -> float:
    """Largest relative violation of the trajectory's boundary condition."""
    values = traj.values
    scale = float(np.max(np.abs(values)))
    if scale == 0.0:
        return 0.0
    if traj.bc.is_dirichlet:
        return float(np.max(np.abs(values[:, :, [0, -1]]))) / scale

    grid = traj.grid
    h = grid.h
    left = np.tensordot(values[:, :, :3], ONE_SIDED, axes=([2], [0])) / (2 * h)
    right = -np.tensordot(values[:, :, [-1, -2, -3]], ONE_SIDED, axes=([2], [0])) / (
        2 * h
    )
    defects, flux_scale = [], 0.0
    sample_times = grid.times[:1] if coeffs.time_independent else grid.times
    for index, t in enumerate(sample_times):
        a = coeffs.diffusion(grid.boundary_points, t)[:, :, 0, 0, :]
        p = coeffs.robin(grid.boundary_points, t)
        rows = slice(None) if coeffs.time_independent else slice(index, index + 1)
        flux_left = np.einsum("kl,mk->ml", a[:, :, 0], left[rows])
        flux_right = np.einsum("kl,mk->ml", a[:, :, 1], right[rows])
        defects.append(np.abs(-flux_left + p[0] * values[rows, :, 0]).max())
        defects.append(np.abs(flux_right + p[1] * values[rows, :, -1]).max())
        slope = max(float(np.abs(left[rows]).max()), float(np.abs(right[rows]).max()))
        flux_scale = max(flux_scale, float(np.abs(a).max()) * slope)
    return float(max(defects)) / (scale + flux_scale)
