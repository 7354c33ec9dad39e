import functools
from enum import Enum

import numpy as np
import scipy.linalg
from scipy.integrate import trapezoid

from carlab.consts import BOUNDARY_ZERO_TOLERANCE
from carlab.discretize.grid import Grid, RectGrid
from carlab.discretize.operators import gradient, gradient_matrix
from carlab.errors import DomainError, UnsupportedConfigurationError


class NormKind(str, Enum):
    L2 = "L2"
    H1 = "H1"
    HBETA = "Hbeta"


def _components(field: np.ndarray, spatial_dims: int) -> np.ndarray:
    field = np.asarray(field, dtype=float)
    return field.reshape((-1,) + field.shape[field.ndim - spatial_dims :])


def l2_squared(field: np.ndarray, grid: Grid | RectGrid) -> float:
    if isinstance(grid, RectGrid):
        density = np.sum(_components(field, 2) ** 2, axis=0)
        return float(trapezoid(trapezoid(density, dx=grid.hy, axis=1), dx=grid.hx))
    density = np.sum(_components(field, 1) ** 2, axis=0)
    return float(trapezoid(density, dx=grid.h))


def gradient_squared(field: np.ndarray, grid: Grid | RectGrid) -> float:
    if isinstance(grid, RectGrid):
        values = _components(field, 2)
        d_x = np.gradient(values, grid.hx, axis=1, edge_order=2)
        d_y = np.gradient(values, grid.hy, axis=2, edge_order=2)
        return l2_squared(d_x, grid) + l2_squared(d_y, grid)
    return l2_squared(gradient(_components(field, 1), grid), grid)


def l2_norm(field: np.ndarray, grid: Grid | RectGrid) -> float:
    return float(np.sqrt(l2_squared(field, grid)))


def h1_norm(field: np.ndarray, grid: Grid | RectGrid) -> float:
    return float(np.sqrt(l2_squared(field, grid) + gradient_squared(field, grid)))


@functools.lru_cache(maxsize=16)
def _spectral_basis(grid: Grid, dirichlet: bool):
    # eigenbasis of the discrete Laplacian whose quadratic form is the H1 seminorm above
    weights = grid.weights
    index = np.arange(1, grid.size - 1) if dirichlet else np.arange(grid.size)
    grad = gradient_matrix(grid).toarray()[:, index]
    root = np.sqrt(weights[index])
    stiffness = (grad.T * weights) @ grad / np.outer(root, root)
    eigenvalues, eigenvectors = scipy.linalg.eigh(stiffness)
    return np.clip(eigenvalues, 0.0, None), eigenvectors, root, index


def _spectral_grid(grid: Grid) -> Grid:
    return Grid(length=grid.length, nx=grid.nx, nt=2)


def hbeta_norm(field: np.ndarray, grid: Grid, beta: float) -> float:
    if not 0.0 <= beta <= 1.0:
        raise DomainError(f"Hbeta smoothness index must lie in [0, 1], got {beta}")
    if isinstance(grid, RectGrid):
        raise UnsupportedConfigurationError("Hbeta norms are defined on 1-D grids only")
    values = _components(field, 1)
    scale = float(np.max(np.abs(values))) if values.size else 0.0
    if scale == 0.0:
        return 0.0
    dirichlet = np.max(np.abs(values[:, [0, -1]])) <= BOUNDARY_ZERO_TOLERANCE * scale
    eigenvalues, eigenvectors, root, index = _spectral_basis(
        _spectral_grid(grid), bool(dirichlet)
    )
    coefficients = (values[:, index] * root) @ eigenvectors
    return float(np.sqrt(np.sum((1.0 + eigenvalues) ** beta * coefficients**2)))


def norm(
    field: np.ndarray,
    grid: Grid | RectGrid,
    kind: NormKind | str = NormKind.L2,
    beta: float | None = None,
) -> float:
    kind = NormKind(kind)
    if kind == NormKind.L2:
        return l2_norm(field, grid)
    if kind == NormKind.H1:
        return h1_norm(field, grid)
    if beta is None:
        raise DomainError("Hbeta norm requires beta")
    return hbeta_norm(field, grid, beta)


def sobolev_norm(field: np.ndarray, grid: Grid, beta: float) -> float:
    """Hbeta norm using the exact L2/H1 forms at the integer endpoints."""
    if beta == 0.0:
        return l2_norm(field, grid)
    if beta == 1.0:
        return h1_norm(field, grid)
    return hbeta_norm(field, grid, beta)
