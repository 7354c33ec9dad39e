from enum import Enum

import numpy as np

from carlab.errors import UnknownPresetError
from carlab.model.boundary import BoundaryCondition, BoundaryKind
from carlab.model.coefficients import CoefficientSet
from carlab.model.semilinear import Semilinearity


class PresetName(str, Enum):
    HEAT1D = "heat1d"
    COUPLED2 = "coupled2"
    PAPER_EXAMPLE = "paper_example"


def gradient_sine(x: np.ndarray, t: float, u: np.ndarray, gradu: np.ndarray) -> np.ndarray:
    return np.exp(-t) * np.sin(gradu[:, 0, :])


def _diffusion_tensor(matrix) -> np.ndarray:
    matrix = np.asarray(matrix, dtype=float)
    return matrix.reshape(matrix.shape + (1, 1))


def preset(
    name: PresetName | str,
    *,
    components: int = 1,
    boundary: BoundaryKind | str | None = None,
    robin_p: float = 0.5,
) -> tuple[CoefficientSet, BoundaryCondition, Semilinearity]:
    try:
        name = PresetName(name)
    except ValueError:
        known = ", ".join(option.value for option in PresetName)
        raise UnknownPresetError(f"Unknown preset '{name}', expected one of: {known}")

    bc = BoundaryCondition(kind=BoundaryKind(boundary or BoundaryKind.DIRICHLET))
    p = robin_p if bc.kind == BoundaryKind.ROBIN else None
    f = Semilinearity.zero()

    if name == PresetName.HEAT1D:
        diffusion = [[1.0]]
    elif name == PresetName.COUPLED2:
        diffusion = [[2.0, 1.0], [1.0, 2.0]]
    else:
        diffusion = np.eye(components)
        f = Semilinearity(
            eval=gradient_sine, lipschitz=1.0, beta=1.0, name=PresetName.PAPER_EXAMPLE.value
        )

    coeffs = CoefficientSet.from_constants(
        _diffusion_tensor(diffusion), p=p, sigma=1.0, name=name.value
    )
    return coeffs, bc, f


def initial_state(grid, bc: BoundaryCondition, components: int = 1) -> np.ndarray:
    """Smooth initial data meeting the boundary kind: sin for Dirichlet, sin^2 for Robin."""
    profile = np.sin(np.pi * grid.nodes / grid.length)
    if bc.kind == BoundaryKind.ROBIN:
        profile = profile**2
    return np.tile(profile, (components, 1))
