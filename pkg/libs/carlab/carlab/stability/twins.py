import numpy as np

from carlab.discretize.grid import Grid
from carlab.forward.options import SolveOptions
from carlab.model.boundary import BoundaryCondition, BoundaryKind
from carlab.model.coefficients import CoefficientSet
from carlab.model.presets import preset
from carlab.model.semilinear import Semilinearity
from carlab.model.validation import random_smooth_field
from carlab.stability.models import PerturbationFamily, TwinExperiment


def perturbation_profile(
    cfg: TwinExperiment, grid: Grid, components: int | None = None
) -> np.ndarray:
    x = np.pi * grid.nodes / grid.length
    if cfg.perturbation == PerturbationFamily.SINGLE_MODE:
        profile = np.sin(x)
    elif cfg.perturbation == PerturbationFamily.TWO_MODE:
        profile = np.sin(x) + np.sin(3 * x)
    elif cfg.perturbation == PerturbationFamily.HIGH_MODE:
        profile = np.sin(cfg.high_mode * x)
    else:
        rng = np.random.default_rng(cfg.seed)
        field = random_smooth_field(
            grid, 1, rng, dirichlet=cfg.boundary == BoundaryKind.DIRICHLET
        )[0]
        profile = field / np.max(np.abs(field))
    return np.tile(profile, (components or cfg.components, 1))


def resolve_problem(
    cfg: TwinExperiment,
) -> tuple[CoefficientSet, BoundaryCondition, Semilinearity]:
    return preset(
        cfg.preset,
        components=cfg.components,
        boundary=cfg.boundary,
        robin_p=cfg.robin_p,
    )


def solve_options(cfg: TwinExperiment) -> SolveOptions:
    return SolveOptions(scheme=cfg.scheme)
