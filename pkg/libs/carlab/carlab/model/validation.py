import itertools
import logging

import numpy as np
import scipy.linalg
from pydantic import BaseModel

from carlab.consts import (
    DEFAULT_DOMAIN_LENGTH,
    DEFAULT_FINAL_TIME,
    DEFAULT_LIPSCHITZ_PAIRS,
    DEFAULT_VALIDATION_SAMPLES,
    ELLIPTICITY_TOLERANCE,
    LIPSCHITZ_SLACK,
    RANDOM_FIELD_MODES,
    SYMMETRY_TOLERANCE,
)
from carlab.discretize.grid import Grid
from carlab.discretize.norms import l2_norm, sobolev_norm
from carlab.discretize.operators import gradient
from carlab.errors import DomainError
from carlab.model.coefficients import CoefficientSet
from carlab.model.semilinear import Semilinearity

logger = logging.getLogger(__name__)

RAYLEIGH_PROBES = 16


class SamplePoint(BaseModel):
    x: tuple[float, ...]
    t: float


class ValidationReport(BaseModel):
    passed: bool
    samples: int
    sigma: float
    symmetry_defect: float
    symmetry_point: SamplePoint | None = None
    ellipticity_margin: float
    ellipticity_point: SamplePoint | None = None
    min_eigenvalue: float
    rayleigh_margin: float


class LipschitzReport(BaseModel):
    pairs: int
    lipschitz: float
    max_ratio: float
    passed: bool


def _sample_points(n: int, samples: int, length: float, final_time: float, rng):
    corners = [
        (np.array(x, dtype=float), t)
        for x in itertools.product((0.0, length), repeat=n)
        for t in (0.0, final_time)
    ]
    random_points = [
        (rng.uniform(0.0, length, size=n), float(rng.uniform(0.0, final_time)))
        for _ in range(samples)
    ]
    return corners + random_points


def validate(
    coeffs: CoefficientSet,
    samples: int = DEFAULT_VALIDATION_SAMPLES,
    *,
    length: float = DEFAULT_DOMAIN_LENGTH,
    final_time: float = DEFAULT_FINAL_TIME,
    seed: int = 0,
) -> ValidationReport:
    """
    Check symmetry a_ij^{kl} = a_ji^{kl} = a_ij^{lk} and strong ellipticity at sampled (x, t).

    The ellipticity margin is the smallest eigenvalue of the symmetrized
    (N n) x (N n) form minus sigma; seeded random directions and the canonical
    basis give the Rayleigh margin reported alongside.
    """
    if samples < 1:
        raise DomainError(f"samples must be positive, got {samples}")
    rng = np.random.default_rng(seed)
    N, n = coeffs.N, coeffs.n
    size = N * n

    worst_defect, worst_margin, worst_rayleigh = 0.0, np.inf, np.inf
    defect_point = margin_point = None
    min_eigenvalue, scale = np.inf, 0.0
    points = _sample_points(n, samples, length, final_time, rng)
    for x, t in points:
        a = coeffs.diffusion(x[:, None], t)[..., 0]
        magnitude = float(np.max(np.abs(a)))
        scale = max(scale, magnitude)
        defect = max(
            float(np.max(np.abs(a - a.transpose(0, 1, 3, 2)))),
            float(np.max(np.abs(a - a.transpose(1, 0, 2, 3)))),
        ) / (magnitude or 1.0)
        if defect > worst_defect:
            worst_defect, defect_point = defect, SamplePoint(x=tuple(x), t=t)

        form = a.transpose(0, 2, 1, 3).reshape(size, size)
        eigenvalue = float(scipy.linalg.eigvalsh(0.5 * (form + form.T))[0])
        min_eigenvalue = min(min_eigenvalue, eigenvalue)
        if eigenvalue - coeffs.sigma < worst_margin:
            worst_margin = eigenvalue - coeffs.sigma
            margin_point = SamplePoint(x=tuple(x), t=t)

        directions = np.vstack([np.eye(size), rng.standard_normal((RAYLEIGH_PROBES, size))])
        quotients = np.einsum("pi,ij,pj->p", directions, form, directions) / np.sum(
            directions**2, axis=1
        )
        worst_rayleigh = min(worst_rayleigh, float(quotients.min()) - coeffs.sigma)

    passed = (
        worst_defect <= SYMMETRY_TOLERANCE
        and worst_margin >= -ELLIPTICITY_TOLERANCE * max(scale, 1.0)
    )
    if not passed:
        logger.warning(
            f"Coefficient set '{coeffs.name}' failed validation: "
            f"symmetry defect {worst_defect:.3e}, ellipticity margin {worst_margin:.3e}"
        )
    return ValidationReport(
        passed=passed,
        samples=len(points),
        sigma=coeffs.sigma,
        symmetry_defect=worst_defect,
        symmetry_point=defect_point,
        ellipticity_margin=worst_margin,
        ellipticity_point=margin_point,
        min_eigenvalue=min_eigenvalue,
        rayleigh_margin=worst_rayleigh,
    )


def random_smooth_field(
    grid: Grid,
    components: int,
    rng: np.random.Generator,
    amplitude: float = 1.0,
    dirichlet: bool = True,
) -> np.ndarray:
    """Seeded sum of low sine (and cosine unless ``dirichlet``) modes with decaying weights."""
    x = grid.nodes * np.pi / grid.length
    modes = np.arange(1, RANDOM_FIELD_MODES + 1)
    field = np.zeros((components, grid.size))
    for k in range(components):
        field[k] = (rng.standard_normal(modes.size) / modes**2) @ np.sin(np.outer(modes, x))
        if not dirichlet:
            cosine_modes = np.arange(modes.size + 1)
            weights = rng.standard_normal(cosine_modes.size) / (1 + cosine_modes) ** 2
            field[k] += weights @ np.cos(np.outer(cosine_modes, x))
    peak = float(np.max(np.abs(field))) or 1.0
    return field * (amplitude * rng.uniform(0.1, 1.0) / peak)


def check_lipschitz(
    f: Semilinearity,
    grid: Grid,
    pairs: int = DEFAULT_LIPSCHITZ_PAIRS,
    *,
    components: int = 1,
    seed: int = 0,
) -> LipschitzReport:
    """Measure ||f(u) - f(v)||_L2 / ||u - v||_{H^beta} on seeded smooth pairs inside the amplitude cap."""
    rng = np.random.default_rng(seed)
    x = grid.points
    max_ratio = 0.0
    for _ in range(pairs):
        t = float(rng.uniform(0.0, grid.final_time))
        u = random_smooth_field(grid, components, rng, f.amplitude_cap)
        v = random_smooth_field(grid, components, rng, f.amplitude_cap)
        difference = f(x, t, u, gradient(u, grid)[:, None, :]) - f(
            x, t, v, gradient(v, grid)[:, None, :]
        )
        denominator = sobolev_norm(u - v, grid, f.beta)
        if denominator == 0.0:
            continue
        max_ratio = max(max_ratio, l2_norm(difference, grid) / denominator)
    passed = max_ratio <= f.lipschitz * (1 + LIPSCHITZ_SLACK)
    if not passed:
        logger.warning(
            f"Semilinearity '{f.name}' exceeds its declared Lipschitz constant "
            f"{f.lipschitz}: measured {max_ratio:.6f}"
        )
    return LipschitzReport(
        pairs=pairs, lipschitz=f.lipschitz, max_ratio=max_ratio, passed=passed
    )
