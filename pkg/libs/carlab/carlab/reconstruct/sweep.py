import asyncio
import logging
import math
from functools import partial
from typing import Sequence

import numpy as np

from carlab.consts import DEFAULT_DELTA_LIST, DEFAULT_MAX_CONCURRENCY, RATE_SLOPE_SLACK
from carlab.discretize.grid import Grid
from carlab.discretize.norms import l2_norm
from carlab.errors import DomainError
from carlab.model.coefficients import CoefficientSet
from carlab.reconstruct.filters import reconstruct
from carlab.reconstruct.options import (
    FilterKind,
    ReconstructionRecord,
    ReconstructionSweep,
    ReconstructOptions,
)
from carlab.utils.concurrency import gather_bounded
from carlab.utils.pythonic import fit_slope

logger = logging.getLogger(__name__)


def noise_mode(deltas: Sequence[float], final_time: float) -> int:
    """Largest k with k^2 T <= log(1 / min delta)."""
    return max(int(math.floor(math.sqrt(math.log(1.0 / min(deltas)) / final_time))), 1)


def two_mode_problem(
    grid: Grid, components: int, delta: float, mode: int
) -> tuple[np.ndarray, np.ndarray]:
    """(initial sin x, terminal e^{-T} sin x + delta sin(mode x)) on every component."""
    x = np.pi * grid.nodes / grid.length
    initial = np.tile(np.sin(x), (components, 1))
    terminal = math.exp(-grid.final_time) * initial + delta * np.sin(mode * x)
    initial[:, [0, -1]] = 0.0
    terminal[:, [0, -1]] = 0.0
    return initial, terminal


def _reconstruction_record(
    coeffs: CoefficientSet, grid: Grid, filter: FilterKind, alpha: float, mode: int, delta: float
) -> ReconstructionRecord:
    initial, terminal = two_mode_problem(grid, coeffs.N, delta, mode)
    opts = ReconstructOptions(filter=filter, alpha=alpha, noise_level=delta)
    result = reconstruct(terminal, coeffs, grid, opts)
    return ReconstructionRecord(
        delta=delta,
        error=l2_norm(result.estimate - initial, grid),
        retained_modes=result.retained_modes,
        gamma=result.gamma,
        s=result.s,
    )


async def areconstruction_sweep(
    coeffs: CoefficientSet,
    grid: Grid,
    deltas: Sequence[float] = DEFAULT_DELTA_LIST,
    filter: FilterKind = FilterKind.TIKHONOV,
    alpha: float = 0.5,
    max_concurrency: int = DEFAULT_MAX_CONCURRENCY,
) -> ReconstructionSweep:
    if not deltas or any(not 0.0 < d < 1.0 for d in deltas):
        raise DomainError("noise levels must be a non-empty list inside (0, 1)")
    mode = noise_mode(deltas, grid.final_time)
    records = await gather_bounded(
        [
            partial(_reconstruction_record, coeffs, grid, filter, alpha, mode, delta)
            for delta in deltas
        ],
        max_concurrency=max_concurrency,
    )
    usable = [r for r in records if r.error > 0]
    slope = fit_slope(
        [math.log(math.log(1.0 / r.delta)) for r in usable],
        [math.log(r.error) for r in usable],
    )
    slope_ok = bool(np.isfinite(slope) and slope <= -alpha + RATE_SLOPE_SLACK)
    logger.info(
        f"{filter.value} reconstruction sweep: noise mode {mode}, slope {slope:.3f} "
        f"(needs <= {-alpha + RATE_SLOPE_SLACK:.2f})"
    )
    return ReconstructionSweep(
        records=records,
        alpha=alpha,
        filter=filter,
        noise_mode=mode,
        slope=slope,
        slope_ok=slope_ok,
    )


def reconstruction_sweep(coeffs: CoefficientSet, grid: Grid, **kwargs) -> ReconstructionSweep:
    return asyncio.run(areconstruction_sweep(coeffs, grid, **kwargs))
