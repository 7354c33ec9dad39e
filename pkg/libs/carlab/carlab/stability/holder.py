import asyncio
import logging
from functools import partial

import numpy as np
from scipy.integrate import trapezoid

from carlab.consts import (
    APRIORI_SLICE_COUNT,
    HOLDER_RESIDUAL_SLACK,
    LINEAR_CALIBRATION_MARGIN,
    SLOPE_TOLERANCE,
)
from carlab.discretize.norms import h1_norm, l2_norm, sobolev_norm
from carlab.discretize.operators import time_derivative
from carlab.discretize.trajectory import Trajectory
from carlab.errors import NumericalError
from carlab.forward.solver import solve_forward
from carlab.model.presets import initial_state
from carlab.model.semilinear import Semilinearity
from carlab.stability.models import ExperimentRecord, HolderConfig, HolderResult
from carlab.stability.theta import optimal_carleman_parameter, theta
from carlab.stability.twins import perturbation_profile, resolve_problem, solve_options
from carlab.utils.concurrency import gather_bounded
from carlab.utils.pythonic import fit_slope

logger = logging.getLogger(__name__)


def integral_identity_defect(z: Trajectory, t0: float) -> float:
    """Relative defect of z(t0) = z(T) - int_{t0}^T d_t z on the lattice node nearest t0."""
    grid = z.grid
    start = int(round(t0 / grid.dt))
    rate = time_derivative(z.values, grid.dt)[start:]
    reconstructed = z.values[-1] - trapezoid(rate, dx=grid.dt, axis=0)
    reference = l2_norm(z.values[start], grid)
    if reference == 0.0:
        return 0.0
    return l2_norm(z.values[start] - reconstructed, grid) / reference


def _apriori_ok(cfg: HolderConfig, f: Semilinearity, z: Trajectory, *states: Trajectory) -> bool:
    grid = z.grid
    if h1_norm(z.initial, grid) > cfg.M:
        return False
    slices = np.unique(np.linspace(0, grid.nt, APRIORI_SLICE_COUNT).astype(int))
    return all(
        sobolev_norm(state.values[m], grid, f.beta) <= cfg.M
        for state in states
        for m in slices
    )


def _twin_record(
    cfg: HolderConfig, base: Trajectory, profile: np.ndarray, epsilon: float, exponent: float
) -> ExperimentRecord:
    coeffs, bc, f = resolve_problem(cfg)
    grid = cfg.grid
    perturbed = solve_forward(
        coeffs, bc, f, base.initial + epsilon * profile, grid, solve_options(cfg)
    )
    z = perturbed - base
    terminal = h1_norm(z.terminal, grid)
    at_t0 = l2_norm(z.at(cfg.t0), grid)
    apriori_ok = _apriori_ok(cfg, f, z, base, perturbed)
    if not apriori_ok:
        logger.warning(f"epsilon={epsilon}: a-priori bound M={cfg.M} exceeded")
    bound = optimal_carleman_parameter(terminal, cfg.M, cfg.t0, grid.final_time, cfg.lambda_)
    return ExperimentRecord(
        epsilon=epsilon,
        E_T=terminal,
        E_t0=at_t0,
        ratio=at_t0 / terminal if terminal > 0 else None,
        theta=exponent,
        s=bound.s,
        bound=bound.bound,
        identity_defect=integral_identity_defect(z, cfg.t0),
        apriori_ok=apriori_ok,
    )


def _linear_calibration(cfg: HolderConfig, profile: np.ndarray, exponent: float) -> float:
    coeffs, bc, _ = resolve_problem(cfg)
    z = solve_forward(
        coeffs, bc, Semilinearity.zero(), cfg.eps_list[0] * profile, cfg.grid, solve_options(cfg)
    )
    terminal = h1_norm(z.terminal, cfg.grid)
    return l2_norm(z.at(cfg.t0), cfg.grid) / (terminal**exponent + terminal)


async def aholder_experiment(cfg: HolderConfig) -> HolderResult:
    coeffs, bc, f = resolve_problem(cfg)
    grid = cfg.grid
    exponent = theta(cfg.t0, grid.final_time, cfg.lambda_)
    profile = perturbation_profile(cfg, grid, coeffs.N)
    base_u0 = cfg.base_amplitude * initial_state(grid, bc, coeffs.N)
    base = solve_forward(coeffs, bc, f, base_u0, grid, solve_options(cfg))

    outcomes = await gather_bounded(
        [partial(_twin_record, cfg, base, profile, eps, exponent) for eps in cfg.eps_list],
        max_concurrency=cfg.max_concurrency,
        return_exceptions=True,
    )
    records = []
    for epsilon, outcome in zip(cfg.eps_list, outcomes):
        if isinstance(outcome, NumericalError):
            logger.warning(f"epsilon={epsilon}: solver failed: {outcome}")
            records.append(ExperimentRecord(epsilon=epsilon, failure=str(outcome), theta=exponent))
        elif isinstance(outcome, BaseException):
            raise outcome
        else:
            records.append(outcome)

    usable = [r for r in records if r.usable and r.E_T > 0 and r.E_t0 > 0]
    slope = fit_slope([np.log(r.E_T) for r in usable], [np.log(r.E_t0) for r in usable])

    on_linear_part = cfg.calibrate_on_linear_part
    if on_linear_part is None:
        on_linear_part = not f.is_linear
    if on_linear_part:
        margin = cfg.calibration_margin or LINEAR_CALIBRATION_MARGIN
        constant = margin * _linear_calibration(cfg, profile, exponent)
    else:
        margin = cfg.calibration_margin or 1.0
        largest = usable[0] if usable else None
        constant = (
            margin * largest.E_t0 / (largest.E_T**exponent + largest.E_T) if largest else 0.0
        )

    violations = 0
    checked = []
    for record in records:
        if record.usable:
            residual = record.E_t0 - constant * (record.E_T**exponent + record.E_T)
            if residual > HOLDER_RESIDUAL_SLACK * record.E_t0:
                violations += 1
                logger.warning(
                    f"epsilon={record.epsilon}: Hoelder bound violated by {residual:.3e}"
                )
            record = record.model_copy(update={"holder_residual": residual})
        checked.append(record)

    slope_consistent = bool(np.isfinite(slope) and slope >= exponent - SLOPE_TOLERANCE)
    logger.info(
        f"Hoelder sweep ({cfg.preset.value}): slope {slope:.4f}, theta {exponent:.4f}, "
        f"C {constant:.4e}, {violations} violations"
    )
    return HolderResult(
        records=checked,
        theta=exponent,
        slope=slope,
        slope_consistent=slope_consistent,
        constant=constant,
        violations=violations,
        failures=sum(1 for r in records if r.failure is not None),
    )


def holder_experiment(cfg: HolderConfig) -> HolderResult:
    return asyncio.run(aholder_experiment(cfg))
