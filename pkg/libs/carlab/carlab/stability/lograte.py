import asyncio
import logging
from functools import partial

import numpy as np

from carlab.consts import LOG_RATE_SLACK
from carlab.discretize.norms import h1_norm, l2_norm
from carlab.errors import NumericalError, UnsupportedConfigurationError
from carlab.forward.solver import time_derivative_trajectories
from carlab.stability.models import ExperimentRecord, LogConfig, LogResult
from carlab.stability.theta import log_rate_parameter
from carlab.stability.twins import perturbation_profile, resolve_problem, solve_options
from carlab.utils.concurrency import gather_bounded

logger = logging.getLogger(__name__)


def _log_record(cfg: LogConfig, profile: np.ndarray, epsilon: float) -> ExperimentRecord:
    if epsilon == 0.0:
        logger.info("epsilon=0 gives perfect data (D=0); record excluded")
        return ExperimentRecord(epsilon=0.0, E_0=0.0, D=0.0, excluded=True)
    coeffs, bc, _ = resolve_problem(cfg)
    grid = cfg.grid
    derivatives = time_derivative_trajectories(
        coeffs, bc, epsilon * profile, grid, solve_options(cfg), order=2
    )
    data = sum(h1_norm(traj.terminal, grid) for traj in derivatives)
    apriori = sum(h1_norm(traj.initial, grid) for traj in derivatives)
    initial = l2_norm(derivatives[0].initial, grid)
    record = ExperimentRecord(
        epsilon=epsilon,
        E_0=initial,
        D=data,
        M1=apriori,
        ratio=initial / data if data > 0 else None,
    )
    if not 0.0 < data < 1.0:
        logger.warning(f"epsilon={epsilon}: D={data:.3e} outside (0, 1); record excluded")
        return record.model_copy(update={"excluded": True})
    s = log_rate_parameter(data, cfg.alpha)
    return record.model_copy(update={"s": s, "product": initial * s})


def rate_products(records: list[ExperimentRecord], alpha: float) -> list[float]:
    """E_0 (log 1/D)^alpha of the usable records, recomputed for another alpha."""
    return [r.E_0 * log_rate_parameter(r.D, alpha) for r in records if r.usable]


def products_verdict(products: list[float]) -> tuple[bool, bool]:
    """(bounded, nonincreasing) within the relative slack, in epsilon-decreasing order."""
    if not products:
        return False, False
    finite = all(np.isfinite(p) for p in products)
    bounded = finite and max(products) <= (1 + LOG_RATE_SLACK) * products[0]
    nonincreasing = all(
        later <= (1 + LOG_RATE_SLACK) * earlier
        for earlier, later in zip(products, products[1:])
    )
    return bool(bounded), bool(nonincreasing)


async def alog_experiment(cfg: LogConfig) -> LogResult:
    coeffs, _, f = resolve_problem(cfg)
    if not f.is_linear or not coeffs.time_independent:
        raise UnsupportedConfigurationError(
            f"log-rate experiment needs a linear, time-independent preset; '{cfg.preset.value}' is not"
        )
    profile = perturbation_profile(cfg, cfg.grid, coeffs.N)
    outcomes = await gather_bounded(
        [partial(_log_record, cfg, profile, eps) for eps in cfg.eps_list],
        max_concurrency=cfg.max_concurrency,
        return_exceptions=True,
    )
    records = []
    for epsilon, outcome in zip(cfg.eps_list, outcomes):
        if isinstance(outcome, NumericalError):
            logger.warning(f"epsilon={epsilon}: solver failed: {outcome}")
            records.append(ExperimentRecord(epsilon=epsilon, failure=str(outcome)))
        elif isinstance(outcome, BaseException):
            raise outcome
        else:
            records.append(outcome)

    bounded, nonincreasing = products_verdict([r.product for r in records if r.usable])
    logger.info(
        f"Log-rate sweep ({cfg.preset.value}, alpha={cfg.alpha}): "
        f"bounded={bounded}, nonincreasing={nonincreasing}"
    )
    return LogResult(
        records=records,
        alpha=cfg.alpha,
        bounded=bounded,
        nonincreasing=nonincreasing,
        failures=sum(1 for r in records if r.failure is not None),
    )


def log_experiment(cfg: LogConfig) -> LogResult:
    return asyncio.run(alog_experiment(cfg))
