import asyncio
import logging
from functools import partial
from typing import Sequence

from pydantic import BaseModel

from carlab.carleman.budget import CarlemanBudget, carleman_budget
from carlab.carleman.weight import CarlemanWeight
from carlab.consts import BC_DEFECT_TOLERANCE, DEFAULT_MAX_CONCURRENCY
from carlab.discretize.operators import apply_P, boundary_defect
from carlab.discretize.trajectory import Trajectory
from carlab.errors import DomainError
from carlab.model.coefficients import CoefficientSet
from carlab.utils.concurrency import gather_bounded

logger = logging.getLogger(__name__)


class LambdaDiagnostics(BaseModel):
    lambda_: float
    monotone_in_s: bool
    top_octave_ratio: float | None


class CarlemanSweep(BaseModel):
    cells: list[CarlemanBudget]
    sup_c_star: float
    argmax_s: float
    argmax_lambda: float
    diagnostics: list[LambdaDiagnostics]
    bc_defect: float
    bc_warning: bool


def _diagnostics(cells: list[CarlemanBudget], lambda_: float) -> LambdaDiagnostics:
    row = sorted((cell for cell in cells if cell.lambda_ == lambda_), key=lambda c: c.s)
    values = [cell.c_star for cell in row]
    monotone = all(later <= earlier for earlier, later in zip(values, values[1:]))
    top = row[-1].s
    octave = [cell.c_star for cell in row if cell.s >= top / 2]
    ratio = None
    if len(octave) > 1 and min(octave) > 0:
        ratio = max(octave) / min(octave)
    return LambdaDiagnostics(lambda_=lambda_, monotone_in_s=monotone, top_octave_ratio=ratio)


async def asweep_constant(
    z: Trajectory,
    coeffs: CoefficientSet,
    s_list: Sequence[float],
    lambda_list: Sequence[float],
    max_concurrency: int = DEFAULT_MAX_CONCURRENCY,
) -> CarlemanSweep:
    if not s_list or not lambda_list:
        raise DomainError("Carleman sweep needs nonempty s and lambda lists")

    defect = boundary_defect(z, coeffs)
    bc_warning = defect > BC_DEFECT_TOLERANCE
    if bc_warning:
        logger.warning(
            f"Trajectory violates its {z.bc.kind.value} boundary condition "
            f"(relative defect {defect:.3e}); Carleman budgets computed anyway"
        )

    residual = apply_P(z, coeffs, full=True)
    cells = [(s, lambda_) for lambda_ in lambda_list for s in s_list]
    budgets = await gather_bounded(
        [
            partial(
                carleman_budget,
                z,
                coeffs,
                CarlemanWeight(s=s, lambda_=lambda_),
                residual=residual,
                bc_warning=bc_warning,
            )
            for s, lambda_ in cells
        ],
        max_concurrency=max_concurrency,
    )
    best = max(budgets, key=lambda budget: budget.c_star)
    logger.info(
        f"Carleman sweep over {len(budgets)} cells: sup c_star {best.c_star:.4e} "
        f"at s={best.s}, lambda={best.lambda_}"
    )
    return CarlemanSweep(
        cells=budgets,
        sup_c_star=best.c_star,
        argmax_s=best.s,
        argmax_lambda=best.lambda_,
        diagnostics=[_diagnostics(budgets, lambda_) for lambda_ in dict.fromkeys(lambda_list)],
        bc_defect=defect,
        bc_warning=bc_warning,
    )


def sweep_constant(
    z: Trajectory,
    coeffs: CoefficientSet,
    s_list: Sequence[float],
    lambda_list: Sequence[float],
    max_concurrency: int = DEFAULT_MAX_CONCURRENCY,
) -> CarlemanSweep:
    return asyncio.run(asweep_constant(z, coeffs, s_list, lambda_list, max_concurrency))
