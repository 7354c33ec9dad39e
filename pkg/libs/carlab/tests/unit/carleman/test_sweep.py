import math

import numpy as np
import pytest

from carlab.carleman.sweep import asweep_constant, sweep_constant
from carlab.consts import DEFAULT_LAMBDA_LIST, DEFAULT_S_LIST
from carlab.discretize.grid import Grid
from carlab.discretize.trajectory import Trajectory
from carlab.errors import DomainError
from carlab.forward.solver import solve_forward
from carlab.model.presets import PresetName, initial_state, preset


def _solved(name: PresetName, boundary: str, grid: Grid):
    coeffs, bc, f = preset(name, boundary=boundary)
    return solve_forward(coeffs, bc, f, initial_state(grid, bc, coeffs.N), grid), coeffs


class TestSweepConstant:
    @pytest.mark.slow
    @pytest.mark.parametrize("name", [PresetName.HEAT1D, PresetName.COUPLED2])
    @pytest.mark.parametrize("boundary", ["dirichlet", "robin"])
    def test_solver_trajectories_have_bounded_constant(self, fine_grid, name, boundary):
        z, coeffs = _solved(name, boundary, fine_grid)

        sweep = sweep_constant(z, coeffs, DEFAULT_S_LIST, DEFAULT_LAMBDA_LIST)

        assert len(sweep.cells) == len(DEFAULT_S_LIST) * len(DEFAULT_LAMBDA_LIST)
        assert math.isfinite(sweep.sup_c_star)
        assert not sweep.bc_warning
        top = next(d for d in sweep.diagnostics if d.lambda_ == 8.0)
        assert top.top_octave_ratio is not None and top.top_octave_ratio < 2.0

    async def test_async_sweep_orders_cells(self, carlab_grid):
        z, coeffs = _solved(PresetName.HEAT1D, "dirichlet", carlab_grid)

        sweep = await asweep_constant(z, coeffs, [2.0, 4.0], [2.0, 4.0], max_concurrency=2)

        assert [(c.s, c.lambda_) for c in sweep.cells] == [
            (2.0, 2.0),
            (4.0, 2.0),
            (2.0, 4.0),
            (4.0, 4.0),
        ]
        best = max(sweep.cells, key=lambda cell: cell.c_star)
        assert (sweep.argmax_s, sweep.argmax_lambda) == (best.s, best.lambda_)

    def test_boundary_violation_only_warns(self, carlab_grid, caplog):
        coeffs, bc, _ = preset(PresetName.HEAT1D)
        z = Trajectory.from_function(carlab_grid, lambda x, t: np.exp(-t) * np.cos(x), bc)

        sweep = sweep_constant(z, coeffs, [2.0], [2.0])

        assert sweep.bc_warning
        assert sweep.cells[0].bc_warning
        assert "violates" in caplog.text

    def test_zero_trajectory(self, carlab_grid):
        coeffs, _, _ = preset(PresetName.HEAT1D)
        zero = Trajectory.from_function(carlab_grid, lambda x, t: 0 * x)

        sweep = sweep_constant(zero, coeffs, [2.0, 4.0], [2.0])

        assert sweep.sup_c_star == 0.0

    @pytest.mark.parametrize(["s_list", "lambda_list"], [[[], [2.0]], [[2.0], []]])
    def test_empty_lists(self, carlab_grid, s_list, lambda_list):
        coeffs, _, _ = preset(PresetName.HEAT1D)
        zero = Trajectory.from_function(carlab_grid, lambda x, t: 0 * x)

        with pytest.raises(DomainError):
            sweep_constant(zero, coeffs, s_list, lambda_list)
