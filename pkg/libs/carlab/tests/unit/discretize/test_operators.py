import math

import numpy as np
import pytest

from carlab.consts import BC_DEFECT_TOLERANCE
from carlab.discretize.grid import Grid
from carlab.discretize.operators import (
    apply_P,
    assemble_A,
    boundary_defect,
    from_vector,
    gradient,
    gradient_matrix,
    to_vector,
)
from carlab.discretize.trajectory import Trajectory
from carlab.errors import UnsupportedConfigurationError
from carlab.forward.solver import solve_forward
from carlab.model.boundary import BoundaryCondition
from carlab.model.coefficients import CoefficientSet
from carlab.model.presets import PresetName, initial_state, preset
from tests.unit.utils import exact_heat_mode, sine_mode


class TestAssembleA:
    def test_heat_operator_on_sine(self, fine_grid, heat1d):
        coeffs, bc, _ = heat1d
        operator = assemble_A(coeffs, 0.0, fine_grid, bc)

        applied = operator @ to_vector(sine_mode(fine_grid))

        np.testing.assert_allclose(applied[1:-1], -sine_mode(fine_grid)[0, 1:-1], atol=1e-4)
        assert applied[0] == 0.0 and applied[-1] == 0.0

    def test_coupled_operator_is_symmetric(self, coupled2):
        coeffs, bc, _ = coupled2
        operator = assemble_A(coeffs, 0.0, Grid(nx=30, nt=2), bc)

        assert abs(operator - operator.T).max() < 1e-12

    def test_dirichlet_boundary_columns_vanish(self):
        grid = Grid(nx=20, nt=2)
        coeffs = CoefficientSet.from_constants(
            np.ones((1, 1, 1, 1)), b=np.full((1, 1, 1), 0.5), c=np.array([[-2.0]]), sigma=1.0
        )

        dense = assemble_A(coeffs, 0.0, grid, BoundaryCondition.dirichlet()).toarray()

        assert not dense[:, [0, -1]].any()
        assert not dense[[0, -1], :].any()

    @pytest.mark.parametrize(
        "profiles",
        [
            lambda x: [np.sin(x), -np.sin(x)],
            lambda x: [np.sin(x) + 0.5 * np.sin(3 * x), np.sin(2 * x)],
        ],
    )
    def test_energy_bounded_by_ellipticity(self, coupled2, profiles):
        coeffs, bc, _ = coupled2
        grid = Grid(nx=200, nt=2)
        field = np.array(profiles(grid.nodes))
        field[:, [0, -1]] = 0.0

        applied = from_vector(assemble_A(coeffs, 0.0, grid, bc) @ to_vector(field), 2)
        energy = float(np.sum(grid.weights * applied * field))
        gradient_energy = float(np.sum(grid.weights * gradient(field, grid) ** 2))

        # <A u, u> <= -sigma ||grad u||^2 up to the O(h^2) quadrature gap
        assert energy <= -coeffs.sigma * gradient_energy + grid.h**2 * gradient_energy
        assert energy < 0

    def test_coupled_eigenvector(self, fine_grid, coupled2):
        coeffs, bc, _ = coupled2
        field = sine_mode(fine_grid, components=2)

        applied = from_vector(assemble_A(coeffs, 0.0, fine_grid, bc) @ to_vector(field), 2)

        np.testing.assert_allclose(applied[:, 1:-1], -3 * field[:, 1:-1], atol=1e-3)

    def test_robin_row_on_constant(self):
        grid = Grid(nx=20, nt=2)
        coeffs, bc, _ = preset(PresetName.HEAT1D, boundary="robin", robin_p=0.5)

        applied = assemble_A(coeffs, 0.0, grid, bc) @ np.ones(grid.size)

        assert applied[0] == pytest.approx(-2 * 0.5 / grid.h)
        assert applied[-1] == pytest.approx(-2 * 0.5 / grid.h)
        np.testing.assert_allclose(applied[1:-1], 0.0, atol=1e-10)

    def test_reaction_term(self):
        grid = Grid(nx=20, nt=2)
        coeffs = CoefficientSet.from_constants(
            np.ones((1, 1, 1, 1)), c=np.array([[-2.0]]), sigma=1.0
        )
        field = np.zeros((1, grid.size))
        field[0, 5] = 1.0

        full = assemble_A(coeffs, 0.0, grid, BoundaryCondition.dirichlet()) @ to_vector(field)
        principal = assemble_A(
            coeffs, 0.0, grid, BoundaryCondition.dirichlet(), lower_order=False
        ) @ to_vector(field)

        assert full[5] - principal[5] == pytest.approx(-2.0)

    def test_two_dimensional_coefficients_rejected(self):
        coeffs = CoefficientSet.from_constants(np.eye(2).reshape(1, 1, 2, 2), sigma=1.0)

        with pytest.raises(UnsupportedConfigurationError):
            assemble_A(coeffs, 0.0, Grid(nx=10, nt=2), BoundaryCondition.dirichlet())


class TestGradient:
    def test_matrix_matches_gradient(self):
        grid = Grid(nx=25, nt=2)
        field = np.cos(grid.nodes) + grid.nodes**2

        np.testing.assert_allclose(gradient_matrix(grid) @ field, gradient(field, grid), atol=1e-12)

    def test_vector_round_trip_layout(self):
        field = np.arange(6.0).reshape(2, 3)

        np.testing.assert_array_equal(to_vector(field), [0.0, 3.0, 1.0, 4.0, 2.0, 5.0])
        np.testing.assert_array_equal(from_vector(to_vector(field), 2), field)


class TestApplyP:
    def test_exact_heat_solution_has_small_residual(self, fine_grid, heat1d):
        coeffs, bc, _ = heat1d
        traj = Trajectory.from_function(fine_grid, exact_heat_mode(), bc)

        residual = apply_P(traj, coeffs)

        assert np.max(np.abs(residual[:, :, 1:-1])) <= 1e-3

    def test_wrong_rate_is_detected(self, fine_grid, heat1d):
        coeffs, bc, _ = heat1d
        traj = Trajectory.from_function(fine_grid, exact_heat_mode(rate=2.0), bc)

        residual = apply_P(traj, coeffs)

        assert np.max(np.abs(residual)) > 0.1

    def test_lower_order_terms_split_off(self, fine_grid):
        coeffs = CoefficientSet.from_constants(
            np.ones((1, 1, 1, 1)), b=np.full((1, 1, 1), 0.5), c=np.array([[-2.0]]), sigma=1.0
        )
        traj = Trajectory.from_function(fine_grid, exact_heat_mode())

        difference = apply_P(traj, coeffs) - apply_P(traj, coeffs, full=False)

        values = traj.values
        expected = -(0.5 * gradient(values, fine_grid) - 2.0 * values)
        np.testing.assert_allclose(
            difference[:, :, 1:-1], expected[:, :, 1:-1], atol=1e-10
        )
        assert not difference[:, :, [0, -1]].any()

    def test_semilinear_solution_residual_matches_f(self, paper_example):
        coeffs, bc, f = paper_example
        grid = Grid(nx=100, nt=1000)
        traj = solve_forward(coeffs, bc, f, sine_mode(grid), grid)

        residual = apply_P(traj, coeffs)

        expected = np.stack(
            [
                f(grid.points, t, values, gradient(values, grid)[:, None, :])
                for t, values in zip(grid.times, traj.values)
            ]
        )
        # slices after the start-up transient of the stiff modes
        settled = slice(100, None)
        np.testing.assert_allclose(
            residual[settled, :, 1:-1], expected[settled, :, 1:-1], atol=5e-3
        )


class TestBoundaryDefect:
    def test_dirichlet_trajectory_complies(self, carlab_grid, heat1d):
        coeffs, bc, _ = heat1d
        traj = Trajectory.from_function(carlab_grid, exact_heat_mode(), bc)

        assert boundary_defect(traj, coeffs) < 1e-12

    def test_dirichlet_violation(self, carlab_grid, heat1d):
        coeffs, bc, _ = heat1d
        traj = Trajectory.from_function(carlab_grid, lambda x, t: np.cos(x), bc)

        assert boundary_defect(traj, coeffs) == pytest.approx(1.0)

    def test_robin_solution_complies(self):
        grid = Grid(nx=100, nt=400)
        coeffs, bc, f = preset(PresetName.HEAT1D, boundary="robin", robin_p=0.5)
        traj = solve_forward(coeffs, bc, f, initial_state(grid, bc), grid)

        assert boundary_defect(traj, coeffs) < BC_DEFECT_TOLERANCE

    def test_robin_violation(self):
        grid = Grid(nx=100, nt=10)
        coeffs, bc, _ = preset(PresetName.HEAT1D, boundary="robin", robin_p=0.5)
        traj = Trajectory.from_function(grid, lambda x, t: np.cos(x) + 2.0, bc)

        assert boundary_defect(traj, coeffs) > 0.1

    def test_zero_trajectory(self, carlab_grid, heat1d):
        coeffs, bc, _ = heat1d
        traj = Trajectory.from_function(carlab_grid, lambda x, t: 0 * x, bc)

        assert boundary_defect(traj, coeffs) == 0.0
