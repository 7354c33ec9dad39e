import csv
import math

import numpy as np
import pytest
from carlab.discretize import Grid, read_grid_function_csv, write_grid_function_csv
from carlab.stability import theta

from carlab_runner.commands import carlab
from tests.unit.assertions import (
    assert_all_invariants,
    assert_artifacts_consistent,
    load_manifest,
)
from tests.unit.utils import cli_args


def read_rows(path) -> list[dict]:
    with path.open(newline="") as f:
        return list(csv.DictReader(f))


class TestValidateCommand:
    def test_coupled2_passes(self, cli_runner, output_dir):
        result = cli_runner.invoke(
            carlab, ["validate", "--preset", "coupled2", "--output-dir", str(output_dir)]
        )

        assert result.exit_code == 0, result.output
        assert "PASS" in result.output
        assert_artifacts_consistent(output_dir, "validate")
        assert_all_invariants(output_dir)

    def test_paper_example_checks_lipschitz(self, cli_runner, output_dir):
        result = cli_runner.invoke(
            carlab, cli_args("validate", output_dir, "--preset", "paper_example")
        )

        assert result.exit_code == 0, result.output
        names = [check["name"] for check in load_manifest(output_dir)["invariants"]]
        assert "lipschitz" in names
        assert "trace_inequality" in names

    def test_asymmetric_inline_coefficients_fail_symmetry(
        self, cli_runner, output_dir, write_config
    ):
        path = write_config(
            "[coefficients]\ndiffusion = [[2.0, 1.0], [0.0, 2.0]]\nsigma = 1.0\n"
        )

        result = cli_runner.invoke(
            carlab, cli_args("validate", output_dir, "--config", str(path))
        )

        assert result.exit_code == 3
        assert "symmetry_and_ellipticity" in result.output
        assert_artifacts_consistent(output_dir, "validate", exit_code=3)
        assert_all_invariants(output_dir, passed=False)


class TestForwardCommand:
    def test_writes_norm_and_terminal_tables(self, cli_runner, output_dir):
        result = cli_runner.invoke(carlab, cli_args("forward", output_dir))

        assert result.exit_code == 0, result.output
        assert_artifacts_consistent(output_dir, "forward")
        norms = read_rows(output_dir / "forward.csv")
        assert len(norms) == 201
        assert float(norms[-1]["l2"]) < float(norms[0]["l2"])
        terminal = read_rows(output_dir / "forward_terminal.csv")
        assert list(terminal[0]) == ["x", "component", "value"]
        assert len(terminal) == 42

    def test_writes_full_trajectory(self, cli_runner, output_dir):
        result = cli_runner.invoke(carlab, cli_args("forward", output_dir))

        assert result.exit_code == 0, result.output
        rows = read_rows(output_dir / "trajectory.csv")
        assert list(rows[0]) == ["t", "x", "component", "value"]
        assert len(rows) == 201 * 42
        assert float(rows[-1]["t"]) == 1.0
        assert "trajectory.csv" in load_manifest(output_dir)["csv_sha256"]

    def test_trajectory_stride_thins_time_slices(self, cli_runner, output_dir):
        result = cli_runner.invoke(
            carlab, cli_args("forward", output_dir, "--trajectory-stride", "50")
        )

        assert result.exit_code == 0, result.output
        rows = read_rows(output_dir / "trajectory.csv")
        assert sorted({float(row["t"]) for row in rows}) == pytest.approx(
            [0.0, 0.25, 0.5, 0.75, 1.0]
        )

    def test_identical_seeds_give_identical_csv(self, cli_runner, tmp_path):
        first, second = tmp_path / "first", tmp_path / "second"
        args = ["--preset", "paper_example", "--seed", "3"]

        for target in (first, second):
            result = cli_runner.invoke(carlab, cli_args("forward", target, *args))
            assert result.exit_code == 0, result.output

        for name in ("forward.csv", "forward_terminal.csv", "trajectory.csv"):
            assert (first / name).read_bytes() == (second / name).read_bytes()
        assert (
            load_manifest(first)["csv_sha256"] == load_manifest(second)["csv_sha256"]
        )

    def test_manifest_records_config_and_versions(self, cli_runner, output_dir):
        cli_runner.invoke(carlab, cli_args("forward", output_dir, "--T", "0.5"))

        manifest = load_manifest(output_dir)

        assert manifest["config"]["T"] == 0.5
        assert manifest["config"]["nx"] == 40
        assert {"python", "numpy", "scipy", "carlab"} <= set(manifest["versions"])
        assert manifest["timings"]["total_seconds"] >= 0


class TestCarlemanCommand:
    def test_sweep_grid(self, cli_runner, output_dir):
        result = cli_runner.invoke(
            carlab,
            cli_args(
                "carleman", output_dir, "--preset", "heat1d", "--s", "2,4,8,16", "--lambda", "2,4"
            ),
        )

        assert result.exit_code == 0, result.output
        rows = read_rows(output_dir / "carleman.csv")
        assert len(rows) == 8
        assert list(rows[0])[:9] == [
            "s", "lambda", "lhs_mantissa", "lhs_exponent", "rhs_interior",
            "rhs_terminal", "rhs_initial", "c_star", "bc_warning",
        ]
        assert all(math.isfinite(float(row["c_star"])) for row in rows)
        assert {row["bc_warning"] for row in rows} == {"False"}
        # exponent column is 2 s e^{lambda T}
        first = rows[0]
        assert float(first["lhs_exponent"]) == pytest.approx(
            2 * float(first["s"]) * math.exp(float(first["lambda"]))
        )
        assert "sup c_star" in result.output


@pytest.mark.slow
class TestStabilityCommands:
    def test_holder_single_mode(self, cli_runner, output_dir):
        result = cli_runner.invoke(
            carlab,
            cli_args(
                "holder",
                output_dir,
                "--preset", "heat1d",
                "--t0", "0.5",
                "--T", "1",
                "--lambda", "4",
                "--eps", "1e-1,1e-2,1e-3,1e-4",
            ),
        )

        assert result.exit_code == 0, result.output
        rows = read_rows(output_dir / "holder.csv")
        assert [float(row["epsilon"]) for row in rows] == [1e-1, 1e-2, 1e-3, 1e-4]
        assert {"theta", "slope"} <= set(rows[0])
        assert len({row["slope"] for row in rows}) == 1
        assert float(rows[0]["theta"]) == pytest.approx(
            theta(t0=0.5, final_time=1.0, lambda_=4.0)
        )
        assert "theta" in result.output
        assert_all_invariants(output_dir)

    def test_lograte_single_mode(self, cli_runner, output_dir):
        result = cli_runner.invoke(carlab, cli_args("lograte", output_dir, "--alpha", "0.5"))

        assert result.exit_code == 0, result.output
        rows = read_rows(output_dir / "lograte.csv")
        assert len(rows) == 5
        assert list(rows[0])[:6] == ["epsilon", "E_0", "D", "theta", "slope", "product"]

    def test_lograte_rejects_semilinear_preset(self, cli_runner, output_dir):
        result = cli_runner.invoke(
            carlab, cli_args("lograte", output_dir, "--preset", "paper_example")
        )

        assert result.exit_code == 1
        assert "linear" in result.output
        assert load_manifest(output_dir)["exit_code"] == 1


class TestReconstructCommand:
    def test_tikhonov_trend(self, cli_runner, output_dir):
        result = cli_runner.invoke(
            carlab,
            cli_args("reconstruct", output_dir, "--preset", "heat1d", grid=["--nx", "200", "--nt", "2"]),
        )

        assert result.exit_code == 0, result.output
        assert len(read_rows(output_dir / "reconstruct.csv")) == 5

    def test_inverts_terminal_csv(self, cli_runner, output_dir, tmp_path):
        grid = Grid(nx=200, nt=2)
        terminal_path = tmp_path / "terminal.csv"
        write_grid_function_csv(terminal_path, math.exp(-1.0) * np.sin(grid.nodes), grid)

        result = cli_runner.invoke(
            carlab,
            cli_args(
                "reconstruct", output_dir, "--terminal", str(terminal_path), grid=["--nt", "2"]
            ),
        )

        assert result.exit_code == 0, result.output
        assert_artifacts_consistent(output_dir, "reconstruct")
        nodes, estimate = read_grid_function_csv(output_dir / "estimate.csv")
        np.testing.assert_allclose(nodes, grid.nodes)
        np.testing.assert_allclose(estimate[0], np.sin(grid.nodes), atol=1e-4)
        assert read_rows(output_dir / "reconstruct.csv")[0]["retained_modes"] == "1"

    def test_noisy_terminal_csv_is_damped(self, cli_runner, output_dir, tmp_path):
        grid = Grid(nx=100, nt=2)
        terminal_path = tmp_path / "terminal.csv"
        write_grid_function_csv(terminal_path, np.sin(7 * grid.nodes), grid)

        result = cli_runner.invoke(
            carlab,
            cli_args(
                "reconstruct",
                output_dir,
                "--terminal", str(terminal_path),
                "--filter", "truncation",
                "--noise-level", "1e-3",
            ),
        )

        assert result.exit_code == 0, result.output
        _, estimate = read_grid_function_csv(output_dir / "estimate.csv")
        # mu_7 T ~ 49 exceeds log(1 / delta), so truncation drops the only mode present
        assert np.max(np.abs(estimate)) < 1e-6

    def test_irregular_terminal_grid_is_a_config_error(
        self, cli_runner, output_dir, tmp_path
    ):
        terminal_path = tmp_path / "terminal.csv"
        terminal_path.write_text(
            "x,component,value\n0.0,0,0.0\n0.1,0,1.0\n0.3,0,1.0\n0.4,0,1.0\n0.9,0,0.0\n"
        )

        result = cli_runner.invoke(
            carlab, cli_args("reconstruct", output_dir, "--terminal", str(terminal_path))
        )

        assert result.exit_code == 1
        assert "uniform" in result.output
        assert load_manifest(output_dir)["exit_code"] == 1

    def test_robin_rejected(self, cli_runner, output_dir):
        result = cli_runner.invoke(
            carlab, cli_args("reconstruct", output_dir, "--boundary", "robin")
        )

        assert result.exit_code == 1
        assert "Dirichlet" in result.output


class TestConfigErrors:
    def test_invalid_grid_size(self, cli_runner, output_dir):
        result = cli_runner.invoke(carlab, ["forward", "--nx", "1", "--output-dir", str(output_dir)])

        assert result.exit_code == 1
        assert "nx" in result.output
        assert not output_dir.exists()

    def test_bad_float_list_is_a_config_error(self, cli_runner, output_dir):
        result = cli_runner.invoke(carlab, cli_args("holder", output_dir, "--eps", "1e-1,abc"))

        assert result.exit_code == 1
        assert "comma-separated" in result.output

    def test_unknown_preset_is_a_config_error(self, cli_runner, output_dir):
        result = cli_runner.invoke(carlab, cli_args("forward", output_dir, "--preset", "wave"))

        assert result.exit_code == 1

    def test_missing_config_file(self, cli_runner, output_dir, tmp_path):
        result = cli_runner.invoke(
            carlab, cli_args("forward", output_dir, "--config", str(tmp_path / "none.toml"))
        )

        assert result.exit_code == 1

    def test_increasing_eps_list_leaves_a_manifest(self, cli_runner, output_dir):
        result = cli_runner.invoke(carlab, cli_args("holder", output_dir, "--eps", "1e-3,1e-2"))

        assert result.exit_code == 1
        assert "strictly decreasing" in result.output
        manifest = load_manifest(output_dir)
        assert manifest["exit_code"] == 1
        assert "eps_list" in manifest["message"]
        assert manifest["csv_sha256"] == {}
