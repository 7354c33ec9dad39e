import numpy as np
import pytest

from carlab.testing import Resolution
from carlab.testing._config import _get_resolution, _grid_size, _read_testing_config


class TestResolution:
    def test_env_var_wins(self, monkeypatch):
        monkeypatch.setenv("CARLAB_TESTING_RESOLUTION", "fine")

        assert _get_resolution({"resolution": "coarse"}) == Resolution.FINE

    def test_config_value(self, monkeypatch):
        monkeypatch.delenv("CARLAB_TESTING_RESOLUTION", raising=False)

        assert _get_resolution({"resolution": "coarse"}) == Resolution.COARSE

    def test_unknown_value_falls_back(self, monkeypatch):
        monkeypatch.setenv("CARLAB_TESTING_RESOLUTION", "ultra")

        assert _get_resolution({}) == Resolution.DEFAULT

    def test_grid_size_scales(self, monkeypatch):
        monkeypatch.setenv("CARLAB_TESTING_RESOLUTION", "coarse")

        assert _grid_size({"nx": 64, "nt": 400}, {}) == (32, 200)
        assert _grid_size({"nx": 64, "nt": 400}, {"nx": 10}) == (10, 200)


class TestReadConfig:
    def test_reads_tool_section(self, tmp_path):
        (tmp_path / "pyproject.toml").write_text("[tool.carlab.testing]\nnx = 16\nnt = 32\n")

        assert _read_testing_config(tmp_path) == {"nx": 16, "nt": 32}

    def test_missing_section(self, tmp_path):
        (tmp_path / "pyproject.toml").write_text("[project]\nname = 'x'\n")

        assert _read_testing_config(tmp_path) == {}


class TestFixtures:
    @pytest.mark.carlab(nx=12, nt=24, final_time=2.0)
    def test_marker_overrides_grid(self, carlab_grid):
        assert (carlab_grid.nx, carlab_grid.nt, carlab_grid.final_time) == (12, 24, 2.0)

    @pytest.mark.carlab(seed=11)
    def test_seeded_rng(self, carlab_rng):
        assert carlab_rng.random() == np.random.default_rng(11).random()
