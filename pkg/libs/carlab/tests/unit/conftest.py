import pytest

from carlab.discretize.grid import Grid
from carlab.forward.options import SolveOptions, TimeScheme
from carlab.model.presets import PresetName, preset

pytest.register_assert_rewrite("tests.unit.assertions")


def pytest_configure(config):
    """Register the carlab testing plugin if not already loaded via entry-point."""
    if not config.pluginmanager.has_plugin("carlab"):
        import carlab.testing.plugin

        config.pluginmanager.register(carlab.testing.plugin, "carlab")


@pytest.fixture
def fine_grid(carlab_grid) -> Grid:
    """Five times the configured spacing refinement, ten times the time steps."""
    return carlab_grid.model_copy(update={"nx": 5 * carlab_grid.nx, "nt": 10 * carlab_grid.nt})


@pytest.fixture
def heat1d():
    return preset(PresetName.HEAT1D)


@pytest.fixture
def coupled2():
    return preset(PresetName.COUPLED2)


@pytest.fixture
def paper_example():
    return preset(PresetName.PAPER_EXAMPLE)


@pytest.fixture
def cn_options() -> SolveOptions:
    return SolveOptions(scheme=TimeScheme.CRANK_NICOLSON)
