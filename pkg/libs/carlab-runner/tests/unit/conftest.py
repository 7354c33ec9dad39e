from pathlib import Path

import pytest
from click.testing import CliRunner

pytest.register_assert_rewrite("tests.unit.assertions")


@pytest.fixture
def cli_runner() -> CliRunner:
    return CliRunner()


@pytest.fixture
def output_dir(tmp_path: Path) -> Path:
    return tmp_path / "run"


@pytest.fixture
def write_config(tmp_path: Path):
    def _write(text: str, name: str = "run.toml") -> Path:
        path = tmp_path / name
        path.write_text(text)
        return path

    return _write
