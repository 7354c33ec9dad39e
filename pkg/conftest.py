# Root-level collection wiring for running every workspace test suite in one
# pytest invocation. Each package under libs/ ships its own top-level ``tests``
# package (imported as ``tests.unit...``), so the cached ``tests`` modules from
# one library must be dropped before collecting the next library's suite.
import sys
from pathlib import Path

import pytest

_LIBS_DIR = Path(__file__).parent.resolve() / "libs"


def _purge_foreign_tests_modules(path: Path) -> None:
    path = Path(path).resolve()
    if _LIBS_DIR not in path.parents:
        return
    lib_dir = _LIBS_DIR / path.relative_to(_LIBS_DIR).parts[0]
    for name in list(sys.modules):
        if name != "tests" and not name.startswith("tests."):
            continue
        module_file = getattr(sys.modules[name], "__file__", None)
        if module_file is None or lib_dir not in Path(module_file).resolve().parents:
            del sys.modules[name]
    lib_entry = str(lib_dir)
    if lib_entry in sys.path and sys.path[0] != lib_entry:
        sys.path.remove(lib_entry)
        sys.path.insert(0, lib_entry)


@pytest.hookimpl(tryfirst=True)
def pytest_collect_directory(path, parent):
    _purge_foreign_tests_modules(path)


@pytest.hookimpl(tryfirst=True)
def pytest_collect_file(file_path, parent):
    _purge_foreign_tests_modules(file_path)


@pytest.hookimpl(tryfirst=True)
def pytest_runtest_setup(item):
    _purge_foreign_tests_modules(item.path)
