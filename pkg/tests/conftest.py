"""Shared fixtures: built-in complexes and a throwaway settings file"""

import logging
import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent.parent / "src"))

from core.generators import circle, cube_boundary, standard_cube, torus_grid  # noqa: E402
from utils.corpus import corpus_load  # noqa: E402
from utils.logger import CONSOLE_HANDLER, FILE_HANDLER  # noqa: E402


@pytest.fixture(scope="session")
def torus():
    return torus_grid(4, 4)


@pytest.fixture(scope="session")
def small_torus():
    return torus_grid(3, 3)


@pytest.fixture(scope="session")
def klein():
    return corpus_load("klein")


@pytest.fixture(scope="session")
def sphere():
    return cube_boundary(3)


@pytest.fixture(scope="session")
def triangle():
    return circle(3)


@pytest.fixture(scope="session")
def cube3():
    return standard_cube(3)


@pytest.fixture(autouse=True)
def isolated_settings(tmp_path, monkeypatch):
    monkeypatch.setenv("GEOCUBE_CONFIG", str(tmp_path / "settings.ini"))


@pytest.fixture(autouse=True)
def reset_logging():
    yield
    root = logging.getLogger()
    for handler in list(root.handlers):
        if handler.get_name() in (CONSOLE_HANDLER, FILE_HANDLER):
            root.removeHandler(handler)
            handler.close()
    root.setLevel(logging.WARNING)
