"""Pytest configuration for qetale tests.

CLI tests run the package in a subprocess; each xdist worker gets its own
HOME and working directory so a stray ``qetale.toml`` never leaks in.
"""

from __future__ import annotations

import os
from pathlib import Path
from typing import Dict

import pytest

from qetale.config import Settings, use_settings
from qetale.exprio import SystemFile, parse_system_file
from qetale.ideals import clear_caches

QETALE_ROOT = Path(__file__).parent.parent
FIXTURES_DIR = QETALE_ROOT / "fixtures"


def _base_cli_env(home: Path) -> Dict[str, str]:
    """Return environment variables for deterministic, non-interactive CLI runs."""
    env = {k: v for k, v in os.environ.items() if not k.startswith("QETALE_")}
    env.update({
        "HOME": str(home),
        "QETALE_LOGGING_VERBOSITY": "WARNING",
        "PYTHONIOENCODING": "utf-8",
        "PYTHONPATH": os.pathsep.join(filter(None, [str(QETALE_ROOT), os.environ.get("PYTHONPATH", "")])),
        "PATH": os.environ.get("PATH", ""),
    })
    return env


@pytest.fixture(scope="session")
def worker_id(request: pytest.FixtureRequest) -> str:
    """Get the xdist worker ID, or 'master' if not using xdist."""
    if hasattr(request.config, "workerinput"):
        return request.config.workerinput["workerid"]
    return "master"


@pytest.fixture(scope="session")
def worker_home(tmp_path_factory: pytest.TempPathFactory, worker_id: str) -> Path:
    return tmp_path_factory.mktemp(f"home_{worker_id}")


@pytest.fixture(scope="session")
def cli_env(worker_home: Path) -> Dict[str, str]:
    """Environment variables for running the CLI."""
    return _base_cli_env(worker_home)


@pytest.fixture(autouse=True)
def default_settings():
    """Run every test with default settings and cold ideal caches."""
    clear_caches()
    with use_settings(Settings()) as settings:
        yield settings


def load_system(name: str) -> SystemFile:
    return parse_system_file((FIXTURES_DIR / name).read_text(encoding="utf-8"))


@pytest.fixture
def cubic() -> SystemFile:
    return load_system("cubic.sys")


@pytest.fixture
def torus() -> SystemFile:
    return load_system("torus.sys")


@pytest.fixture
def twin_parabolas() -> SystemFile:
    return load_system("twin_parabolas.sys")


@pytest.fixture
def hyperbola_origin() -> SystemFile:
    return load_system("hyperbola_origin.sys")


@pytest.fixture
def hyperbola_pair() -> SystemFile:
    return load_system("hyperbola_pair.sys")
