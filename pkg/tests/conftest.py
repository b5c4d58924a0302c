from __future__ import annotations

import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from mockserver import MockComponentServer  # noqa: E402

from plumber.config import AppConfig
from plumber.service import AppState, build_state

FIXTURE_TEXT = "Einstein was born in Ulm. He developed relativity."


@pytest.fixture()
def toy_state(tmp_path) -> AppState:
    """Default registry (six native components) over the bundled toy KG."""
    return build_state(AppConfig(data_dir=tmp_path / "plumber-data"))


@pytest.fixture(scope="session")
def mock_server():
    server = MockComponentServer().start()
    yield server
    server.stop()
