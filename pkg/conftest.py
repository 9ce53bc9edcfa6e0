from __future__ import annotations

import os

import pytest
from hypothesis import settings

DATA_DIR = os.path.join(os.path.dirname(os.path.abspath(__file__)), "data")

settings.register_profile("flagforge", deadline=None)
settings.load_profile("flagforge")


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: full-size exhaustive sweeps (deselect with -m 'not slow')")


@pytest.fixture
def data_path():
    def path(name: str) -> str:
        return os.path.join(DATA_DIR, name)

    return path
