import os

import pytest

from app.config import config
from app.core.ordinal import OMEGA, Ordinal, omega_pow
from app.utils.batch_processor import SuiteRunner
from app.utils.cache_manager import derivative_cache

ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
SAMPLES = os.path.join(ROOT, "data", "samples")


@pytest.fixture(autouse=True)
def clean_config(monkeypatch):
    """Each test starts from the documented defaults."""
    for name in ("DERIVATIVE_BOUND", "EPSILON_ATOMS", "RANDOM_SEED", "OUTPUT_FORMAT", "LOG_LEVEL", "LOG_TO_FILE", "CATALOG_PATH"):
        monkeypatch.delenv(name, raising=False)
    monkeypatch.setenv("CATALOG_PATH", os.path.join(ROOT, "data", "catalog", "regions.json"))
    config.reset_overrides()
    yield
    config.reset_overrides()


@pytest.fixture
def w() -> Ordinal:
    return OMEGA


@pytest.fixture
def w2() -> Ordinal:
    return omega_pow(2)


@pytest.fixture
def w3() -> Ordinal:
    return omega_pow(3)


@pytest.fixture
def runner() -> SuiteRunner:
    return SuiteRunner(workers=1, batch_size=16)


@pytest.fixture
def threaded_runner() -> SuiteRunner:
    return SuiteRunner(workers=2, batch_size=4)


@pytest.fixture
def sample():
    def path(name: str) -> str:
        return os.path.join(SAMPLES, name)

    return path


@pytest.fixture
def fresh_cache():
    derivative_cache.clear()
    yield derivative_cache
    derivative_cache.clear()
