import numpy as np
import pytest

from qrelativity.features import Grid1D, SlitConfig
from qrelativity.settings import get_settings

QREL_ENV = ("QREL_OUTPUT_DIR", "QREL_LOG_LEVEL", "QREL_API_TOKEN", "QREL_MAX_WORKERS")


@pytest.fixture
def clean_settings(monkeypatch):
    """Default settings: no QREL_* variables, empty settings cache."""
    for var in QREL_ENV:
        monkeypatch.delenv(var, raising=False)
    get_settings.cache_clear()
    yield
    get_settings.cache_clear()


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


@pytest.fixture
def natural_grid():
    """dx = 0.25 on [-64, 64): room for sigma0 = 2 packets in hbar = m = 1 units."""
    return Grid1D(-64.0, 64.0, 512)


@pytest.fixture
def electron_slits():
    """d = 100 um, w = d / 10, L = 1 m, v = 727 m/s (lambda about 1 um); grid spans 64 d."""
    d = 100e-6
    return SlitConfig(d, d / 10.0, 1.0, 727.0), Grid1D(-32.0 * d, 32.0 * d, 4096)
