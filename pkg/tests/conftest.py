"""
Pytest Configuration and Fixtures
"""
import os

import pytest

from src.config.settings import get_settings
from src.domain.value_objects.system_params import SystemParams
from src.infrastructure.cache import get_cache


@pytest.fixture(scope="session", autouse=True)
def setup_test_env():
    """Setup test environment variables"""
    os.environ["RIS_WORKERS"] = "1"
    os.environ["RIS_SEED"] = "20240101"
    os.environ["RIS_LOG_LEVEL"] = "WARNING"
    os.environ["RIS_LOG_FILE"] = ""
    os.environ["RIS_CACHE_ENABLED"] = "True"
    get_settings.cache_clear()
    get_cache.cache_clear()


@pytest.fixture(autouse=True)
def fresh_cache():
    """Each test starts from an empty pdf cache"""
    get_cache().clear()
    yield
    get_cache().clear()


@pytest.fixture
def unit_params():
    """N=4, unit variances, SNR 20 dB, INR 0 dB, threshold 0 dB"""
    return SystemParams(n_elements=4, snr_db=20.0, inr_db=0.0, gamma_th_db=0.0)


@pytest.fixture
def output_dir(tmp_path):
    path = tmp_path / "results"
    path.mkdir()
    return path
