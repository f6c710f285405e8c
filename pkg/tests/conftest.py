import pytest

from omvals import config


@pytest.fixture(autouse=True)
def deterministic_env(monkeypatch):
    """Pin the environment knobs so runs do not depend on the caller's shell."""
    monkeypatch.setenv(config.SEED_ENV, str(config.DEFAULT_SEED))
    monkeypatch.setenv(config.START_PRECISION_ENV, str(config.DEFAULT_START_PRECISION))
    monkeypatch.setenv(config.MAX_PRECISION_ENV, str(config.DEFAULT_MAX_PRECISION))
    monkeypatch.delenv(config.LOG_LEVEL_ENV, raising=False)
