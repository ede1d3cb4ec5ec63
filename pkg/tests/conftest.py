"""Shared fixtures for the lab tests."""

import pytest

from src.padic_hausdorff.config import ConfigManager


@pytest.fixture(autouse=True)
def default_config():
    """Every test starts from the default configuration."""
    manager = ConfigManager()
    manager.reset()
    yield manager.get()
    manager.reset()
