import pytest

from ConfigService import ConfigService


@pytest.fixture(autouse=True)
def fresh_config():
    """Every test starts from the default configuration."""
    ConfigService().reset_to_defaults()
    yield
    ConfigService().reset_to_defaults()
