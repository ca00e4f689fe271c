import pytest

from netopt.services.fixtures import courier10_instance
from tests.networks import consolidation_instance, line_instance


@pytest.fixture
def courier10():
    """Fixture for the ten-node example network"""
    return courier10_instance()


@pytest.fixture
def line():
    """Fixture for the three-node line network with a hub"""
    return line_instance()


@pytest.fixture
def consolidation():
    """Fixture for the three-origin, three-terminal hub network"""
    return consolidation_instance()
