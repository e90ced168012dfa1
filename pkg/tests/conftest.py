import pytest
from hypothesis import HealthCheck, settings

from geocensus import build_surface, modular_torus

settings.register_profile("default", max_examples=60, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


@pytest.fixture(scope="session")
def S():
    return modular_torus()


@pytest.fixture(scope="session")
def T():
    return build_surface(3.0, 4.0)
