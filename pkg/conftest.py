"""
Fixtures compartilhadas da suíte de testes
"""
import pytest

from data.models import FDConfig, PotentialSpec, QuadratureConfig
from physics.moments import lifetime


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: verificações longas (rodam por padrão)")


@pytest.fixture(scope="session")
def free_spec() -> PotentialSpec:
    """Sem poço: nenhum estado ligado"""
    return PotentialSpec(a=1.0, v0=0.0)


@pytest.fixture(scope="session")
def well_spec() -> PotentialSpec:
    """v0*a^2 = -4, já com estado ligado"""
    return PotentialSpec.from_v0a2(-4.0)


@pytest.fixture(scope="session")
def quad_cfg() -> QuadratureConfig:
    return QuadratureConfig()


@pytest.fixture(scope="session")
def fd_cfg() -> FDConfig:
    return FDConfig()


@pytest.fixture(scope="session")
def free_lifetime(free_spec, quad_cfg, fd_cfg):
    return lifetime(free_spec, quad_cfg, fd_cfg)


@pytest.fixture(scope="session")
def well_lifetime(well_spec, quad_cfg, fd_cfg):
    return lifetime(well_spec, quad_cfg, fd_cfg)
