import pytest

from risgraph.channel import ChannelParams
from risgraph.config import ExperimentConfig
from risgraph.geometry import RisGeometry


@pytest.fixture(scope="session")
def params() -> ChannelParams:
    """Simulation defaults: 1 THz carrier, 3 GHz bandwidth, 10-degree beams."""
    return ExperimentConfig().channel_params()


@pytest.fixture(scope="session")
def ris() -> RisGeometry:
    return ExperimentConfig().ris_geometry()


@pytest.fixture(scope="session")
def default_config() -> ExperimentConfig:
    return ExperimentConfig()
