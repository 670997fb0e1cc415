import numpy as np
import pytest

from irs_secrecy.channel import ChannelRealization, FadingParams, complex_normal, draw_realization
from irs_secrecy.config import ScenarioConfig
from irs_secrecy.montecarlo import trial_streams

ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


def unit_realization(rng, m, k, direct_scale=1.0, cascade_scale=1.0) -> ChannelRealization:
    """Unit-variance channels without path loss; handy for closed-form checks."""
    return ChannelRealization(
        h_du=direct_scale * complex_normal(rng),
        h_de=direct_scale * complex_normal(rng, k),
        g_ui=np.sqrt(cascade_scale) * complex_normal(rng, m),
        g_iu=np.sqrt(cascade_scale) * complex_normal(rng, m),
        g_ie=np.sqrt(cascade_scale) * complex_normal(rng, (k, m)),
    )


def scenario_realization(config: ScenarioConfig, index: int) -> ChannelRealization:
    geometry, fading, _, _ = trial_streams(config.master_seed, index)
    topology = config.topology.sample(config.k_eves, geometry)
    return draw_realization(topology, config.fading, config.m_elements, fading)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def unit_params():
    return FadingParams(pathloss_exponent=3.0, noise_variance=1.0, reference_gain=1.0)
