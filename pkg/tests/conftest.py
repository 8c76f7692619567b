import pytest

from metadist.moments import SystemParams

# Reference scenario used throughout: lambda = 1e-3 per m^2, gamma = 5,
# theta = 0 dB, p = 0 dBm (1 mW), sigma^2 = -100 dBm (1e-10 mW).
PAPER_SCENARIO = dict(lambda_bs=1e-3, gamma_pl=5.0, theta=1.0, power=1.0, noise=1e-10)


@pytest.fixture(scope="session")
def paper_params() -> SystemParams:
    return SystemParams(**PAPER_SCENARIO)
