import numpy as np
import pytest

from caltol.datasets import AIR_LEAD, POTENCY
from caltol.distributions import Sample
from caltol.gibbs import MCMCConfig


@pytest.fixture(scope="session")
def air_lead():
    return Sample(AIR_LEAD)


@pytest.fixture(scope="session")
def potency():
    return Sample(POTENCY)


@pytest.fixture(scope="session")
def fast_mcmc():
    # short chains for calibration-heavy unit tests
    return MCMCConfig(n_draws=600, burn_in=250)


@pytest.fixture(scope="session")
def rng():
    return np.random.default_rng(20240817)
