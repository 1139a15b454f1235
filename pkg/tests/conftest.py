import math

import numpy as np
import pytest

from mahlerlab import DEFAULT_CONFIG_PATH
from mahlerlab.lfunc import CurveTable
from mahlerlab.utils import ConfigLoader

# L'(chi_{-3}, -1) and L'(chi_{-4}, -1) = 2G/pi
LPRIME_CHI3 = 0.32306594721945057
CATALAN = 0.91596559417721901
LPRIME_CHI4 = 2 * CATALAN / math.pi


@pytest.fixture(scope="session")
def config():
    return ConfigLoader(DEFAULT_CONFIG_PATH).config


@pytest.fixture(scope="session")
def curves():
    return CurveTable.load()


@pytest.fixture
def rng():
    return np.random.default_rng(20040901)
