import math

import numpy as np
import pytest

from respoles.schemas.params import SystemParams


@pytest.fixture
def params() -> SystemParams:
    """The reference case k = 1, tau = 2, omega0 = pi/2 at moderate spread."""
    return SystemParams(k=1.0, tau=2.0, omega0=math.pi / 2, h=50.0)


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20240611)
