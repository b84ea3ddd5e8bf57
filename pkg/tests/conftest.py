import math

import pytest
from hypothesis import settings

from wpme.domain import Domain1D

settings.register_profile("default", deadline=None)
settings.load_profile("default")

INF = math.inf


@pytest.fixture
def unit():
    return Domain1D(0.0, 1.0)


@pytest.fixture
def halfline():
    return Domain1D(0.0, INF)
