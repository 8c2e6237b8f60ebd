import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from sqwalk import build_diamond_with_leads, build_line
from sqwalk.coins import assign, coin_grover

settings.register_profile(
    "default", max_examples=40, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def diamond():
    return build_diamond_with_leads(1, 1)


@pytest.fixture
def grover_coins(diamond):
    return assign(diamond, coin_grover)


@pytest.fixture
def offset_line():
    """Line ``j = -4..4`` whose endpoints are lead sinks."""
    return build_line(9, free=(0, 8), names=[str(j) for j in range(-4, 5)])
