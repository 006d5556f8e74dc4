import sys
import pathlib

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

sys.path.insert(0, str(pathlib.Path(__file__).parent))

settings.register_profile("default", max_examples=25, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

FIXTURES = pathlib.Path(__file__).resolve().parent.parent / "fixtures"


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture(scope="session")
def interval():
    from ncchoquet import interval_set
    return interval_set(-1.0, 1.0)


@pytest.fixture(scope="session")
def row_ball():
    from ncchoquet import row_ball_set
    return row_ball_set(2)


@pytest.fixture(scope="session")
def fixtures_dir():
    return FIXTURES
