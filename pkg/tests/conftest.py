import os

import numpy as np
import pytest
from hypothesis import settings

settings.register_profile("flatfront", max_examples=25, deadline=None, derandomize=True)
settings.load_profile("flatfront")


@pytest.fixture
def seed():
    return int(os.environ.get("FLATFRONT_SEED", "0") or 0)


@pytest.fixture
def rng(seed):
    return np.random.default_rng(seed)
