import os
import random
from itertools import product

import pytest
from hypothesis import HealthCheck, settings

from galeroot.graphs import MultMatrix

settings.register_profile("default", deadline=None, max_examples=60,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


def small_instances(kmax=4, rmax=2):
    """Every MultMatrix with 2 <= k <= kmax and r_ij <= rmax."""
    out = []
    for k in range(2, kmax + 1):
        for flat in product(range(1, rmax + 1), repeat=k * (k - 1) // 2):
            out.append(MultMatrix.from_flat(k, list(flat)))
    return out


@pytest.fixture(autouse=True)
def _isolated_cache(tmp_path, monkeypatch):
    monkeypatch.setenv("GALE_CACHE_DIR", str(tmp_path / "cache"))


@pytest.fixture
def rng():
    return random.Random(20240611)
