import random

import pytest

from starforge import build

POOL_SIZE = 500


@pytest.fixture(scope="session")
def tower_pool():
    """Seeded towers shared by the acceptance criteria: deterministic,
    mixed branch count 2..5, contacts up to 4 per step."""
    pool = []
    for seed in range(POOL_SIZE):
        n_max = random.Random(9000 + seed).randint(2, 5)
        pool.append(build.random_tower_detailed(seed, n_max, 4))
    return pool
