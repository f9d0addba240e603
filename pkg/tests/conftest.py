import numpy as np
import pytest


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def random_boards(rng, count, lo=1, hi=8):
    for _ in range(count):
        n = int(rng.integers(lo, hi + 1))
        yield (rng.random((n, n)) < rng.random()).astype(np.uint8)
