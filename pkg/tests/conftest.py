import numpy as np
import pytest

from tdaboot.pointcloud import PointCloud

SQRT2 = np.sqrt(2.0)


def triangle():
    return PointCloud([[0.0, 0.0], [1.0, 0.0], [0.5, np.sqrt(3) / 2]])


def square():
    return PointCloud([[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]])


def random_clouds(count, seed, max_n=8, dims=(2, 3)):
    """Small clouds with a mix of uniform, clustered and duplicated points."""
    rng = np.random.default_rng(seed)
    out = []
    for i in range(count):
        n = int(rng.integers(1, max_n + 1))
        d = dims[i % len(dims)]
        X = rng.random((n, d))
        if i % 7 == 3 and n > 2:
            X[-1] = X[0]
        if i % 11 == 5:
            X = np.round(X * 4) / 4  # ties in distances
        out.append(PointCloud(X))
    return out


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
