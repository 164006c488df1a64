import itertools

import numpy as np
import pytest

from tdaboot.meb import circumball, meb_radius, minimal_enclosing_ball


def brute_meb(P):
    """Smallest circumball over all support subsets that encloses every point."""
    best = np.inf
    n = len(P)
    for k in range(1, min(n, P.shape[1] + 1) + 1):
        for sup in itertools.combinations(range(n), k):
            c, r = circumball(P[list(sup)])
            if np.all(np.linalg.norm(P - c, axis=1) <= r * (1 + 1e-9) + 1e-12):
                best = min(best, r)
    return best


def test_examples():
    tri = np.array([[0, 0], [1, 0], [0.5, np.sqrt(3) / 2]])
    assert meb_radius(tri) == pytest.approx(1 / np.sqrt(3), abs=1e-12)
    assert meb_radius(np.array([[0.0], [1.0], [2.0]])) == pytest.approx(1.0)
    assert meb_radius(np.array([[0.0, 0.0]])) == 0.0
    obtuse = np.array([[0, 0], [4, 0], [2, 0.5]])
    c, r = minimal_enclosing_ball(obtuse)
    assert r == pytest.approx(2.0) and np.allclose(c, [2, 0])


@pytest.mark.parametrize("seed", range(5))
def test_against_subset_enumeration(seed):
    rng = np.random.default_rng(seed)
    for _ in range(120):
        n = int(rng.integers(1, 7))
        d = int(rng.integers(1, 4))
        P = rng.random((n, d))
        if rng.random() < 0.3:
            P = np.round(P * 3) / 3  # duplicates, collinear and cospherical sets
        c, r = minimal_enclosing_ball(P)
        assert np.all(np.linalg.norm(P - c, axis=1) <= r + 1e-9)
        assert r == pytest.approx(brute_meb(P), rel=1e-9, abs=1e-12)
