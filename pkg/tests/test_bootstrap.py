import math

import numpy as np
import pytest

from tdaboot.bootstrap import (
    STANDARD_CORRECTION,
    BootstrapConfig,
    BootstrapDistribution,
    confidence_band,
    confidence_bands,
    corrected_standard,
    smoothed_bootstrap,
    standard_bootstrap,
    unique_fraction,
    w2_empirical,
)
from tdaboot.errors import EmptyInput, InsufficientReplicates, InvalidArgument, ReplicateError
from tdaboot.pointcloud import PointCloud
from tdaboot.simulate import generate, reference_spec, true_mean_estimate
from tdaboot.statistics import StatisticSpec


def point_count(cloud):
    return [cloud.n]


def synthetic(values, point=None):
    V = np.asarray(values, dtype=float)
    k = V.shape[1]
    point = np.zeros(k) if point is None else np.asarray(point, dtype=float)
    return BootstrapDistribution(V, np.zeros(k), point, V, 100, 100)


def test_config_validation():
    with pytest.raises(InvalidArgument):
        BootstrapConfig(replicates=1)
    with pytest.raises(InvalidArgument):
        BootstrapConfig(level=1.0)
    with pytest.raises(InvalidArgument):
        BootstrapConfig(method="jackknife")


def test_point_count_centered_zero():
    c = generate("F3", 50, np.random.default_rng(0))
    d = smoothed_bootstrap(c, point_count, BootstrapConfig(replicates=30, seed=1))
    assert np.all(d.values == 0)
    assert d.point_estimate.tolist() == [50.0]


def test_determinism_and_threads():
    c = generate("F3", 60, np.random.default_rng(1))
    spec = StatisticSpec("betti", q=0, pairs=[0.5, 1.0], scale_by_n=True)
    cfg = BootstrapConfig(replicates=25, seed=7)
    a = smoothed_bootstrap(c, spec, cfg)
    b = smoothed_bootstrap(c, spec, cfg, threads=4)
    assert np.array_equal(a.values, b.values)
    assert np.allclose(a.values.mean(axis=0), 0, atol=1e-9)
    other = smoothed_bootstrap(c, spec, BootstrapConfig(replicates=25, seed=8))
    assert not np.array_equal(a.values, other.values)


def test_non_finite_statistic_reports_replicate():
    c = generate("F3", 20, np.random.default_rng(2))
    calls = []

    def bad(cloud):
        calls.append(1)
        return [np.nan] if len(calls) == 3 else [1.0]

    with pytest.raises(ReplicateError) as e:
        standard_bootstrap(c, bad, BootstrapConfig(replicates=5))
    assert e.value.replicate == 2


def test_standard_n1():
    c = PointCloud([[0.3, 0.4]])
    d = standard_bootstrap(c, lambda x: [x.points.sum()], BootstrapConfig(replicates=10))
    assert np.all(d.values == 0)


def test_unique_fraction_examples():
    base = PointCloud(np.arange(100, dtype=float).reshape(-1, 1))
    assert unique_fraction(base.subset(np.random.default_rng(0).permutation(100)), base) == 1.0
    assert unique_fraction(base.subset([5] * 100), base) == 0.01
    n = 10000
    big = PointCloud(np.arange(n, dtype=float).reshape(-1, 1))
    u = unique_fraction(big.subset(np.random.default_rng(1).integers(0, n, n)), big)
    assert abs(u - (1 - (1 - 1 / n) ** n)) < 0.01


def test_band_examples():
    d = synthetic(np.zeros((50, 2)), point=[3.0, 4.0])
    for kind in ("pointwise", "simultaneous"):
        b = confidence_band(d, 100, 0.95, kind)
        assert np.array_equal(b.lower, [3, 4]) and np.array_equal(b.upper, [3, 4])
    with pytest.raises(InsufficientReplicates):
        confidence_band(synthetic(np.ones((10, 1))), 100, 0.95, "simultaneous")


def test_band_half_width_normal():
    sigma, n = 0.7, 100
    V = np.random.default_rng(3).normal(0, sigma, (5000, 3))
    b = confidence_band(synthetic(V), n, 0.95, "pointwise")
    half = (b.upper - b.lower) / 2
    assert np.allclose(half, 1.96 * sigma * math.sqrt(n), rtol=0.1)


def test_simultaneous_contains_pointwise():
    rng = np.random.default_rng(4)
    for _ in range(30):
        V = rng.standard_t(3, (int(rng.integers(20, 200)), int(rng.integers(1, 6)))) * rng.random(1) * 3
        V[:, 0] = rng.exponential(1.0, len(V))  # skewed column
        d = synthetic(V, rng.random(V.shape[1]))
        for interval in ("basic", "percentile"):
            pw = confidence_band(d, 50, 0.9, "pointwise", interval)
            sim = confidence_band(d, 50, 0.9, "simultaneous", interval)
            assert np.all(sim.lower <= pw.lower + 1e-12) and np.all(pw.upper <= sim.upper + 1e-12)
            assert np.all(pw.lower <= pw.upper)


def test_confidence_bands_both():
    d = synthetic(np.random.default_rng(5).normal(size=(40, 2)))
    bands = confidence_bands(d, 100, BootstrapConfig(replicates=40, band="both"))
    assert set(bands) == {"pointwise", "simultaneous"}
    assert bands["simultaneous"].multiplier > 0


def test_w2_examples():
    assert w2_empirical([0], [1]) == 1
    assert w2_empirical([3, 1, 2], [2, 3, 1]) == 0
    assert w2_empirical([0, 2], [1, 3]) == 1
    with pytest.raises(EmptyInput):
        w2_empirical([], [1])


def test_w2_unequal_sizes_matches_replication():
    rng = np.random.default_rng(6)
    u, v = rng.normal(size=6), rng.normal(size=4)
    assert w2_empirical(u, v) == pytest.approx(w2_empirical(np.repeat(u, 2), np.repeat(v, 3)))


def test_correction_factor():
    assert STANDARD_CORRECTION == pytest.approx(0.795, abs=1e-3)
    assert np.allclose(corrected_standard([1.0, 2.0]), [STANDARD_CORRECTION, 2 * STANDARD_CORRECTION])


@pytest.mark.slow
def test_ring_bootstrap_sanity_ordering():
    """Two bootstrap runs agree better with each other than with a misspecified truth."""
    n = 200
    spec = reference_spec("F3")
    c = generate("F3", n, np.random.default_rng(10))
    cfg = BootstrapConfig(replicates=200, seed=1)
    a = smoothed_bootstrap(c, spec, cfg)
    b = smoothed_bootstrap(c, spec, BootstrapConfig(replicates=200, seed=2))

    def uniform_disk(m, rng):
        ang = rng.uniform(0, 2 * np.pi, m)
        rad = 1.2 * np.sqrt(rng.random(m))
        return PointCloud(np.c_[rad * np.cos(ang), rad * np.sin(ang)])

    from tdaboot.statistics import evaluate

    wrong = np.array([evaluate(spec, uniform_disk(n, np.random.default_rng(100 + i))).components for i in range(200)])
    wrong_centered = (wrong - wrong.mean(axis=0)) / math.sqrt(n)
    assert w2_empirical(a.values[:, 0], b.values[:, 0]) < w2_empirical(a.values[:, 0], wrong_centered[:, 0])
