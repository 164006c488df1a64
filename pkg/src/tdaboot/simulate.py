"""Test distributions F1-F7, Monte Carlo truths and bootstrap coverage experiments."""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass

import numpy as np

from .bootstrap import BootstrapConfig, bootstrap, confidence_band
from .errors import InvalidArgument
from .parallel import STAGE_COVERAGE, STAGE_TRUTH, pmap, substream
from .pointcloud import PointCloud
from .statistics import StatisticSpec, StatisticValue, evaluate

DIMENSIONS = {"F1": 2, "F2": 2, "F3": 2, "F4": 3, "F5": 3, "F6": 5, "F7": 10}

F5_CENTERS = np.array(
    [
        [0.38741799, 0.24263535, 0.09535272],
        [0.25147839, 0.63824409, 0.62425101],
        [0.73988542, 0.80749034, 0.84972394],
        [0.26811913, 0.35911205, 0.08316547],
        [0.65954757, 0.04704809, 0.02113341],
    ]
)

# Edge-length (r, s) query pairs per distribution and dimension q.
REFERENCE_PAIRS = {
    ("F1", 1): (4.94, 5.36),
    ("F2", 1): (5.20, 5.60),
    ("F3", 1): (3.03, 3.28),
    ("F4", 1): (1.92, 2.12),
    ("F5", 1): (0.30, 0.31),
    ("F6", 1): (1.78, 1.91),
    ("F7", 1): (1.28, 1.32),
    ("F4", 2): (2.96, 3.04),
    ("F5", 2): (0.39, 0.40),
    ("F6", 2): (2.71, 2.80),
    ("F7", 2): (1.46, 1.47),
}


def _sphere(rng, n, d) -> np.ndarray:
    g = rng.standard_normal((n, d))
    return g / np.linalg.norm(g, axis=1, keepdims=True)


def _power_radius(rng, n, power) -> np.ndarray:
    sign = rng.choice([-1.0, 1.0], size=n)
    R = rng.random(n)
    # R = 0 with S = -1 would be infinite; U(0,1] avoids it.
    R = 1.0 - R
    return R ** (power * sign)


def generate(dist: str, n: int, rng) -> PointCloud:
    """n iid draws from one of the test distributions F1-F7."""
    if dist not in DIMENSIONS:
        raise InvalidArgument(f"unknown distribution {dist!r}; expected one of {sorted(DIMENSIONS)}")
    if n < 1:
        raise InvalidArgument(f"n must be >= 1, got {n}")
    if dist == "F1":
        X = _sphere(rng, n, 2) * _power_radius(rng, n, 0.9)[:, None]
    elif dist == "F2":
        X = _sphere(rng, n, 2) * _power_radius(rng, n, 0.55)[:, None]
    elif dist == "F3":
        X = _sphere(rng, n, 2) + rng.normal(0.0, 0.2, (n, 2))
    elif dist == "F4":
        ball = _sphere(rng, n, 3) * rng.random(n)[:, None] ** (1.0 / 3.0)
        X = ball + rng.normal(0.0, 0.1, (n, 3))
    elif dist == "F5":
        X = F5_CENTERS[rng.integers(0, 5, size=n)] + rng.exponential(1.0 / 25.0, (n, 3))
    elif dist == "F6":
        base = np.zeros((n, 5))
        base[:, :3] = _sphere(rng, n, 3)
        X = base + 0.1 * rng.standard_cauchy((n, 5))
    else:
        base = np.zeros((n, 10))
        theta = _sphere(rng, n, 2)
        base[:, 0] = theta[:, 0] + rng.choice([-1.0, 1.0], size=n)
        base[:, 1] = theta[:, 1]
        X = base + rng.normal(0.0, 0.2, (n, 10))
    return PointCloud(X)


def reference_spec(dist: str, q: int = 1, complex_kind: str = "vr") -> StatisticSpec:
    """β_q^{r,s} at the tabulated edge-length pair, on the n^{1/d}-scaled cloud."""
    try:
        pair = REFERENCE_PAIRS[(dist, q)]
    except KeyError:
        raise InvalidArgument(f"no tabulated (r, s) for {dist}, q={q}") from None
    return StatisticSpec(
        "persistent_betti", complex_kind, q=q, pairs=(pair,), scale_by_n=True, convention="diameter"
    )


@dataclass(frozen=True, eq=False)
class TruthEstimate:
    mean: StatisticValue
    se: np.ndarray
    samples: np.ndarray  # N_truth x k values of ψ(n^{1/d} X_n)

    @property
    def N(self) -> int:
        return self.samples.shape[0]


def true_mean_estimate(
    dist: str, n: int, spec, N_truth: int, seed: int = 0, threads: int | None = 1, min_truth: int = 100
) -> TruthEstimate:
    """Average of ψ over ``N_truth`` fresh samples of size n, with its standard error."""
    if N_truth < min_truth:
        raise InvalidArgument(f"N_truth must be >= {min_truth}, got {N_truth}")
    stat = (lambda c: evaluate(spec, c).components) if isinstance(spec, StatisticSpec) else spec

    def one(i):
        return np.asarray(stat(generate(dist, n, substream(seed, STAGE_TRUTH, i))), dtype=np.float64)

    samples = np.vstack(pmap(one, range(N_truth), threads))
    se = samples.std(axis=0, ddof=1) / math.sqrt(N_truth)
    return TruthEstimate(StatisticValue(samples.mean(axis=0)), se, samples)


@dataclass(frozen=True)
class CoverageResult:
    distribution: str
    spec: str
    n: int
    N: int
    B: int
    selector: str
    level: float
    covered: int
    seed: int

    @property
    def coverage(self) -> float:
        return self.covered / self.N

    def row(self) -> list:
        return [self.distribution, self.spec, self.n, self.N, self.B, self.selector, self.level, repr(self.coverage), self.seed]


CSV_HEADER = ["dist", "spec", "n", "N", "B", "selector", "level", "coverage", "seed"]


def coverage_experiment(
    dist: str,
    spec,
    n: int,
    N: int,
    config: BootstrapConfig,
    truth,
    threads: int | None = 1,
    kind: str = "pointwise",
) -> CoverageResult:
    """Fraction of N fresh samples whose bootstrap band covers ``truth`` in every coordinate."""
    if N < 1:
        raise InvalidArgument(f"N must be >= 1, got {N}")
    theta = truth.mean.components if isinstance(truth, TruthEstimate) else np.asarray(
        getattr(truth, "components", truth), dtype=np.float64
    )

    def one(i):
        cloud = generate(dist, n, substream(config.seed, STAGE_COVERAGE, i))
        d = bootstrap(cloud, spec, config, key=(STAGE_COVERAGE, i), threads=1)
        return confidence_band(d, n, config.level, kind, config.interval).contains(theta)

    covered = sum(pmap(one, range(N), threads))
    label = spec.describe() if isinstance(spec, StatisticSpec) else getattr(spec, "__name__", "custom")
    selector = config.bandwidth if config.method == "smoothed" else "standard"
    return CoverageResult(dist, label, n, N, config.replicates, selector, config.level, int(covered), config.seed)


def coverage_csv(results) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for r in results:
        w.writerow(r.row())
    return buf.getvalue()
