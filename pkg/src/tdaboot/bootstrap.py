"""Smoothed and standard bootstrap, confidence bands, empirical 2-Wasserstein distance."""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass

import numpy as np

from .density import fit_kde
from .errors import EmptyInput, InsufficientReplicates, InvalidArgument, ReplicateError
from .parallel import STAGE_BOOTSTRAP, pmap, substream
from .pointcloud import PointCloud
from .statistics import StatisticSpec, evaluate

STANDARD_CORRECTION = math.sqrt(1.0 - math.exp(-1.0))


@dataclass(frozen=True)
class BootstrapConfig:
    replicates: int = 200
    resample_size: int | None = None  # None: m = n
    method: str = "smoothed"
    bandwidth: str = "silverman"
    level: float = 0.95
    band: str = "both"
    interval: str = "basic"
    seed: int = 0

    def __post_init__(self):
        if self.replicates < 2:
            raise InvalidArgument(f"need at least 2 replicates, got {self.replicates}")
        if self.resample_size is not None and self.resample_size < 1:
            raise InvalidArgument(f"resample size must be >= 1, got {self.resample_size}")
        if self.method not in ("smoothed", "standard"):
            raise InvalidArgument(f"unknown bootstrap method {self.method!r}")
        if self.bandwidth not in ("silverman", "adaptive"):
            raise InvalidArgument(f"unknown bandwidth selector {self.bandwidth!r}")
        if not 0 < self.level < 1:
            raise InvalidArgument(f"level must lie in (0, 1), got {self.level}")
        if self.band not in ("pointwise", "simultaneous", "both"):
            raise InvalidArgument(f"unknown band kind {self.band!r}")
        if self.interval not in ("basic", "percentile"):
            raise InvalidArgument(f"unknown interval type {self.interval!r}")

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass(frozen=True, eq=False)
class BootstrapDistribution:
    """Centered, scaled replicates (ψ(m^{1/d} X*_b) − mean_b) / √m.

    ``raw`` keeps the uncentered replicate statistics.
    """

    values: np.ndarray
    replicate_means: np.ndarray
    point_estimate: np.ndarray
    raw: np.ndarray
    n: int
    m: int

    @property
    def replicates(self) -> int:
        return self.values.shape[0]

    @property
    def size(self) -> int:
        return self.values.shape[1]


@dataclass(frozen=True)
class ConfidenceBand:
    lower: np.ndarray
    upper: np.ndarray
    kind: str
    multiplier: float | None = None

    def contains(self, theta) -> bool:
        theta = np.asarray(theta, dtype=np.float64)
        return bool(np.all((self.lower <= theta) & (theta <= self.upper)))

    def to_list(self) -> list:
        return [[float(a), float(b)] for a, b in zip(self.lower, self.upper)]


def _statistic(spec):
    if isinstance(spec, StatisticSpec):
        return lambda cloud: evaluate(spec, cloud).components
    return lambda cloud: np.asarray(spec(cloud), dtype=np.float64).reshape(-1)


def _assemble(stat, cloud, draws, n, m) -> BootstrapDistribution:
    point = stat(cloud)
    raw = np.vstack(draws) if draws else np.zeros((0, len(point)))
    for b, row in enumerate(raw):
        if not np.all(np.isfinite(row)):
            raise ReplicateError(f"replicate {b} produced a non-finite statistic", replicate=b)
    means = raw.mean(axis=0)
    values = (raw - means) / math.sqrt(m)
    return BootstrapDistribution(values, means, point, raw, n, m)


def _run(cloud: PointCloud, spec, config: BootstrapConfig, draw, key: tuple, threads) -> BootstrapDistribution:
    if cloud.n < 1:
        raise EmptyInput("cannot bootstrap an empty cloud")
    stat = _statistic(spec)
    n = cloud.n
    m = config.resample_size or n

    def replicate(b):
        rng = substream(config.seed, STAGE_BOOTSTRAP, *key, b)
        try:
            return stat(draw(m, rng))
        except ReplicateError:
            raise
        except (ValueError, ArithmeticError) as exc:
            raise ReplicateError(f"replicate {b} failed: {exc}", replicate=b) from exc

    draws = pmap(replicate, range(config.replicates), threads)
    return _assemble(stat, cloud, draws, n, m)


def smoothed_bootstrap(cloud: PointCloud, spec, config: BootstrapConfig, key: tuple = (), threads: int | None = 1):
    """Replicates drawn from a kernel density estimate fitted to ``cloud``.

    ``spec`` is a StatisticSpec or any callable cloud -> vector. ``key``
    extends the replicate substream key so that nested experiments get
    independent streams from one seed.
    """
    kde = fit_kde(cloud, config.bandwidth)
    return _run(cloud, spec, config, kde.sample, key, threads)


def standard_bootstrap(cloud: PointCloud, spec, config: BootstrapConfig, key: tuple = (), threads: int | None = 1):
    """Replicates drawn with replacement from the observed points."""

    def draw(m, rng):
        return cloud.subset(rng.integers(0, cloud.n, size=m))

    return _run(cloud, spec, config, draw, key, threads)


def bootstrap(cloud: PointCloud, spec, config: BootstrapConfig, key: tuple = (), threads: int | None = 1):
    fn = smoothed_bootstrap if config.method == "smoothed" else standard_bootstrap
    return fn(cloud, spec, config, key=key, threads=threads)


def unique_fraction(resample: PointCloud, base: PointCloud) -> float:
    """Distinct points of ``resample`` as a fraction of the base size."""
    if base.n == 0:
        raise EmptyInput("base cloud is empty")
    if resample.n == 0:
        return 0.0
    return np.unique(resample.points, axis=0).shape[0] / base.n


def confidence_band(
    dist: BootstrapDistribution, n: int, level: float = 0.95, kind: str = "pointwise", interval: str = "basic"
) -> ConfidenceBand:
    """Band for E ψ(n^{1/d} X_n) from the bootstrap distribution.

    Basic intervals reflect the replicate quantiles around the point
    estimate, θ̂ − √n·q; percentile intervals read them off the replicate
    distribution directly. The simultaneous band uses the studentized
    max-statistic, with its multiplier raised where needed so that it always
    contains the pointwise band.
    """
    if not 0 < level < 1:
        raise InvalidArgument(f"level must lie in (0, 1), got {level}")
    if kind not in ("pointwise", "simultaneous"):
        raise InvalidArgument(f"unknown band kind {kind!r}")
    if interval not in ("basic", "percentile"):
        raise InvalidArgument(f"unknown interval type {interval!r}")
    V = dist.values
    if V.shape[0] == 0:
        raise EmptyInput("bootstrap distribution is empty")
    alpha = 1.0 - level
    q_lo = np.quantile(V, alpha / 2, axis=0)
    q_hi = np.quantile(V, 1 - alpha / 2, axis=0)
    if interval == "basic":
        center, root = dist.point_estimate, math.sqrt(n)
    else:
        center, root = dist.replicate_means, math.sqrt(dist.m)

    def finish(lo_off, hi_off, mult=None):
        if interval == "basic":
            lower, upper = center - root * hi_off, center - root * lo_off
        else:
            lower, upper = center + root * lo_off, center + root * hi_off
        return ConfidenceBand(np.asarray(lower, dtype=np.float64), np.asarray(upper, dtype=np.float64), kind, mult)

    if kind == "pointwise":
        return finish(q_lo, q_hi)
    if V.shape[0] < 20:
        raise InsufficientReplicates(f"simultaneous bands need >= 20 replicates, got {V.shape[0]}")
    sd = V.std(axis=0, ddof=1)
    live = sd > 0
    if not np.any(live):
        return finish(np.zeros_like(sd), np.zeros_like(sd), 0.0)
    c = float(np.quantile(np.max(np.abs(V[:, live]) / sd[live], axis=1), level))
    c = max(c, float(np.max(np.maximum(q_hi[live], -q_lo[live]) / sd[live])))
    half = np.where(live, c * sd, 0.0)
    return finish(-half, half, c)


def confidence_bands(dist: BootstrapDistribution, n: int, config: BootstrapConfig) -> dict:
    kinds = ("pointwise", "simultaneous") if config.band == "both" else (config.band,)
    return {k: confidence_band(dist, n, config.level, k, config.interval) for k in kinds}


def w2_empirical(u, v) -> float:
    """2-Wasserstein distance between two univariate empirical distributions.

    Equal sizes use the sorted coupling; otherwise the quantile functions are
    integrated exactly over their merged breakpoints.
    """
    u = np.sort(np.asarray(u, dtype=np.float64).reshape(-1))
    v = np.sort(np.asarray(v, dtype=np.float64).reshape(-1))
    if u.size == 0 or v.size == 0:
        raise EmptyInput("W2 needs two nonempty samples")
    if u.size == v.size:
        return float(np.sqrt(np.mean((u - v) ** 2)))
    t = np.union1d(np.arange(1, u.size + 1) / u.size, np.arange(1, v.size + 1) / v.size)
    t = np.clip(t, 0.0, 1.0)
    widths = np.diff(np.concatenate([[0.0], t]))
    mid = t - widths / 2
    iu = np.minimum((mid * u.size).astype(np.int64), u.size - 1)
    iv = np.minimum((mid * v.size).astype(np.int64), v.size - 1)
    return float(np.sqrt(np.sum(widths * (u[iu] - v[iv]) ** 2)))


def corrected_standard(values, factor: float = STANDARD_CORRECTION) -> np.ndarray:
    """Multiply standard-bootstrap quantities by √(1 − e^{-1}) (diagnostic only)."""
    return np.asarray(values, dtype=np.float64) * factor
