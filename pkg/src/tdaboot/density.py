"""Gaussian product-kernel density estimates: bandwidths, evaluation, sampling, Lp error."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.special import ndtr

from .errors import DegenerateData, DegeneratePilot, InsufficientData, InvalidArgument
from .pointcloud import PointCloud

_CHUNK = 1 << 20  # evaluation points x centers per block


@dataclass(frozen=True, eq=False)
class KernelDensityEstimate:
    """f̂(x) = (1/n) Σ_i Π_j φ((x_j − X_ij)/(λ_i h_j)) / (λ_i h_j)."""

    centers: PointCloud
    bandwidth: np.ndarray
    local_factors: np.ndarray = field(default=None)

    def __post_init__(self):
        n, d = self.centers.n, self.centers.dim
        if n < 1:
            raise InvalidArgument("a density estimate needs at least one center")
        h = np.broadcast_to(np.asarray(self.bandwidth, dtype=np.float64), (d,)).copy()
        if not np.all(h > 0):
            raise InvalidArgument(f"bandwidths must be positive, got {h}")
        lam = np.ones(n) if self.local_factors is None else np.asarray(self.local_factors, dtype=np.float64).copy()
        if lam.shape != (n,) or not np.all(lam > 0):
            raise InvalidArgument("local factors must be positive, one per center")
        h.setflags(write=False)
        lam.setflags(write=False)
        object.__setattr__(self, "bandwidth", h)
        object.__setattr__(self, "local_factors", lam)

    @property
    def n(self) -> int:
        return self.centers.n

    @property
    def dim(self) -> int:
        return self.centers.dim

    def scales(self) -> np.ndarray:
        """Per-center, per-coordinate kernel standard deviations λ_i h_j."""
        return self.local_factors[:, None] * self.bandwidth[None, :]

    def evaluate(self, x) -> np.ndarray:
        return kde_evaluate(self, x)

    def sample(self, m: int, rng) -> PointCloud:
        return kde_sample(self, m, rng)

    def cdf(self, x) -> np.ndarray:
        """Distribution function of a one-dimensional estimate."""
        if self.dim != 1:
            raise InvalidArgument("cdf is only defined for one-dimensional estimates")
        x = np.asarray(x, dtype=np.float64).reshape(-1)
        sd = self.scales()[:, 0]
        c = self.centers.points[:, 0]
        out = np.empty(x.size)
        step = max(1, _CHUNK // self.n)
        for a in range(0, x.size, step):
            out[a:a + step] = ndtr((x[a:a + step, None] - c[None, :]) / sd[None, :]).mean(axis=1)
        return out


def silverman_bandwidth(cloud: PointCloud) -> np.ndarray:
    """Normal-reference rule h_j = (4/(d+2))^{1/(d+4)} n^{-1/(d+4)} σ̂_j."""
    n, d = cloud.n, cloud.dim
    if n < 2:
        raise InsufficientData(f"need at least two points for a bandwidth, got {n}")
    sd = cloud.points.std(axis=0, ddof=1)
    if np.any(sd <= 0):
        raise DegenerateData(f"coordinate(s) {np.flatnonzero(sd <= 0).tolist()} have zero variance")
    return (4.0 / (d + 2)) ** (1.0 / (d + 4)) * n ** (-1.0 / (d + 4)) * sd


def adaptive_bandwidth(cloud: PointCloud, pilot: KernelDensityEstimate | None = None) -> np.ndarray:
    """Square-root law λ_i = (g / f̂(X_i))^{1/2}, g the geometric mean of the pilot values.

    The pilot defaults to a fixed Silverman-bandwidth estimate on ``cloud``.
    """
    if pilot is None:
        pilot = KernelDensityEstimate(cloud, silverman_bandwidth(cloud))
    f = kde_evaluate(pilot, cloud.points)
    if np.any(f <= 0):
        raise DegeneratePilot(f"pilot density vanishes at center(s) {np.flatnonzero(f <= 0).tolist()}")
    log_f = np.log(f)
    return np.exp(0.5 * (log_f.mean() - log_f))


def fit_kde(cloud: PointCloud, bandwidth="silverman") -> KernelDensityEstimate:
    """Fit with ``"silverman"``, ``"adaptive"`` or an explicit bandwidth vector."""
    if isinstance(bandwidth, str):
        if bandwidth == "silverman":
            return KernelDensityEstimate(cloud, silverman_bandwidth(cloud))
        if bandwidth == "adaptive":
            h = silverman_bandwidth(cloud)
            pilot = KernelDensityEstimate(cloud, h)
            return KernelDensityEstimate(cloud, h, adaptive_bandwidth(cloud, pilot))
        raise InvalidArgument(f"unknown bandwidth selector {bandwidth!r}")
    return KernelDensityEstimate(cloud, bandwidth)


def kde_evaluate(kde: KernelDensityEstimate, x) -> np.ndarray | float:
    """Density at one point (returns a float) or at each row of an (m, d) array."""
    arr = np.asarray(x, dtype=np.float64)
    single = arr.ndim <= 1
    if kde.dim == 1 and arr.ndim == 1 and arr.size != 1:
        arr, single = arr.reshape(-1, 1), False
    pts = arr.reshape(1, -1) if single else arr
    if pts.shape[1] != kde.dim:
        raise InvalidArgument(f"point has dimension {pts.shape[1]}, estimate has {kde.dim}")
    sd = kde.scales()
    C = kde.centers.points
    norm = 1.0 / ((2 * math.pi) ** (kde.dim / 2) * np.prod(sd, axis=1))
    out = np.empty(len(pts))
    step = max(1, _CHUNK // kde.n)
    for a in range(0, len(pts), step):
        z = (pts[a:a + step, None, :] - C[None, :, :]) / sd[None, :, :]
        out[a:a + step] = np.exp(-0.5 * np.einsum("mnd,mnd->mn", z, z)) @ norm / kde.n
    return float(out[0]) if single else out


def kde_sample(kde: KernelDensityEstimate, m: int, rng) -> PointCloud:
    """m draws: a uniformly chosen center plus Gaussian noise with sd λ_i h_j."""
    if m < 1:
        raise InvalidArgument(f"sample size must be >= 1, got {m}")
    idx = rng.integers(0, kde.n, size=m)
    noise = rng.standard_normal((m, kde.dim))
    return PointCloud(kde.centers.points[idx] + noise * kde.scales()[idx])


def _axes(grid, d):
    """Per-axis node arrays from ``(lo, hi, count)``, a list of those, or explicit arrays."""
    if isinstance(grid, tuple) and len(grid) == 3 and np.ndim(grid[0]) == 0:
        grid = [grid] * d
    if len(grid) != d:
        raise InvalidArgument(f"grid has {len(grid)} axes, density has dimension {d}")
    axes = []
    for g in grid:
        if isinstance(g, tuple) and len(g) == 3 and np.ndim(g[0]) == 0:
            lo, hi, count = g
            g = np.linspace(lo, hi, int(count))
        g = np.asarray(g, dtype=np.float64)
        if g.ndim != 1 or g.size < 2 or np.any(np.diff(g) <= 0):
            raise InvalidArgument("each grid axis needs at least two increasing nodes")
        axes.append(g)
    return axes


def _trapezoid_weights(g: np.ndarray) -> np.ndarray:
    w = np.zeros_like(g)
    dx = np.diff(g)
    w[:-1] += dx / 2
    w[1:] += dx / 2
    return w


def lp_error(kde: KernelDensityEstimate, true_density, p: float = 2.0, grid=(-5.0, 5.0, 512)) -> float:
    """(∫ |f̂ − f|^p)^{1/p} by tensor trapezoid quadrature, d <= 3.

    ``true_density`` maps an (m, d) array to m values.
    """
    if not p >= 2:
        raise InvalidArgument(f"p must be >= 2, got {p}")
    d = kde.dim
    if d > 3:
        raise InvalidArgument("lp_error supports dimension <= 3")
    axes = _axes(grid, d)
    mesh = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(-1, d)
    weights = np.ones(1)
    for g in axes:
        weights = np.multiply.outer(weights, _trapezoid_weights(g))
    weights = weights.reshape(-1)
    diff = np.abs(kde_evaluate(kde, mesh) - np.asarray(true_density(mesh), dtype=np.float64).reshape(-1))
    return float(np.sum(weights * diff**p) ** (1.0 / p))


def standard_normal_density(x) -> np.ndarray:
    x = np.asarray(x, dtype=np.float64)
    x = x.reshape(len(x), -1)
    d = x.shape[1]
    return np.exp(-0.5 * np.sum(x * x, axis=1)) / (2 * math.pi) ** (d / 2)
