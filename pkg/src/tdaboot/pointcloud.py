"""Point clouds, CSV ingestion and Euclidean distance matrices."""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from scipy.spatial.distance import pdist, squareform

from .errors import EmptyInput, InvalidArgument, ParseError


@dataclass(frozen=True, eq=False)
class PointCloud:
    """Ordered multiset of points in R^d.

    Duplicate points are kept. The coordinate array is read-only so a cloud
    can be shared freely between threads.
    """

    points: np.ndarray

    def __post_init__(self):
        pts = np.array(self.points, dtype=np.float64, copy=True)
        if pts.ndim == 1:
            pts = pts.reshape(-1, 1) if pts.size else pts.reshape(0, 1)
        if pts.ndim != 2:
            raise InvalidArgument("points must be a 2-d array (n, d)")
        if pts.shape[1] < 1:
            raise InvalidArgument("dimension must be positive")
        if not np.all(np.isfinite(pts)):
            raise InvalidArgument("coordinates must be finite")
        pts.setflags(write=False)
        object.__setattr__(self, "points", pts)

    @property
    def n(self) -> int:
        return self.points.shape[0]

    @property
    def dim(self) -> int:
        return self.points.shape[1]

    def __len__(self):
        return self.n

    def __eq__(self, other):
        if not isinstance(other, PointCloud):
            return NotImplemented
        return self.points.shape == other.points.shape and bool(np.array_equal(self.points, other.points))

    __hash__ = None

    def subset(self, indices) -> "PointCloud":
        idx = np.asarray(indices, dtype=np.intp)
        return PointCloud(self.points[idx].reshape(len(idx), self.dim))

    def with_point(self, z) -> "PointCloud":
        z = np.asarray(z, dtype=np.float64).reshape(1, -1)
        if z.shape[1] != self.dim:
            raise InvalidArgument(f"point has dimension {z.shape[1]}, cloud has {self.dim}")
        return PointCloud(np.vstack([self.points, z]))

    def translate(self, v) -> "PointCloud":
        return PointCloud(self.points + np.asarray(v, dtype=np.float64))

    def within(self, center, radius: float) -> "PointCloud":
        """Points inside the closed ball ``B_center(radius)``, order kept."""
        d = np.linalg.norm(self.points - np.asarray(center, dtype=np.float64), axis=1)
        return self.subset(np.flatnonzero(d <= radius))


def _is_number(cell: str) -> bool:
    try:
        float(cell)
    except ValueError:
        return False
    return True


def load_csv(path) -> PointCloud:
    """Read one point per row from a comma separated file.

    A first row with no numeric cell is treated as a header; a row mixing
    numbers and text is a parse error.
    """
    path = Path(path)
    with path.open(newline="", encoding="utf-8") as fh:
        rows = [row for row in csv.reader(fh) if row and any(c.strip() for c in row)]
    if not rows:
        raise EmptyInput(f"{path} contains no rows")
    start = 0
    if not any(_is_number(c) for c in rows[0]):
        start = 1
    data = rows[start:]
    if not data:
        raise EmptyInput(f"{path} contains only a header")
    width = len(data[0])
    points = []
    for i, row in enumerate(data, start=start + 1):
        if len(row) != width:
            raise ParseError(f"expected {width} columns, found {len(row)}", row=i)
        try:
            values = [float(c) for c in row]
        except ValueError:
            raise ParseError(f"non-numeric cell in {row!r}", row=i) from None
        if not all(math.isfinite(v) for v in values):
            raise ParseError("non-finite value", row=i)
        points.append(values)
    return PointCloud(np.array(points))


def save_csv(cloud: PointCloud, path, header=None) -> None:
    with Path(path).open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        if header:
            writer.writerow(header)
        for p in cloud.points:
            writer.writerow([repr(float(v)) for v in p])


def scale(cloud: PointCloud, factor: float) -> PointCloud:
    """Multiply every coordinate by ``factor`` (the n^{1/d} rescaling)."""
    if not factor > 0:
        raise InvalidArgument(f"scale factor must be positive, got {factor}")
    return PointCloud(cloud.points * float(factor))


def root_n_factor(n: int, d: int) -> float:
    """n^{1/d}, computed so that perfect powers come out exact (8^{1/3} == 2)."""
    f = n ** (1.0 / d)
    rounded = round(f)
    if rounded**d == n:
        return float(rounded)
    return f


def distance_matrix(cloud: PointCloud) -> np.ndarray:
    """Symmetric matrix of pairwise Euclidean distances, zero diagonal."""
    if cloud.n == 0:
        raise EmptyInput("distance matrix of an empty cloud")
    if cloud.n == 1:
        return np.zeros((1, 1))
    D = squareform(pdist(cloud.points))
    D.setflags(write=False)
    return D
