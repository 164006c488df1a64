"""Filtered Vietoris-Rips and Čech complexes on the radius axis.

A simplex enters the filtration at the smallest ``r`` for which it belongs
to ``K^r``. Vietoris-Rips edges appear once ``|x - y| <= 2r``; Čech
simplices once their minimal enclosing ball has radius ``<= r``. Both
builders therefore agree on edges.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations
from typing import Callable, Sequence

import numpy as np

from .errors import EmptyInput, InvalidArgument, MalformedComplex
from .meb import meb_radius
from .pointcloud import PointCloud, distance_matrix

Simplex = tuple  # strictly increasing vertex indices


@dataclass(frozen=True, eq=False)
class FilteredComplex:
    """Simplices sorted by (filtration, dimension, vertices).

    ``max_dim`` is the largest homological dimension the complex supports;
    simplices are built up to dimension ``max_dim + 1`` so that deaths of
    ``max_dim`` classes are visible.
    """

    cloud: PointCloud
    simplices: tuple
    filtrations: np.ndarray
    r_max: float
    max_dim: int
    kind: str = "custom"

    @classmethod
    def from_simplices(cls, cloud, simplices, filtrations, r_max, max_dim, kind="custom"):
        simplices = [tuple(int(v) for v in s) for s in simplices]
        filtrations = [float(f) for f in filtrations]
        for s, f in zip(simplices, filtrations):
            if any(a >= b for a, b in zip(s, s[1:])):
                raise InvalidArgument(f"simplex {s} is not strictly increasing")
            if not math.isfinite(f) or f < 0:
                raise InvalidArgument(f"simplex {s} has invalid filtration {f}")
        return cls._sorted(cloud, simplices, filtrations, r_max, max_dim, kind)

    @classmethod
    def _sorted(cls, cloud, simplices, filtrations, r_max, max_dim, kind):
        order = sorted(range(len(simplices)), key=lambda i: (filtrations[i], len(simplices[i]), simplices[i]))
        filt = np.array([filtrations[i] for i in order], dtype=np.float64)
        filt.setflags(write=False)
        return cls(cloud, tuple(simplices[i] for i in order), filt, float(r_max), int(max_dim), kind)

    def __len__(self):
        return len(self.simplices)

    @cached_property
    def dims(self) -> np.ndarray:
        d = np.fromiter((len(s) - 1 for s in self.simplices), dtype=np.int64, count=len(self.simplices))
        d.setflags(write=False)
        return d

    @cached_property
    def index(self) -> dict:
        return {s: i for i, s in enumerate(self.simplices)}

    @property
    def top_dim(self) -> int:
        """Largest simplex dimension this complex was built to hold."""
        return self.max_dim + 1

    def level(self, r: float) -> np.ndarray:
        """Indices of simplices in ``K^r``."""
        return np.flatnonzero(self.filtrations <= r)

    def count(self, dim: int, r: float) -> int:
        return int(np.count_nonzero((self.dims == dim) & (self.filtrations <= r)))

    def simplex_set(self, r: float | None = None) -> set:
        if r is None:
            return set(self.simplices)
        return {self.simplices[i] for i in self.level(r)}

    def filtration_of(self, simplex) -> float | None:
        i = self.index.get(tuple(simplex))
        return None if i is None else float(self.filtrations[i])

    def check_closure(self, tol: float = 1e-12) -> None:
        """Raise MalformedComplex unless every facet precedes its coface."""
        index = self.index
        for j, s in enumerate(self.simplices):
            if len(s) < 2:
                continue
            for face in combinations(s, len(s) - 1):
                i = index.get(face)
                if i is None:
                    raise MalformedComplex(f"facet {face} of {s} is missing")
                if self.filtrations[i] > self.filtrations[j] + tol or i > j:
                    raise MalformedComplex(f"facet {face} enters after {s}")

    def dump(self) -> str:
        lines = [f"{float(f)!r};{','.join(map(str, s))}" for s, f in zip(self.simplices, self.filtrations)]
        return "\n".join(lines) + ("\n" if lines else "")


def load_dump(text: str, cloud: PointCloud, r_max: float, max_dim: int) -> FilteredComplex:
    simplices, filts = [], []
    for line in text.splitlines():
        if not line.strip():
            continue
        f, verts = line.split(";")
        simplices.append(tuple(int(v) for v in verts.split(",")))
        filts.append(float(f))
    return FilteredComplex.from_simplices(cloud, simplices, filts, r_max, max_dim)


def _check_args(cloud: PointCloud, r_max: float, q_max: int) -> None:
    if cloud.n == 0:
        raise EmptyInput("cannot build a complex on an empty cloud")
    # r_max == 0 is allowed and yields the vertex set.
    if not r_max >= 0:
        raise InvalidArgument(f"r_max must be nonnegative, got {r_max}")
    if q_max < 0:
        raise InvalidArgument(f"q_max must be >= 0, got {q_max}")


def _neighbors_up(D: np.ndarray, threshold: float) -> list:
    n = D.shape[0]
    A = D <= threshold
    return [set((np.flatnonzero(A[u, u + 1:]) + u + 1).tolist()) for u in range(n)]


def _expand(cloud, D, r_max, q_max, cofilter):
    """Clique expansion in vertex order on the 2*r_max threshold graph.

    ``cofilter(simplex, parent_value, new_vertex)`` returns the filtration of
    the extended simplex or None to prune it.
    """
    n = cloud.n
    max_size = q_max + 2
    up = _neighbors_up(D, 2.0 * r_max)
    simplices = []
    filts = []

    def grow(simplex, value, candidates):
        simplices.append(simplex)
        filts.append(value)
        if len(simplex) == max_size:
            return
        for k, v in enumerate(candidates):
            f = cofilter(simplex, value, v)
            if f is None:
                continue
            nv = up[v]
            grow(simplex + (v,), f, [w for w in candidates[k + 1:] if w in nv])

    for u in range(n):
        grow((u,), 0.0, sorted(up[u]))
    return simplices, filts


def build_vr(cloud: PointCloud, r_max: float, q_max: int = 2) -> FilteredComplex:
    """Vietoris-Rips filtration truncated at radius ``r_max``."""
    _check_args(cloud, r_max, q_max)
    D = distance_matrix(cloud)
    half = (D / 2.0).tolist()

    def cofilter(simplex, value, v):
        row = half[v]
        for w in simplex:
            if row[w] > value:
                value = row[w]
        return value

    simplices, filts = _expand(cloud, D, r_max, q_max, cofilter)
    return FilteredComplex._sorted(cloud, simplices, [float(f) for f in filts], r_max, q_max, "vr")


def build_cech(cloud: PointCloud, r_max: float, q_max: int = 2) -> FilteredComplex:
    """Čech filtration: a simplex enters at its minimal enclosing ball radius."""
    _check_args(cloud, r_max, q_max)
    D = distance_matrix(cloud)
    pts = cloud.points

    def cofilter(simplex, value, v):
        if len(simplex) == 1:
            f = D[simplex[0], v] / 2.0
        else:
            f = max(value, meb_radius(pts[list(simplex + (v,))]))
        return f if f <= r_max else None

    simplices, filts = _expand(cloud, D, r_max, q_max, cofilter)
    # Make the filtration monotone over all facets, not just the parent the
    # expansion came from; MEB radii can differ in the last ulp.
    value = dict(zip(simplices, filts))
    for s in sorted(value, key=len):
        if len(s) > 2:
            value[s] = max(value[s], max(value[f] for f in combinations(s, len(s) - 1)))
    return FilteredComplex._sorted(cloud, list(value), [float(f) for f in value.values()], r_max, q_max, "cech")


BUILDERS = {"vr": build_vr, "cech": build_cech}


def get_builder(kind: str):
    try:
        return BUILDERS[kind]
    except KeyError:
        raise InvalidArgument(f"unknown complex kind {kind!r}") from None


# ---------------------------------------------------------------------------
# Empirical checks of the complex conditions (K1), (K2), (D1), (D2)


@dataclass
class ConditionReport:
    passed: dict = field(default_factory=dict)
    witnesses: dict = field(default_factory=dict)
    checked: int = 0

    @property
    def all_passed(self) -> bool:
        return all(self.passed.values())

    def fail(self, name, witness):
        self.passed[name] = False
        self.witnesses.setdefault(name, witness)

    def to_dict(self) -> dict:
        return {
            "passed": dict(self.passed),
            "all_passed": self.all_passed,
            "checked": self.checked,
            "witnesses": {k: _jsonable(v) for k, v in self.witnesses.items()},
        }


def _jsonable(w):
    out = {}
    for k, v in w.items():
        if isinstance(v, np.ndarray):
            out[k] = v.tolist()
        elif isinstance(v, tuple):
            out[k] = list(v)
        else:
            out[k] = v
    return out


def _diameter(D, simplex) -> float:
    if len(simplex) < 2:
        return 0.0
    return max(D[a, b] for a, b in combinations(simplex, 2))


def verify_complex_conditions(
    builder: Callable,
    trial_clouds: Sequence[PointCloud],
    r_grid: Sequence[float],
    q_max: int = 2,
    phi: Callable[[float], float] = lambda r: 2.0 * r,
    shift=None,
    tol: float = 1e-9,
) -> ConditionReport:
    """Check (K1), (K2), (D1), (D2) on concrete clouds.

    For each cloud the last point plays the role of the added point ``z`` and
    the remaining points form ``S``. Failures carry a witness.
    """
    if not trial_clouds:
        raise InvalidArgument("need at least one trial cloud")
    grid = sorted(float(r) for r in r_grid)
    r_max = grid[-1]
    report = ConditionReport(passed={"K1": True, "K2": True, "D1": True, "D2": True})
    for t, cloud in enumerate(trial_clouds):
        if cloud.n < 2:
            raise InvalidArgument("trial clouds need at least two points")
        report.checked += 1
        S = cloud.subset(range(cloud.n - 1))
        z_idx = cloud.n - 1
        z = cloud.points[z_idx]
        D = distance_matrix(cloud)
        KS = builder(S, r_max, q_max)
        KSz = builder(cloud, r_max, q_max)
        z_is_new = not np.any(np.all(S.points == z, axis=1))
        for r in grid:
            before = KS.simplex_set(r)
            after = KSz.simplex_set(r)
            if z_is_new:
                lost = before - after
                if lost:
                    report.fail("K1", {"cloud": t, "r": r, "simplex": min(lost), "reason": "removed by adding z"})
                gained = [s for s in after - before if z_idx not in s]
                if gained:
                    report.fail("K1", {"cloud": t, "r": r, "simplex": min(gained), "reason": "new simplex avoids z"})
            for s in after:
                if _diameter(D, s) > phi(r) + tol:
                    report.fail("D1", {"cloud": t, "r": r, "simplex": s, "diameter": _diameter(D, s)})
                    break
            far = [s for s in before ^ after if np.any(D[z_idx, list(s)] > phi(r) + tol)]
            if far:
                report.fail("D2", {"cloud": t, "r": r, "simplex": min(far), "z": z})
        v = np.asarray(shift if shift is not None else np.linspace(0.5, -1.5, cloud.dim) + 0.25 * t)
        moved = builder(cloud.translate(-v), r_max, q_max)
        a = dict(zip(KSz.simplices, KSz.filtrations))
        b = dict(zip(moved.simplices, moved.filtrations))
        for mine, theirs in ((a, b), (b, a)):
            for s, f in mine.items():
                if f > r_max - tol:
                    continue
                g = theirs.get(s)
                if g is None or abs(g - f) > tol * max(1.0, abs(f)):
                    report.fail("K2", {"cloud": t, "simplex": s, "filtration": float(f), "translated": g, "shift": v})
                    break
    return report
