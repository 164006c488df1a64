"""Statistics on point clouds, add-one costs and empirical stabilization radii."""

from __future__ import annotations

from dataclasses import asdict, dataclass, field

import numpy as np

from .bounded import bounded_persistent_betti
from .complexes import get_builder
from .errors import InvalidArgument, InvalidSpec
from .parallel import STAGE_STABILIZATION, pmap, substream
from .persistence import compute_diagram, euler_characteristic, persistent_betti, truncated_euler
from .pointcloud import PointCloud, distance_matrix, root_n_factor, scale

FAMILIES = ("persistent_betti", "betti", "euler", "truncated_euler", "bounded_persistent_betti", "knn_length")
_PAIR_FAMILIES = ("persistent_betti", "bounded_persistent_betti")
_GRID_FAMILIES = ("betti", "euler", "truncated_euler")
_NEEDS_Q = ("persistent_betti", "betti", "truncated_euler", "bounded_persistent_betti")


@dataclass(frozen=True)
class StatisticSpec:
    """What to compute and at which query coordinates.

    ``pairs`` holds (r, s) pairs for the persistent families and a plain
    r-grid for betti/euler/truncated_euler. With ``convention="diameter"``
    the query values are edge lengths and are halved before they are
    compared with the radius filtration. ``B`` is always a diameter.
    For ``euler``, ``q`` (default 2) is the homological depth of the built
    complex, so simplices up to dimension q+1 are counted.
    """

    family: str
    complex_kind: str = "vr"
    q: int | None = None
    pairs: tuple = ()
    B: float | None = None
    k: int | None = None
    directed: bool = True
    scale_by_n: bool = False
    convention: str = "radius"
    margin: float = 0.0

    def __post_init__(self):
        f = self.family
        if f not in FAMILIES:
            raise InvalidSpec(f"unknown statistic family {f!r}")
        if self.convention not in ("radius", "diameter"):
            raise InvalidSpec(f"unknown convention {self.convention!r}")
        if f != "knn_length" and self.complex_kind not in ("vr", "cech"):
            raise InvalidSpec(f"unknown complex kind {self.complex_kind!r}")
        if f in _NEEDS_Q and (self.q is None or self.q < 0):
            raise InvalidSpec(f"{f} needs a dimension q >= 0")
        if f == "bounded_persistent_betti":
            if self.B is None or not self.B >= 0:
                raise InvalidSpec("bounded_persistent_betti needs a bound B >= 0")
        elif self.B is not None:
            raise InvalidSpec(f"{f} takes no diameter bound")
        if f == "knn_length":
            if self.k is None or self.k < 1:
                raise InvalidSpec("knn_length needs k >= 1")
            object.__setattr__(self, "pairs", ())
            return
        if self.k is not None:
            raise InvalidSpec(f"{f} takes no neighbour count")
        if not self.pairs:
            raise InvalidSpec(f"{f} needs at least one query coordinate")
        if f in _PAIR_FAMILIES:
            pairs = []
            for p in self.pairs:
                if len(p) != 2:
                    raise InvalidSpec(f"{f} needs (r, s) pairs, got {p!r}")
                r, s = float(p[0]), float(p[1])
                if not 0 <= r <= s:
                    raise InvalidSpec(f"need 0 <= r <= s, got ({r}, {s})")
                pairs.append((r, s))
            object.__setattr__(self, "pairs", tuple(pairs))
        else:
            grid = []
            for r in self.pairs:
                if np.ndim(r) != 0 or not float(r) >= 0:
                    raise InvalidSpec(f"{f} needs a grid of nonnegative radii, got {r!r}")
                grid.append(float(r))
            object.__setattr__(self, "pairs", tuple(grid))

    @property
    def size(self) -> int:
        return 1 if self.family == "knn_length" else len(self.pairs)

    def levels(self) -> list:
        """Query coordinates on the radius axis."""
        c = 0.5 if self.convention == "diameter" else 1.0
        if self.family in _PAIR_FAMILIES:
            return [(r * c, s * c) for r, s in self.pairs]
        return [r * c for r in self.pairs]

    def labels(self) -> list:
        if self.family == "knn_length":
            return [f"k={self.k}"]
        if self.family in _PAIR_FAMILIES:
            return [f"{r:g}:{s:g}" for r, s in self.pairs]
        return [f"{r:g}" for r in self.pairs]

    def describe(self) -> str:
        """Compact one-token description, used in CSV rows."""
        if self.family == "knn_length":
            return f"knn_length:k{self.k}:{'directed' if self.directed else 'undirected'}"
        parts = [self.family, self.complex_kind]
        if self.q is not None:
            parts.append(f"q{self.q}")
        if self.B is not None:
            parts.append(f"B{self.B:g}")
        parts.append("|".join(self.labels()))
        return ":".join(parts)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["pairs"] = [list(p) if isinstance(p, tuple) else p for p in self.pairs]
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "StatisticSpec":
        d = dict(d)
        d["pairs"] = tuple(tuple(p) if isinstance(p, list) else p for p in d.get("pairs", ()))
        return cls(**d)


@dataclass(frozen=True)
class StatisticValue:
    components: np.ndarray = field(default_factory=lambda: np.zeros(0))

    def __post_init__(self):
        c = np.asarray(self.components, dtype=np.float64).reshape(-1)
        if not np.all(np.isfinite(c)):
            raise InvalidArgument("statistic value has non-finite entries")
        c.setflags(write=False)
        object.__setattr__(self, "components", c)

    def __len__(self):
        return len(self.components)

    def __sub__(self, other: "StatisticValue") -> "StatisticValue":
        return StatisticValue(self.components - other.components)

    def __eq__(self, other):
        return isinstance(other, StatisticValue) and np.array_equal(self.components, other.components)

    __hash__ = None

    def tolist(self) -> list:
        return self.components.tolist()


def knn_total_length(cloud: PointCloud, k: int, directed: bool = True) -> float:
    """Total edge length of the k-nearest-neighbour graph; ties go to the lower index."""
    n = cloud.n
    if k < 1:
        raise InvalidArgument(f"k must be >= 1, got {k}")
    if k >= n:
        raise InvalidArgument(f"need more than k={k} points, got {n}")
    D = np.array(distance_matrix(cloud))
    np.fill_diagonal(D, np.inf)
    nbrs = np.argsort(D, axis=1, kind="stable")[:, :k]
    if directed:
        return float(np.take_along_axis(D, nbrs, axis=1).sum())
    rows = np.repeat(np.arange(n), k)
    cols = nbrs.reshape(-1)
    edges = np.unique(np.stack([np.minimum(rows, cols), np.maximum(rows, cols)], axis=1), axis=0)
    return float(D[edges[:, 0], edges[:, 1]].sum())


def _evaluate_raw(spec: StatisticSpec, cloud: PointCloud) -> np.ndarray:
    if spec.family == "knn_length":
        return np.array([knn_total_length(cloud, spec.k, spec.directed)])
    levels = spec.levels()
    if cloud.n == 0:
        return np.zeros(len(levels))
    top = max(s for _, s in levels) if spec.family in _PAIR_FAMILIES else max(levels)
    r_max = top + spec.margin
    build = get_builder(spec.complex_kind)
    f = spec.family
    if f == "persistent_betti":
        dgm = compute_diagram(build(cloud, r_max, spec.q))
        return np.array([persistent_betti(dgm, spec.q, r, s) for r, s in levels], dtype=np.float64)
    if f == "betti":
        dgm = compute_diagram(build(cloud, r_max, spec.q))
        return np.array([persistent_betti(dgm, spec.q, r, r) for r in levels], dtype=np.float64)
    if f == "euler":
        cx = build(cloud, r_max, 2 if spec.q is None else spec.q)
        return np.array([euler_characteristic(cx, r) for r in levels], dtype=np.float64)
    if f == "truncated_euler":
        cx = build(cloud, r_max, max(spec.q - 1, 0))
        return np.array([truncated_euler(cx, spec.q, r) for r in levels], dtype=np.float64)
    cx = build(cloud, r_max, spec.q)
    return np.array([bounded_persistent_betti(cx, spec.q, spec.B, r, s) for r, s in levels], dtype=np.float64)


def evaluate(spec: StatisticSpec, cloud: PointCloud) -> StatisticValue:
    """ψ(cloud) at every query coordinate of ``spec``.

    With ``scale_by_n`` the cloud is first multiplied by n^{1/d}. An empty
    cloud evaluates to zeros for the homological families.
    """
    if spec.scale_by_n and cloud.n > 0:
        cloud = scale(cloud, root_n_factor(cloud.n, cloud.dim))
    return StatisticValue(_evaluate_raw(spec, cloud))


def add_one_cost(spec: StatisticSpec, S: PointCloud, z) -> StatisticValue:
    """D_z(S; ψ) = ψ(S ∪ {z}) − ψ(S)."""
    if spec.scale_by_n:
        raise InvalidSpec("add-one costs are taken on already scaled clouds; disable scale_by_n")
    return evaluate(spec, S.with_point(z)) - evaluate(spec, S)


def _same(a: StatisticValue, b: StatisticValue, family: str) -> bool:
    if family == "knn_length":
        return bool(np.allclose(a.components, b.components, rtol=1e-9, atol=1e-12))
    return a == b


def empirical_stabilization_radius(spec: StatisticSpec, S: PointCloud, z, l_grid) -> float:
    """Smallest grid radius from which the cost of adding ``z`` to S ∩ B_z(l) no longer changes.

    The full-set cost counts as the value at l = ∞. Returns ``inf`` if the
    cost at the largest grid radius still differs from it.
    """
    grid = np.asarray(l_grid, dtype=np.float64).reshape(-1)
    if grid.size == 0:
        raise InvalidArgument("empty radius grid")
    if np.any(np.diff(grid) < 0):
        raise InvalidArgument("radius grid must be ascending")
    z = np.asarray(z, dtype=np.float64)
    full = add_one_cost(spec, S, z)
    best = np.inf
    for l in grid[::-1]:
        if not _same(add_one_cost(spec, S.within(z, l), z), full, spec.family):
            break
        best = float(l)
    return best


@dataclass
class StabilizationTail:
    L: np.ndarray
    tail: np.ndarray
    radii: np.ndarray

    def to_dict(self) -> dict:
        return {"L": self.L.tolist(), "tail": self.tail.tolist(), "radii": [float(r) for r in self.radii]}


def _draw(sampler, m, rng) -> PointCloud:
    if isinstance(sampler, str):
        from .simulate import generate

        return generate(sampler, m, rng)
    if hasattr(sampler, "sample"):
        return sampler.sample(m, rng)
    return sampler(m, rng)


def stabilization_tail(spec, sampler, n: int, L_grid, trials: int, seed: int = 0, threads: int | None = 1):
    """Monte Carlo tail P(ρ̂ > L) of the empirical stabilization radius.

    Each trial draws Y_n and an independent centre Y' from ``sampler``
    (a distribution id, a fitted KDE, or a callable ``(m, rng)``), scales
    both by n^{1/d}, and measures the radius on ``L_grid`` extended by the
    largest distance from the centre.
    """
    if trials < 1:
        raise InvalidArgument(f"trials must be >= 1, got {trials}")
    L = np.asarray(sorted(float(x) for x in L_grid))
    if L.size == 0:
        raise InvalidArgument("empty radius grid")

    def one(t):
        rng = substream(seed, STAGE_STABILIZATION, t)
        Y = _draw(sampler, n, rng)
        z = _draw(sampler, 1, rng).points[0]
        f = root_n_factor(n, Y.dim)
        Y, z = scale(Y, f), z * f
        reach = float(np.max(np.linalg.norm(Y.points - z, axis=1)))
        grid = np.unique(np.append(L, reach))
        return empirical_stabilization_radius(spec, Y, z, grid)

    radii = np.asarray(pmap(one, range(trials), threads))
    tail = np.array([np.mean(radii > x) for x in L])
    return StabilizationTail(L, tail, radii)


def sample_homogeneous_poisson(window, intensity: float, rng) -> PointCloud:
    """Homogeneous Poisson process restricted to an axis-aligned box ``(lower, upper)``."""
    lo, hi = (np.asarray(w, dtype=np.float64).reshape(-1) for w in window)
    if lo.shape != hi.shape or lo.size == 0:
        raise InvalidArgument("window corners must have the same nonzero dimension")
    if not intensity > 0:
        raise InvalidArgument(f"intensity must be positive, got {intensity}")
    side = hi - lo
    if np.any(side <= 0):
        raise InvalidArgument("window has zero volume")
    count = rng.poisson(intensity * float(np.prod(side)))
    return PointCloud(lo + rng.random((count, lo.size)) * side)
