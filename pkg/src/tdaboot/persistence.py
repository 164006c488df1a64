"""Persistence diagrams over GF(2), persistent Betti numbers, Euler characteristics."""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations
from typing import Sequence

import numpy as np

from . import gf2
from .complexes import FilteredComplex
from .errors import InvalidArgument, MalformedComplex, NotNested, OutOfRange

INF = math.inf


@dataclass(frozen=True, eq=False)
class PersistenceDiagram:
    """Multiset of (birth, death, dim) triples; ``inf`` marks essential classes.

    Zero-length pairs are kept in ``births``/``deaths``/``dims`` (they are
    harmless for every query) but left out of :meth:`points` and dumps.
    """

    births: np.ndarray
    deaths: np.ndarray
    dims: np.ndarray

    @classmethod
    def from_points(cls, points) -> "PersistenceDiagram":
        pts = list(points)
        b = np.array([p[0] for p in pts], dtype=np.float64)
        d = np.array([p[1] for p in pts], dtype=np.float64)
        q = np.array([p[2] for p in pts], dtype=np.int64)
        if np.any(b > d):
            raise InvalidArgument("birth must not exceed death")
        if np.any(q < 0):
            raise InvalidArgument("feature dimension must be nonnegative")
        return cls(b, d, q)

    def points(self, q: int | None = None) -> list:
        keep = self.births < self.deaths
        if q is not None:
            keep &= self.dims == q
        order = np.lexsort((self.deaths[keep], self.births[keep], self.dims[keep]))
        b, d, k = self.births[keep][order], self.deaths[keep][order], self.dims[keep][order]
        return [(float(x), float(y), int(z)) for x, y, z in zip(b, d, k)]

    def __len__(self):
        return int(np.count_nonzero(self.births < self.deaths))

    def to_csv(self) -> str:
        rows = ["q,birth,death"]
        for b, d, q in self.points():
            rows.append(f"{q},{b!r},{'inf' if math.isinf(d) else repr(d)}")
        return "\n".join(rows) + "\n"

    @classmethod
    def from_csv(cls, text: str) -> "PersistenceDiagram":
        pts = []
        for line in text.strip().splitlines()[1:]:
            q, b, d = line.split(",")
            pts.append((float(b), float(d), int(q)))
        return cls.from_points(pts)


# ---------------------------------------------------------------------------
# Boundary matrix reduction


def _boundary_columns(cx: FilteredComplex) -> list:
    """Boundary of every simplex as a bitset over simplex positions."""
    index = cx.index
    cols = []
    for j, s in enumerate(cx.simplices):
        col = 0
        if len(s) > 1:
            for face in combinations(s, len(s) - 1):
                i = index.get(face)
                if i is None:
                    raise MalformedComplex(f"facet {face} of {s} is missing")
                if i >= j:
                    raise MalformedComplex(f"facet {face} is ordered after {s}")
                col |= 1 << i
        cols.append(col)
    return cols


def _pairs_standard(cx: FilteredComplex) -> tuple[dict, set]:
    """Left-to-right column reduction. Returns (death -> birth, positive)."""
    owner = {}  # low -> reduced column
    pairs = {}
    positive = set()
    for j, col in enumerate(_boundary_columns(cx)):
        while col:
            low = col.bit_length() - 1
            other = owner.get(low)
            if other is None:
                break
            col ^= other
        if col:
            low = col.bit_length() - 1
            owner[low] = col
            pairs[j] = low
        else:
            positive.add(j)
    return pairs, positive


def _pairs_twist(cx: FilteredComplex) -> tuple[dict, set]:
    """Reduction with clearing, top dimension first; H0 via union-find.

    Produces exactly the pairing of :func:`_pairs_standard` (the persistence
    pairing does not depend on how the reduction is organised).
    """
    simplices = cx.simplices
    dims = cx.dims
    index = cx.index
    top = int(dims.max()) if len(dims) else 0
    pairs = {}
    cleared = set()
    by_dim = [[] for _ in range(top + 1)]
    for j, k in enumerate(dims.tolist()):
        by_dim[k].append(j)
    for k in range(top, 1, -1):
        owner = {}
        for j in by_dim[k]:
            if j in cleared:
                continue
            col = 0
            for face in combinations(simplices[j], k):
                i = index.get(face)
                if i is None or i >= j:
                    raise MalformedComplex(f"facet {face} of {simplices[j]} is missing or misordered")
                col |= 1 << i
            while col:
                low = col.bit_length() - 1
                other = owner.get(low)
                if other is None:
                    owner[low] = col
                    pairs[j] = low
                    cleared.add(low)
                    break
                col ^= other
    if top >= 1:
        parent = {}

        def find(x):
            root = x
            while parent.get(root, root) != root:
                root = parent[root]
            while parent.get(x, x) != root:
                parent[x], x = root, parent[x]
            return root

        for j in by_dim[1]:
            if j in cleared:
                continue
            a, b = simplices[j]
            ia, ib = index.get((a,)), index.get((b,))
            if ia is None or ib is None or ia >= j or ib >= j:
                raise MalformedComplex(f"endpoint of edge {simplices[j]} is missing or misordered")
            ra, rb = find(ia), find(ib)
            if ra == rb:
                continue
            # Elder rule: the component born later dies.
            young, old = (ra, rb) if ra > rb else (rb, ra)
            parent[young] = old
            pairs[j] = young
    paired = set(pairs.values())
    positive = {j for j in range(len(simplices)) if j not in pairs}
    return pairs, positive


def compute_diagram(cx: FilteredComplex, method: str = "twist") -> PersistenceDiagram:
    """Persistence diagram of a filtered complex over GF(2).

    ``method="standard"`` runs the plain left-to-right reduction; the default
    ``"twist"`` uses clearing and union-find and gives the same diagram.
    """
    if method == "standard":
        pairs, positive = _pairs_standard(cx)
    elif method == "twist":
        pairs, positive = _pairs_twist(cx)
    else:
        raise InvalidArgument(f"unknown reduction method {method!r}")
    filt = cx.filtrations
    dims = cx.dims
    births, deaths, qs = [], [], []
    for j, i in pairs.items():
        births.append(filt[i])
        deaths.append(filt[j])
        qs.append(dims[i])
    paired = set(pairs.values())
    for j in sorted(positive - paired):
        if dims[j] <= cx.max_dim:
            births.append(filt[j])
            deaths.append(INF)
            qs.append(dims[j])
    return PersistenceDiagram(
        np.array(births, dtype=np.float64), np.array(deaths, dtype=np.float64), np.array(qs, dtype=np.int64)
    )


# ---------------------------------------------------------------------------
# Queries


def persistent_betti(diagram: PersistenceDiagram, q: int, r: float, s: float) -> int:
    """Number of points of dimension ``q`` in (-inf, r] x (s, inf]."""
    if r > s:
        raise InvalidArgument(f"need r <= s, got r={r}, s={s}")
    mask = (diagram.dims == q) & (diagram.births <= r) & (diagram.deaths > s)
    return int(np.count_nonzero(mask))


def betti_curve(diagram: PersistenceDiagram, q: int, grid: Sequence[float]) -> list:
    g = np.asarray(grid, dtype=np.float64)
    if np.any(np.diff(g) < 0):
        raise InvalidArgument("grid must be sorted ascending")
    return [persistent_betti(diagram, q, float(r), float(r)) for r in g]


def _cycle_and_boundary_spaces(cx: FilteredComplex, q: int, r: float, s: float):
    """Bases (as bitsets over simplex positions) of Z_q(K^r) and B_q(K^s)."""
    index = cx.index
    filt = cx.filtrations
    dims = cx.dims
    cols, tags = [], []
    for j in np.flatnonzero((dims == q) & (filt <= r)):
        col = 0
        if q > 0:
            for face in combinations(cx.simplices[j], q):
                col |= 1 << index[face]
        cols.append(col)
        tags.append(1 << int(j))
    cycles = []
    for combo in gf2.kernel(cols):
        v = 0
        for pos in gf2.bits(combo):
            v |= tags[pos]
        cycles.append(v)
    boundaries = []
    for j in np.flatnonzero((dims == q + 1) & (filt <= s)):
        col = 0
        for face in combinations(cx.simplices[j], q + 1):
            col |= 1 << index[face]
        boundaries.append(col)
    return cycles, boundaries


def persistent_betti_direct(cx: FilteredComplex, q: int, r: float, s: float) -> int:
    """dim Z_q(K^r) - dim(B_q(K^s) ∩ Z_q(K^r)) by rank computations.

    Independent of the reduction; used as an oracle for the diagram route.
    """
    if r > s:
        raise InvalidArgument(f"need r <= s, got r={r}, s={s}")
    if s > cx.r_max:
        raise OutOfRange(f"s={s} exceeds the truncation radius {cx.r_max}")
    if q > cx.max_dim:
        raise OutOfRange(f"q={q} exceeds the built dimension {cx.max_dim}")
    cycles, boundaries = _cycle_and_boundary_spaces(cx, q, r, s)
    z = gf2.rank(cycles)
    return z - gf2.intersection_dim(cycles, boundaries)


def euler_characteristic(cx: FilteredComplex, r: float) -> int:
    """Alternating simplex count of ``K^r`` over every built dimension."""
    if r > cx.r_max:
        raise OutOfRange(f"r={r} exceeds the truncation radius {cx.r_max}")
    d = cx.dims[cx.filtrations <= r]
    return int(np.sum(np.where(d % 2 == 0, 1, -1)))


def truncated_euler(cx: FilteredComplex, q: int, r: float) -> int:
    """Alternating simplex count of ``K^r`` up to dimension ``q``."""
    if q > cx.top_dim:
        raise OutOfRange(f"q={q} exceeds the built dimension {cx.top_dim}")
    if r > cx.r_max:
        raise OutOfRange(f"r={r} exceeds the truncation radius {cx.r_max}")
    d = cx.dims[(cx.filtrations <= r) & (cx.dims <= q)]
    return int(np.sum(np.where(d % 2 == 0, 1, -1)))


# ---------------------------------------------------------------------------
# Geometric lemma


@dataclass(frozen=True)
class BoundReport:
    lhs: int
    rhs: int
    max_bound: int
    beta_j: int
    beta_k: int

    @property
    def holds(self) -> bool:
        return self.lhs <= self.rhs


def check_nested(J: FilteredComplex, K: FilteredComplex, tol: float = 1e-12) -> None:
    """Raise NotNested unless J^r ⊆ K^r at every level."""
    for s, f in zip(J.simplices, J.filtrations):
        g = K.filtration_of(s)
        if g is None or g > f + tol:
            raise NotNested(f"simplex {s} of J is missing from K or enters K later")


def geometric_lemma_check(J: FilteredComplex, K: FilteredComplex, q: int, r: float, s: float) -> BoundReport:
    """Both sides of |β(K) - β(J)| <= #(K_q^r \\ J_q^r) + #(K_{q+1}^s \\ J_{q+1}^s)."""
    check_nested(J, K)
    bj = persistent_betti(compute_diagram(J), q, r, s)
    bk = persistent_betti(compute_diagram(K), q, r, s)
    new_q = K.count(q, r) - J.count(q, r)
    new_q1 = K.count(q + 1, s) - J.count(q + 1, s)
    return BoundReport(abs(bk - bj), new_q + new_q1, max(new_q, new_q1), bj, bk)
