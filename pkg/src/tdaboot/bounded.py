"""B-bounded cycles, boundaries and persistent Betti numbers.

A chain has diameter at most ``B`` exactly when its vertex set is a clique of
the ``B``-threshold graph, so the span of bounded cycles is the sum over
maximal cliques ``C`` of the cycle spaces of the induced subcomplexes
``K[C]``. Boundaries are handled the same way, intersecting the global
boundary space with the chains supported on ``K[C]``.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

import numpy as np

from . import gf2
from .complexes import FilteredComplex
from .errors import InvalidArgument, OutOfRange
from .persistence import BoundReport, check_nested
from .pointcloud import distance_matrix


@dataclass(frozen=True)
class ChainBasis:
    """Basis of a subspace of C_q at a fixed level.

    ``ambient`` lists the q-simplices of the level in the complex's order;
    bit ``i`` of each vector is the coefficient of ``ambient[i]``.
    """

    ambient: tuple
    vectors: tuple

    @property
    def dim(self) -> int:
        return len(self.vectors)

    def __len__(self):
        return len(self.vectors)


def bron_kerbosch(adjacency: list) -> list:
    """Maximal cliques of a graph given as a list of neighbour sets.

    Bron–Kerbosch with Tomita pivoting; cliques come back as sorted tuples in
    sorted order so downstream merges are deterministic.
    """
    cliques = []

    def expand(R, P, X):
        if not P and not X:
            cliques.append(tuple(sorted(R)))
            return
        pivot = max(P | X, key=lambda u: len(P & adjacency[u]))
        for v in list(P - adjacency[pivot]):
            expand(R | {v}, P & adjacency[v], X & adjacency[v])
            P = P - {v}
            X = X | {v}

    n = len(adjacency)
    if n:
        expand(set(), set(range(n)), set())
    return sorted(cliques)


def threshold_cliques(cx: FilteredComplex, B: float) -> list:
    D = distance_matrix(cx.cloud) if cx.cloud.n else np.zeros((0, 0))
    n = cx.cloud.n
    adjacency = [set(np.flatnonzero((D[u] <= B) & (np.arange(n) != u)).tolist()) for u in range(n)]
    return bron_kerbosch(adjacency)


def _level_simplices(cx: FilteredComplex, q: int, level: float) -> np.ndarray:
    return np.flatnonzero((cx.dims == q) & (cx.filtrations <= level))


def _boundary(cx: FilteredComplex, j: int) -> int:
    s = cx.simplices[j]
    col = 0
    if len(s) > 1:
        index = cx.index
        for face in combinations(s, len(s) - 1):
            col |= 1 << index[face]
    return col


def _validate(cx, q, B, level):
    if B < 0:
        raise InvalidArgument(f"diameter bound must be nonnegative, got {B}")
    if level > cx.r_max:
        raise OutOfRange(f"level {level} exceeds the truncation radius {cx.r_max}")
    if q > cx.max_dim:
        raise OutOfRange(f"q={q} exceeds the built dimension {cx.max_dim}")


def _cycles_global(cx, q, B, r, cliques=None) -> list:
    """Basis of Z_{q,B}(K^r) as bitsets over global simplex positions."""
    cliques = threshold_cliques(cx, B) if cliques is None else cliques
    candidates = _level_simplices(cx, q, r)
    basis = gf2.Echelon()
    for C in cliques:
        inside = set(C)
        members = [int(j) for j in candidates if inside.issuperset(cx.simplices[j])]
        if not members:
            continue
        cols = [_boundary(cx, j) if q > 0 else 0 for j in members]
        for combo in gf2.kernel(cols):
            v = 0
            for pos in gf2.bits(combo):
                v |= 1 << members[pos]
            basis.add(v)
    return basis.basis()


def _boundaries_global(cx, q, B, s, cliques=None) -> list:
    """Basis of B_{q,B}(K^s) as bitsets over global simplex positions."""
    cliques = threshold_cliques(cx, B) if cliques is None else cliques
    full = gf2.span_basis(_boundary(cx, int(j)) for j in _level_simplices(cx, q + 1, s))
    if not full:
        return []
    qs = _level_simplices(cx, q, s)
    basis = gf2.Echelon()
    for C in cliques:
        inside = set(C)
        mask = 0
        for j in qs:
            if inside.issuperset(cx.simplices[j]):
                mask |= 1 << int(j)
        if not mask:
            continue
        # Boundaries supported on K[C]: combinations whose part outside C cancels.
        outside = [b & ~mask for b in full]
        for combo in gf2.kernel(outside):
            v = 0
            for pos in gf2.bits(combo):
                v ^= full[pos]
            if v:
                basis.add(v)
    return basis.basis()


def _to_basis(cx, q, level, vectors) -> ChainBasis:
    ambient_idx = [int(j) for j in _level_simplices(cx, q, level)]
    pos = {j: i for i, j in enumerate(ambient_idx)}
    out = []
    for v in vectors:
        w = 0
        for j in gf2.bits(v):
            w |= 1 << pos[j]
        out.append(w)
    return ChainBasis(tuple(cx.simplices[j] for j in ambient_idx), tuple(gf2.span_basis(out)))


def bounded_cycle_space(cx: FilteredComplex, q: int, B: float, r: float) -> ChainBasis:
    """span{x in Z_q(K^r) : diam(x) <= B}."""
    _validate(cx, q, B, r)
    return _to_basis(cx, q, r, _cycles_global(cx, q, B, r))


def bounded_boundary_space(cx: FilteredComplex, q: int, B: float, s: float) -> ChainBasis:
    """span{x in B_q(K^s) : diam(x) <= B}."""
    _validate(cx, q, B, s)
    return _to_basis(cx, q, s, _boundaries_global(cx, q, B, s))


def bounded_persistent_betti(cx: FilteredComplex, q: int, B: float, r: float, s: float) -> int:
    """dim Z_{q,B}(K^r) - dim(Z_{q,B}(K^r) ∩ B_{q,B}(K^s))."""
    if r > s:
        raise InvalidArgument(f"need r <= s, got r={r}, s={s}")
    _validate(cx, q, B, s)
    cliques = threshold_cliques(cx, B)
    Z = _cycles_global(cx, q, B, r, cliques)
    Bd = _boundaries_global(cx, q, B, s, cliques)
    return len(Z) - gf2.intersection_dim(Z, Bd)


def _relabel(vectors, src: FilteredComplex, dst: FilteredComplex) -> list:
    out = []
    for v in vectors:
        w = 0
        for j in gf2.bits(v):
            w |= 1 << dst.index[src.simplices[j]]
        out.append(w)
    return out


def bounded_geometric_lemma_check(
    J: FilteredComplex, K: FilteredComplex, q: int, B: float, r: float, s: float
) -> BoundReport:
    """Both sides of the bounded geometric inequality for J ⊆ K.

    The right side is dim(Z_{q,B}(K^r)/Z_{q,B}(J^r)) + dim(B_{q,B}(K^s)/B_{q,B}(J^s)),
    each quotient measured as the number of K-basis vectors extending a
    J-basis.
    """
    check_nested(J, K)
    cj, ck = threshold_cliques(J, B), threshold_cliques(K, B)
    ZJ = _relabel(_cycles_global(J, q, B, r, cj), J, K)
    ZK = _cycles_global(K, q, B, r, ck)
    BJ = _relabel(_boundaries_global(J, q, B, s, cj), J, K)
    BK = _boundaries_global(K, q, B, s, ck)
    bj = len(ZJ) - gf2.intersection_dim(ZJ, BJ)
    bk = len(ZK) - gf2.intersection_dim(ZK, BK)
    dz = gf2.extension_count(ZJ, ZK)
    db = gf2.extension_count(BJ, BK)
    return BoundReport(abs(bk - bj), dz + db, max(dz, db), bj, bk)
