"""Brute-force reference computations used by several test modules."""

import itertools

from tdaboot import gf2
from tdaboot.persistence import _cycle_and_boundary_spaces
from tdaboot.pointcloud import distance_matrix


def chain_diameter(cx, D, v):
    verts = set()
    for j in gf2.bits(v):
        verts.update(cx.simplices[j])
    return max((D[a, b] for a, b in itertools.combinations(sorted(verts), 2)), default=0.0)


def bounded_cycle_dim_brute(cx, q, B, r):
    """Enumerate every vector of Z_q(K^r), keep those of diameter <= B, rank the survivors."""
    cycles, _ = _cycle_and_boundary_spaces(cx, q, r, r)
    basis = gf2.span_basis(cycles)
    D = distance_matrix(cx.cloud)
    keep = []
    for mask in range(1, 1 << len(basis)):
        v = 0
        for i in gf2.bits(mask):
            v ^= basis[i]
        if chain_diameter(cx, D, v) <= B:
            keep.append(v)
    return gf2.rank(keep)
