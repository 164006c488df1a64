"""Minimal enclosing balls (Welzl's move-to-front recursion)."""

from __future__ import annotations

import numpy as np

TOL = 1e-10


def circumball(support: np.ndarray) -> tuple[np.ndarray, float]:
    """Smallest ball with every support point on its boundary.

    The center lies in the affine hull of the support; affinely dependent
    supports fall back to least squares.
    """
    k = len(support)
    if k == 1:
        return support[0].copy(), 0.0
    p0 = support[0]
    if k == 2:
        center = (p0 + support[1]) / 2.0
        return center, float(np.linalg.norm(support[1] - p0)) / 2.0
    A = support[1:] - p0
    G = A @ A.T
    b = 0.5 * np.einsum("ij,ij->i", A, A)
    try:
        lam = np.linalg.solve(G, b)
    except np.linalg.LinAlgError:
        lam = np.linalg.lstsq(G, b, rcond=None)[0]
    center = p0 + lam @ A
    radius = max(float(np.linalg.norm(support[i] - center)) for i in range(k))
    return center, radius


def _contains(center, radius, p) -> bool:
    return float(np.linalg.norm(p - center)) <= radius + TOL * max(1.0, radius)


def _mtf(points: list, end: int, support: list, dim: int):
    if support:
        center, radius = circumball(np.array(support))
    else:
        center, radius = None, -1.0
    if len(support) == dim + 1:
        return center, radius
    i = 0
    while i < end:
        p = points[i]
        if center is None or not _contains(center, radius, p):
            center, radius = _mtf(points, i, support + [p], dim)
            points.insert(0, points.pop(i))
        i += 1
    return center, radius


def minimal_enclosing_ball(points) -> tuple[np.ndarray, float]:
    """Center and radius of the smallest closed ball containing ``points``."""
    pts = np.asarray(points, dtype=np.float64)
    if pts.ndim != 2 or len(pts) == 0:
        raise ValueError("need a non-empty (k, d) array")
    if len(pts) <= 2:
        return circumball(pts)
    work = [p for p in pts]
    return _mtf(work, len(work), [], pts.shape[1])


def meb_radius(points) -> float:
    return minimal_enclosing_ball(points)[1]
