import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from tdaboot.complexes import FilteredComplex, build_cech, build_vr
from tdaboot.errors import InvalidArgument, MalformedComplex, NotNested, OutOfRange
from tdaboot.persistence import (
    PersistenceDiagram,
    betti_curve,
    compute_diagram,
    euler_characteristic,
    geometric_lemma_check,
    persistent_betti,
    persistent_betti_direct,
    truncated_euler,
)
from tdaboot.pointcloud import PointCloud

from conftest import random_clouds, square, triangle

INF = math.inf


def test_triangle_vr_diagram():
    d = compute_diagram(build_vr(triangle(), 1.0, 1))
    got = d.points(0)
    assert [b for b, _, _ in got] == [0.0, 0.0, 0.0]
    assert [x for _, x, _ in got[:2]] == pytest.approx([0.5, 0.5])
    assert got[2][1] == INF
    assert d.points(1) == []


def test_triangle_cech_diagram():
    (b, dth, q), = compute_diagram(build_cech(triangle(), 1.0, 1)).points(1)
    assert (b, q) == (0.5, 1)
    assert dth == pytest.approx(1 / np.sqrt(3), abs=1e-12)


def test_square_vr_loop():
    (b, dth, _), = compute_diagram(build_vr(square(), 1.0, 1)).points(1)
    assert b == 0.5 and dth == pytest.approx(np.sqrt(2) / 2)


def test_persistent_betti_examples():
    d = PersistenceDiagram.from_points([(0.2, 0.9, 1), (0.5, 0.7, 1)])
    assert persistent_betti(d, 1, 0.5, 0.8) == 1
    assert persistent_betti(PersistenceDiagram.from_points([]), 1, 0.1, 0.2) == 0
    with pytest.raises(InvalidArgument):
        persistent_betti(d, 1, 0.8, 0.5)


def test_direct_examples():
    one = build_vr(PointCloud([[0.0, 0.0]]), 1.0, 1)
    assert persistent_betti_direct(one, 0, 0.3, 0.9) == 1
    two = build_vr(PointCloud([[0.0, 0.0], [1.0, 0.0]]), 1.0, 1)
    assert persistent_betti_direct(two, 0, 0.2, 0.6) == 1
    with pytest.raises(OutOfRange):
        persistent_betti_direct(two, 0, 0.2, 1.5)
    with pytest.raises(OutOfRange):
        persistent_betti_direct(two, 2, 0.2, 0.5)


def test_betti_curve_examples():
    assert betti_curve(compute_diagram(build_vr(triangle(), 1.0, 1)), 0, [0.25, 0.75]) == [3, 1]
    assert betti_curve(compute_diagram(build_vr(triangle(), 1.0, 1)), 3, [0.25, 0.75]) == [0, 0]
    assert betti_curve(compute_diagram(build_cech(square(), 1.0, 1)), 1, [0.6]) == [1]
    with pytest.raises(InvalidArgument):
        betti_curve(compute_diagram(build_vr(triangle(), 1.0, 1)), 0, [0.5, 0.25])


def full_simplex_4():
    c = PointCloud(np.eye(4))
    return build_vr(c, 1.0, 3)


def test_euler_examples():
    far = PointCloud([[0, 0], [5, 0], [0, 5], [5, 5]])
    assert euler_characteristic(build_vr(far, 1.0, 2), 1.0) == 4
    assert euler_characteristic(full_simplex_4(), 1.0) == 1
    assert euler_characteristic(build_vr(triangle(), 1.0, 1), 0.5) == 1
    with pytest.raises(OutOfRange):
        euler_characteristic(build_vr(triangle(), 1.0, 1), 2.0)


def test_truncated_euler_examples():
    cx = full_simplex_4()
    assert truncated_euler(cx, 1, 1.0) == -2
    assert truncated_euler(cx, 0, 1.0) == 4
    assert truncated_euler(cx, 3, 1.0) == euler_characteristic(cx, 1.0)
    with pytest.raises(OutOfRange):
        truncated_euler(build_vr(triangle(), 1.0, 1), 3, 0.5)


def test_twist_equals_standard():
    for c in random_clouds(60, 11):
        for b in (build_vr, build_cech):
            cx = b(c, 0.8, 2)
            d1, d2 = compute_diagram(cx), compute_diagram(cx, method="standard")
            assert d1.points() == d2.points()


def test_malformed_detected():
    c = triangle()
    cx = FilteredComplex(c, ((0,), (0, 1), (1,)), np.array([0.0, 0.5, 0.5]), 1.0, 1)
    with pytest.raises(MalformedComplex):
        compute_diagram(cx, method="standard")
    with pytest.raises(MalformedComplex):
        compute_diagram(cx)


def test_csv_roundtrip():
    d = compute_diagram(build_vr(square(), 1.0, 1))
    assert PersistenceDiagram.from_csv(d.to_csv()).points() == d.points()


def test_geometric_lemma_trivial_cases():
    cx = build_vr(square(), 1.0, 1)
    rep = geometric_lemma_check(cx, cx, 1, 0.5, 0.6)
    assert (rep.lhs, rep.rhs) == (0, 0)
    single = build_vr(PointCloud([[0.0, 0.0]]), 1.0, 1)
    empty = FilteredComplex.from_simplices(single.cloud, [], [], 1.0, 1)
    rep = geometric_lemma_check(empty, single, 0, 0.3, 0.3)
    assert rep.lhs == 1 and rep.rhs == 1 and rep.holds


def test_not_nested():
    a = build_vr(square(), 1.0, 1)
    b = build_vr(triangle(), 1.0, 1)
    with pytest.raises(NotNested):
        geometric_lemma_check(a, b, 0, 0.1, 0.2)


pts = st.lists(st.tuples(st.floats(0, 1), st.floats(0, 1)), min_size=1, max_size=7)


@settings(max_examples=60, deadline=None)
@given(pts, st.floats(0, 0.7), st.floats(0, 0.7))
def test_monotonicity(points, r, s):
    d = compute_diagram(build_vr(PointCloud(points), 0.7, 1))
    r, s = min(r, s), max(r, s)
    for q in (0, 1):
        assert persistent_betti(d, q, r, s) <= persistent_betti(d, q, s, s)
        assert persistent_betti(d, q, r, s) <= persistent_betti(d, q, r, r)


@settings(max_examples=40, deadline=None)
@given(pts)
def test_reduction_is_pure(points):
    cx = build_vr(PointCloud(points), 0.7, 2)
    assert compute_diagram(cx).points() == compute_diagram(cx).points()
