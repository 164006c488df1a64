import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from hypothesis.extra.numpy import arrays

from tdaboot.errors import EmptyInput, InvalidArgument, ParseError
from tdaboot.pointcloud import PointCloud, distance_matrix, load_csv, root_n_factor, save_csv, scale

from conftest import square


def test_load_plain(tmp_path):
    p = tmp_path / "a.csv"
    p.write_text("0,0\n1,0\n0,1\n")
    c = load_csv(p)
    assert (c.n, c.dim) == (3, 2)
    assert np.array_equal(c.points, [[0, 0], [1, 0], [0, 1]])


def test_load_header_skipped(tmp_path):
    p = tmp_path / "a.csv"
    p.write_text("x,y\n1,2\n3,4\n")
    assert load_csv(p).n == 2


def test_load_non_numeric_row(tmp_path):
    p = tmp_path / "a.csv"
    p.write_text("1,a\n")
    with pytest.raises(ParseError) as e:
        load_csv(p)
    assert e.value.row == 1


def test_load_ragged(tmp_path):
    p = tmp_path / "a.csv"
    p.write_text("x,y\n1,2\n3\n")
    with pytest.raises(ParseError) as e:
        load_csv(p)
    assert e.value.row == 3


def test_load_empty(tmp_path):
    p = tmp_path / "a.csv"
    p.write_text("")
    with pytest.raises(EmptyInput):
        load_csv(p)


def test_roundtrip(tmp_path):
    c = PointCloud(np.random.default_rng(0).random((5, 3)))
    save_csv(c, tmp_path / "c.csv", header=["a", "b", "c"])
    assert load_csv(tmp_path / "c.csv") == c


def test_nonfinite_rejected():
    with pytest.raises(InvalidArgument):
        PointCloud([[0.0, np.nan]])


def test_scale_examples():
    assert np.array_equal(scale(PointCloud([[1, 2]]), 2).points, [[2, 4]])
    c = PointCloud(np.random.default_rng(1).random((8, 3)))
    assert scale(c, 1) == c
    assert root_n_factor(8, 3) == 2.0
    assert np.array_equal(scale(c, root_n_factor(8, 3)).points, 2 * c.points)
    with pytest.raises(InvalidArgument):
        scale(c, 0)


def test_distance_examples():
    D = distance_matrix(square())
    off = np.sort(D[np.triu_indices(4, 1)])
    assert np.allclose(off, [1, 1, 1, 1, np.sqrt(2), np.sqrt(2)])
    D = distance_matrix(PointCloud([[0, 0], [3, 0], [0, 4]]))
    assert (D[0, 1], D[0, 2], D[1, 2]) == (3, 4, 5)
    assert distance_matrix(PointCloud([[1, 1], [1, 1]]))[0, 1] == 0
    with pytest.raises(EmptyInput):
        distance_matrix(PointCloud(np.zeros((0, 2))))


def test_multiset_and_order_kept():
    c = PointCloud([[1, 1], [0, 0], [1, 1]])
    assert c.n == 3 and np.array_equal(c.points[0], c.points[2])
    assert c.within([1, 1], 0.0).n == 2


coords = arrays(np.float64, st.tuples(st.integers(1, 6), st.integers(1, 3)), elements=st.floats(-100, 100))


@settings(max_examples=60, deadline=None)
@given(coords, st.floats(0.01, 50), st.floats(0.01, 50))
def test_scale_composition(X, a, b):
    c = PointCloud(X)
    assert np.allclose(scale(scale(c, a), b).points, scale(c, a * b).points, rtol=1e-12, atol=1e-300)


@settings(max_examples=60, deadline=None)
@given(coords, st.floats(0.01, 50))
def test_distance_homogeneous(X, a):
    c = PointCloud(X)
    assert np.allclose(distance_matrix(scale(c, a)), a * distance_matrix(c), rtol=1e-9, atol=1e-9)
