"""Delaunay complex construction: counts, adjacency, empty-circumsphere."""

import numpy as np
import pytest

from alphabetti.delaunay import build_delaunay, verify_empty_circumsphere
from alphabetti.errors import DegenerateInputError


def test_three_points_2d():
    cpx = build_delaunay([(0, 0), (1, 0), (0, 1)])
    assert cpx.n_simplices(2) == 1
    assert cpx.n_simplices(1) == 3
    assert cpx.n_simplices(0) == 3
    assert cpx.hull_facets.all()


def test_two_triangles_share_expected_diagonal():
    pts = np.array([(0, 0), (1, 0), (0, 1), (0.9, 0.9)])
    cpx = build_delaunay(pts)
    assert cpx.n_simplices(2) == 2
    # brute-force: of the two diagonal choices only {(1,0),(0,1)} passes the
    # empty-circumcircle test
    assert verify_empty_circumsphere(cpx)
    edges = {tuple(e) for e in cpx.simplices[1].tolist()}
    assert (1, 2) in edges
    assert (0, 3) not in edges


def test_euler_relations_2d():
    rng = np.random.default_rng(0)
    pts = rng.random((100, 2))
    cpx = build_delaunay(pts)
    h = int(np.count_nonzero(cpx.hull_facets))
    assert cpx.n_simplices(2) == 2 * 100 - h - 2
    assert cpx.n_simplices(1) == 3 * 100 - h - 3
    # V - E + F = 1 counting bounded faces only
    assert 100 - cpx.n_simplices(1) + cpx.n_simplices(2) == 1


def test_euler_relation_3d():
    rng = np.random.default_rng(1)
    pts = rng.random((150, 3))
    cpx = build_delaunay(pts)
    v, e, f, t = (cpx.n_simplices(k) for k in range(4))
    assert v - e + f - t == 1


def test_interior_facets_have_two_cofaces():
    rng = np.random.default_rng(2)
    for d in (2, 3):
        pts = rng.random((60, d))
        cpx = build_delaunay(pts)
        deg = cpx.cofacets[d - 1].degree()
        assert set(np.unique(deg)) <= {1, 2}
        assert ((deg == 1) == cpx.hull_facets).all()


def test_every_face_present_and_opposite_vertices_correct():
    rng = np.random.default_rng(3)
    pts = rng.random((40, 3))
    cpx = build_delaunay(pts)
    for k in range(3):
        cm = cpx.cofacets[k]
        simp = cpx.simplices[k]
        par = cpx.simplices[k + 1]
        for i in range(len(simp)):
            for j in range(cm.indptr[i], cm.indptr[i + 1]):
                parent = par[cm.index[j]]
                assert set(simp[i]) < set(parent)
                assert cm.opposite[j] == (set(parent) - set(simp[i])).pop()


def test_empty_circumsphere_bruteforce():
    rng = np.random.default_rng(4)
    for d, n in ((2, 200), (3, 120)):
        pts = rng.random((n, d))
        cpx = build_delaunay(pts)
        assert verify_empty_circumsphere(cpx)


def test_insertion_order_independence():
    rng = np.random.default_rng(5)
    for d in (2, 3):
        pts = rng.random((80, d))
        cpx1 = build_delaunay(pts)
        perm = rng.permutation(80)
        cpx2 = build_delaunay(pts[perm])
        # map permuted indices back and compare simplex sets
        back = np.empty(80, dtype=np.int64)
        back[perm] = np.arange(80)
        for k in range(d + 1):
            rows2 = np.sort(back[cpx2.simplices[k]], axis=1)
            rows2 = rows2[np.lexsort(rows2.T[::-1])]
            assert np.array_equal(cpx1.simplices[k], rows2)


def test_degenerate_inputs_raise():
    with pytest.raises(DegenerateInputError):
        build_delaunay([(0, 0), (1, 1), (2, 2), (3, 3)])
    with pytest.raises(DegenerateInputError):
        build_delaunay([(0, 0), (1, 0)])
    with pytest.raises(DegenerateInputError):
        build_delaunay([(0, 0, 0), (1, 0, 0), (0, 1, 0), (1, 1, 0), (0.3, 0.3, 0)])
