import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from conftest import brute_cliques, euclid
from holefree.geometry import ParameterError, PointCloud, sample_binomial
from holefree.rips import (CliqueCapError, build_rips, count_cliques, count_simplices_full,
                           edge_height, edge_heights)


def test_filled_triangle(triangle_cloud):
    cx = build_rips(triangle_cloud, 1.0)
    assert cx.edges == ((0, 1), (0, 2), (1, 2))
    assert cx.triangles == ((0, 1, 2),)


def test_distance_exactly_r_excluded():
    cloud = PointCloud.from_points([(1.0, 1.0), (3.0, 1.0)], 10.0)
    assert build_rips(cloud, 2.0).edges == ()
    assert len(build_rips(cloud, 2.0 + 1e-9).edges) == 1


def test_hexagon_pairwise_distances(hexagon_cloud):
    # the oracle: adjacent vertices sit at the circumradius, others further than 1.2
    pts = hexagon_cloud.points
    for i, j in itertools.combinations(range(6), 2):
        d = euclid(pts[i], pts[j])
        if (j - i) % 6 in (1, 5):
            assert d == pytest.approx(1.0)
        else:
            assert d > 1.2
    cx = build_rips(hexagon_cloud, 1.2)
    assert len(cx.edges) == 6
    assert cx.triangles == ()


def test_nonpositive_r():
    with pytest.raises(ParameterError):
        build_rips(sample_binomial(3, 10, seed=0), 0)


def test_count_simplices_examples(triangle_cloud, hexagon_cloud):
    empty = sample_binomial(0, 10, seed=0)
    assert count_simplices_full(empty, 1.0) == []
    assert count_simplices_full(triangle_cloud, 1.0) == [3, 3, 1]
    assert count_simplices_full(hexagon_cloud, 1.2) == [6, 6]


@pytest.mark.parametrize("seed", range(15))
def test_count_simplices_matches_subset_enumeration(seed):
    cloud = sample_binomial(11, 3.0, seed=seed)
    assert count_simplices_full(cloud, 1.4) == brute_cliques(cloud.points, 1.4, euclid)


def test_clique_cap_error():
    cloud = PointCloud.from_points([(1 + 0.01 * k, 1.0) for k in range(6)], 10.0)
    with pytest.raises(CliqueCapError, match="size_cap=4"):
        count_simplices_full(cloud, 1.0, size_cap=4)
    assert count_simplices_full(cloud, 1.0, size_cap=6) == [6, 15, 20, 15, 6, 1]


def test_count_cliques_rejects_bad_cap():
    with pytest.raises(ParameterError):
        count_cliques([set()], 0)


def test_edge_height_examples():
    isolated = [{1}, {0}]
    assert edge_height(isolated, (0, 1)) == 2
    triangle = [{1, 2}, {0, 2}, {0, 1}]
    assert edge_height(triangle, (0, 1)) == 3
    k4 = [set(range(4)) - {v} for v in range(4)]
    assert edge_height(k4, (2, 3)) == 4
    with pytest.raises(ParameterError):
        edge_height(triangle + [set()], (0, 3))


def _brute_height(nbrs, i, j):
    common = sorted(nbrs[i] & nbrs[j])
    for size in range(len(common), 0, -1):
        for sub in itertools.combinations(common, size):
            if all(b in nbrs[a] for a, b in itertools.combinations(sub, 2)):
                return size + 2
    return 2


@pytest.mark.parametrize("seed", range(10))
def test_edge_heights_match_brute_force(seed):
    cloud = sample_binomial(30, 10, seed=seed)
    cx = build_rips(cloud, 2.5)
    nbrs = [set(s) for s in cx.neighbors]
    heights = edge_heights(cx)
    for (i, j), h in heights.items():
        assert h == _brute_height(nbrs, i, j)
        # a height of 3 or more means the edge lies in some triangle
        in_triangle = any({i, j} <= set(t) for t in cx.triangles)
        assert (h >= 3) == in_triangle


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 40), st.floats(0.3, 4.0), st.integers(0, 2**32 - 1),
       st.sampled_from(["plane", "torus"]))
def test_face_closure_and_bounds(n, r, seed, boundary):
    cloud = sample_binomial(n, 10, boundary, "euclidean", seed)
    cx = build_rips(cloud, r)
    edges = set(cx.edges)
    assert len(edges) == len(cx.edges)
    assert len(set(cx.triangles)) == len(cx.triangles)
    dm = cloud.distance_matrix()
    for i, j in cx.edges:
        assert i < j < n and dm[i, j] < r
    for i, j, k in cx.triangles:
        assert i < j < k
        assert {(i, j), (i, k), (j, k)} <= edges


def test_face_closure_many_clouds():
    for seed in range(1000):
        cloud = sample_binomial(25, 10, seed=seed)
        cx = build_rips(cloud, 2.5)
        edges = set(cx.edges)
        for i, j, k in cx.triangles:
            assert (i, j) in edges and (i, k) in edges and (j, k) in edges


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 2**32 - 1), st.floats(0.2, 3.0), st.floats(0.0, 2.0))
def test_monotone_in_r(seed, r1, dr):
    cloud = sample_binomial(30, 10, seed=seed)
    small, large = build_rips(cloud, r1), build_rips(cloud, r1 + dr)
    assert set(small.edges) <= set(large.edges)
    assert set(small.triangles) <= set(large.triangles)


@pytest.mark.parametrize("seed", range(20))
def test_prefix_counts_match_complex(seed):
    cloud = sample_binomial(40, 10, seed=seed)
    cx = build_rips(cloud, 2.5)
    full = count_simplices_full(cloud, 2.5, size_cap=64)
    padded = (full + [0, 0, 0])[:3]
    assert padded == list(cx.counts())
