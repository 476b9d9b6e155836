import itertools
import math

import numpy as np
import pytest

from holefree.geometry import PointCloud


def hexagon_points(center=(5.0, 5.0), radius=1.0):
    cx, cy = center
    return [(cx + radius * math.cos(k * math.pi / 3), cy + radius * math.sin(k * math.pi / 3))
            for k in range(6)]


@pytest.fixture
def triangle_cloud():
    # equilateral, side 0.5
    pts = [(1.0, 1.0), (1.5, 1.0), (1.25, 1.0 + 0.25 * math.sqrt(3))]
    return PointCloud.from_points(pts, 10.0)


@pytest.fixture
def hexagon_cloud():
    return PointCloud.from_points(hexagon_points(), 10.0)


# -- brute-force oracles, deliberately independent of the package code --------

def brute_cliques(points, r, dist):
    """Count all cliques of the distance-< r graph by subset enumeration."""
    n = len(points)
    close = {(i, j): dist(points[i], points[j]) < r for i in range(n) for j in range(n)}
    counts = []
    for size in range(1, n + 1):
        c = sum(all(close[(i, j)] for i, j in itertools.combinations(s, 2))
                for s in itertools.combinations(range(n), size))
        if c == 0:
            break
        counts.append(c)
    return counts


def euclid(p, q):
    return math.hypot(p[0] - q[0], p[1] - q[1])


def dense_rank_gf2(matrix):
    """Row reduction of a dense 0/1 matrix over GF(2)."""
    m = np.array(matrix, dtype=np.uint8) % 2
    if m.size == 0:
        return 0
    rank = 0
    rows, cols = m.shape
    for c in range(cols):
        pivot = next((r for r in range(rank, rows) if m[r, c]), None)
        if pivot is None:
            continue
        m[[rank, pivot]] = m[[pivot, rank]]
        for r in range(rows):
            if r != rank and m[r, c]:
                m[r] ^= m[rank]
        rank += 1
    return rank


def span_rank_gf2(columns, rows):
    """Rank as log2 of the number of distinct XOR combinations of columns."""
    vecs = set()
    for mask in range(1 << len(columns)):
        v = 0
        for k, col in enumerate(columns):
            if mask >> k & 1:
                for r in col:
                    v ^= 1 << r
        vecs.add(v)
    return int(round(math.log2(len(vecs))))


def oracle_betti(points_or_n, edges, triangles):
    """(beta0, beta1) from dense boundary matrices."""
    n = points_or_n
    edges = sorted(edges)
    d1 = np.zeros((n, len(edges)), dtype=np.uint8)
    for c, (i, j) in enumerate(edges):
        d1[i, c] = d1[j, c] = 1
    index = {e: k for k, e in enumerate(edges)}
    d2 = np.zeros((len(edges), len(triangles)), dtype=np.uint8)
    for c, (i, j, k) in enumerate(triangles):
        for e in ((i, j), (i, k), (j, k)):
            d2[index[e], c] = 1
    r1 = dense_rank_gf2(d1) if edges else 0
    r2 = dense_rank_gf2(d2) if triangles else 0
    return n - r1, len(edges) - r1 - r2


def oracle_tree(cloud, r, weight, maximize, root):
    """Literal transcription of the hole-free Prim loop.

    Keeps E_test as an explicit set, scans it for the extremal edge (ties by
    (inside, outside)) and recomputes beta1 from dense matrices every step.
    Returns (order, parent) of the tree.
    """
    pts = [tuple(p) for p in cloud.points]
    n = len(pts)
    dm = cloud.distance_matrix()
    adj = [[j for j in range(n) if j != i and dm[i, j] < r] for i in range(n)]

    def beta1(vs):
        vs = sorted(vs)
        edges = [(a, b) for a, b in itertools.combinations(vs, 2) if dm[a, b] < r]
        tris = [(a, b, c) for a, b, c in itertools.combinations(vs, 3)
                if dm[a, b] < r and dm[a, c] < r and dm[b, c] < r]
        loc = {v: k for k, v in enumerate(vs)}
        return oracle_betti(len(vs), [(loc[a], loc[b]) for a, b in edges],
                            [(loc[a], loc[b], loc[c]) for a, b, c in tris])[1]

    tree = [root]
    parent = {}
    e_test = {(root, x) for x in adj[root]}
    while len(tree) < n and e_test:
        sign = -1 if maximize else 1
        t, x = min(e_test, key=lambda e: (sign * weight(min(e), max(e)), e[0], e[1]))
        if beta1(tree + [x]) != 0:
            e_test.discard((t, x))
            continue
        tree.append(x)
        parent[x] = t
        e_test = {(a, b) for a, b in e_test if b != x}
        e_test |= {(x, y) for y in adj[x] if y not in tree}
    return tree, parent
