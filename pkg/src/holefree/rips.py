"""Vietoris-Rips complexes up to dimension 2, clique counts and edge heights.

Two points are joined when their distance is *strictly* less than ``r``.
Cliques are handled with Python ints used as vertex bitsets.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .geometry import ParameterError, PointCloud


class CliqueCapError(RuntimeError):
    """Raised when clique enumeration meets a clique larger than the cap."""

    def __init__(self, size_cap: int):
        super().__init__(f"clique size exceeds size_cap={size_cap}")
        self.size_cap = size_cap


@dataclass(frozen=True, eq=False)
class RipsComplex:
    vertex_count: int
    edges: tuple
    triangles: tuple
    parameter_r: float
    _neighbors: tuple = field(default=None, init=False, repr=False)

    @property
    def neighbors(self) -> tuple:
        """Per-vertex neighbour sets of the 1-skeleton."""
        if self._neighbors is None:
            nbrs = [set() for _ in range(self.vertex_count)]
            for i, j in self.edges:
                nbrs[i].add(j)
                nbrs[j].add(i)
            object.__setattr__(self, "_neighbors", tuple(frozenset(s) for s in nbrs))
        return self._neighbors

    def counts(self) -> tuple[int, int, int]:
        return self.vertex_count, len(self.edges), len(self.triangles)


def adjacency(cloud: PointCloud, r: float) -> np.ndarray:
    """Boolean matrix of pairs at distance < r (diagonal False)."""
    if not r > 0:
        raise ParameterError(f"r must be positive, got {r!r}")
    adj = cloud.distance_matrix() < r
    np.fill_diagonal(adj, False)
    return adj


def complex_from_adjacency(adj: np.ndarray, r: float) -> RipsComplex:
    n = len(adj)
    nbrs = [np.flatnonzero(adj[i]) for i in range(n)]
    edges = []
    triangles = []
    for i in range(n):
        higher = nbrs[i][nbrs[i] > i]
        for j in higher:
            edges.append((i, int(j)))
            # third vertex above j, adjacent to both
            common = np.intersect1d(higher, nbrs[j], assume_unique=True)
            for k in common[common > j]:
                triangles.append((i, int(j), int(k)))
    return RipsComplex(n, tuple(edges), tuple(triangles), float(r))


def build_rips(cloud: PointCloud, r: float) -> RipsComplex:
    return complex_from_adjacency(adjacency(cloud, r), r)


def restrict(cx: RipsComplex, vertices: Iterable[int]) -> RipsComplex:
    """Full subcomplex on ``vertices``, relabelled 0..m-1 in ascending order.

    For a Rips complex this is the Rips complex of the vertex subset.
    """
    keep = sorted(set(vertices))
    index = {v: i for i, v in enumerate(keep)}
    edges = tuple((index[i], index[j]) for i, j in cx.edges if i in index and j in index)
    triangles = tuple((index[i], index[j], index[k]) for i, j, k in cx.triangles
                      if i in index and j in index and k in index)
    return RipsComplex(len(keep), edges, triangles, cx.parameter_r)


def _bitsets(neighbors: Sequence[Iterable[int]]) -> list[int]:
    out = []
    for nb in neighbors:
        b = 0
        for v in nb:
            b |= 1 << int(v)
        out.append(b)
    return out


def _bits(mask: int):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def count_cliques(neighbors: Sequence[Iterable[int]], size_cap: int) -> list[int]:
    """Number of cliques of each size (index k holds (k+1)-cliques)."""
    if size_cap < 1:
        raise ParameterError(f"size_cap must be >= 1, got {size_cap!r}")
    n = len(neighbors)
    if n == 0:
        return []
    masks = _bitsets(neighbors)
    counts = [0] * (size_cap + 1)
    counts[0] = n

    # each clique is reached once, by extending with higher-indexed vertices
    def extend(size: int, cand: int):
        for v in _bits(cand):
            if size + 1 > size_cap:
                raise CliqueCapError(size_cap)
            counts[size] += 1
            nxt = cand & masks[v] & ~((2 << v) - 1)
            if nxt:
                extend(size + 1, nxt)

    for v in range(n):
        higher = masks[v] & ~((2 << v) - 1)
        if higher:
            extend(1, higher)
    while counts and counts[-1] == 0:
        counts.pop()
    return counts


def count_simplices_full(cloud: PointCloud, r: float, size_cap: int = 16) -> list[int]:
    """Exact simplex counts ``[s0, s1, ...]`` of the full Rips complex."""
    if size_cap < 1:
        raise ParameterError(f"size_cap must be >= 1, got {size_cap!r}")
    adj = adjacency(cloud, r)
    return count_cliques([np.flatnonzero(row) for row in adj], size_cap)


def _max_clique(cand: int, masks: list[int]) -> int:
    """Size of a maximum clique inside the vertex set ``cand``."""
    best = 0

    def expand(size: int, p: int):
        nonlocal best
        if not p:
            best = max(best, size)
            return
        if size + p.bit_count() <= best:
            return
        # branch on vertices outside the pivot's neighbourhood
        pivot = max(_bits(p), key=lambda u: (p & masks[u]).bit_count())
        for v in _bits(p & ~masks[pivot]):
            if size + p.bit_count() <= best:
                return
            expand(size + 1, p & masks[v])
            p &= ~(1 << v)

    expand(0, cand)
    return best


def edge_height(neighbors: Sequence[Iterable[int]], edge: tuple[int, int]) -> int:
    """Vertex count of the largest clique containing ``edge`` (2 if isolated).

    ``neighbors`` is the adjacency of the distance-< r graph, e.g.
    ``RipsComplex.neighbors``.
    """
    i, j = edge
    if i == j or j not in neighbors[i]:
        raise ParameterError(f"edge {edge!r} is not in the graph")
    masks = _bitsets(neighbors)
    return 2 + _max_clique(masks[i] & masks[j], masks)


def edge_heights(cx: RipsComplex) -> dict[tuple[int, int], int]:
    masks = _bitsets(cx.neighbors)
    return {(i, j): 2 + _max_clique(masks[i] & masks[j], masks) for i, j in cx.edges}
