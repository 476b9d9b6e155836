"""Boundary matrices over GF(2) and the Betti numbers beta0, beta1."""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple, Sequence

from .geometry import ParameterError
from .rips import RipsComplex


@dataclass(frozen=True)
class BoundaryMatrix:
    """Sparse GF(2) matrix stored column by column.

    ``columns[c]`` lists, in increasing order, the rows holding a 1.
    """

    rows: int
    cols: int
    columns: tuple
    degree_k: int

    def to_dense(self):
        import numpy as np

        m = np.zeros((self.rows, self.cols), dtype=np.uint8)
        for c, col in enumerate(self.columns):
            m[list(col), c] = 1
        return m


class BettiProfile(NamedTuple):
    beta0: int
    beta1: int

    @property
    def euler(self) -> int:
        return self.beta0 - self.beta1


def boundary_matrix(cx: RipsComplex, k: int) -> BoundaryMatrix:
    if k == 1:
        cols = tuple((i, j) for i, j in cx.edges)
        return BoundaryMatrix(cx.vertex_count, len(cols), cols, 1)
    if k == 2:
        row = {e: n for n, e in enumerate(cx.edges)}
        cols = tuple(tuple(sorted((row[(i, j)], row[(i, l)], row[(j, l)])))
                     for i, j, l in cx.triangles)
        return BoundaryMatrix(len(cx.edges), len(cols), cols, 2)
    raise ParameterError(f"k must be 1 or 2, got {k!r}")


def _column_bits(columns: Sequence[Sequence[int]]):
    for col in columns:
        b = 0
        for r in col:
            b |= 1 << r
        yield b


def _reduce(columns, limit: int | None = None) -> int:
    """Column reduction with lowest-one pivots; returns the rank.

    Stops early once ``limit`` pivots are found (the rank cannot exceed it).
    """
    pivots: dict[int, int] = {}
    for c in _column_bits(columns):
        while c:
            low = c.bit_length() - 1
            p = pivots.get(low)
            if p is None:
                pivots[low] = c
                break
            c ^= p
        if limit is not None and len(pivots) >= limit:
            break
    return len(pivots)


def rank_gf2(m: BoundaryMatrix) -> int:
    return _reduce(m.columns)


def betti(cx: RipsComplex) -> BettiProfile:
    """beta0 = s0 - rank d1, beta1 = (s1 - rank d1) - rank d2."""
    rank1 = rank_gf2(boundary_matrix(cx, 1))
    cycles = len(cx.edges) - rank1
    rank2 = _reduce(boundary_matrix(cx, 2).columns, limit=cycles) if cycles else 0
    return BettiProfile(cx.vertex_count - rank1, cycles - rank2)


class DisjointSet:
    def __init__(self, n: int):
        self.parent = list(range(n))
        self.size = [1] * n
        self.count = n

    def find(self, x: int) -> int:
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, x: int, y: int) -> bool:
        x, y = self.find(x), self.find(y)
        if x == y:
            return False
        if self.size[x] < self.size[y]:
            x, y = y, x
        self.parent[y] = x
        self.size[x] += self.size[y]
        self.count -= 1
        return True


def connected_components(cx: RipsComplex) -> int:
    ds = DisjointSet(cx.vertex_count)
    for i, j in cx.edges:
        ds.union(i, j)
    return ds.count


def multiply_gf2(left: BoundaryMatrix, right: BoundaryMatrix) -> list[set[int]]:
    """Columns of ``left @ right`` over GF(2), as sets of nonzero rows."""
    if left.cols != right.rows:
        raise ParameterError("inner dimensions differ")
    out = []
    for col in right.columns:
        acc: set[int] = set()
        for r in col:
            acc.symmetric_difference_update(left.columns[r])
        out.append(acc)
    return out
