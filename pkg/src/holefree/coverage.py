"""Monte-Carlo estimates of the area covered by a union of disks.

Probes are uniform on the domain and drawn from ``seed`` in one block, so two
point sets estimated with the same seed are compared on identical probes.
Disks use the cloud's own norm and wrap around on the torus.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .geometry import Geometry, ParameterError, PointCloud, Seed, TORUS, UNIFORM, make_rng
from .spanning import Tree


@dataclass(frozen=True)
class CoverageEstimate:
    covered_fraction: float
    sample_count: int
    disk_radius: float

    @property
    def stderr(self) -> float:
        p = self.covered_fraction
        return math.sqrt(p * (1.0 - p) / self.sample_count)


def draw_probes(geometry: Geometry, samples: int, seed: Seed) -> np.ndarray:
    if samples < 1:
        raise ParameterError(f"samples must be >= 1, got {samples!r}")
    return make_rng(seed).random((samples, 2)) * geometry.side_a


class _ProbeGrid:
    """Probes bucketed into square cells at least one disk radius wide.

    Probes are stored sorted by cell so each cell is a contiguous slice.
    """

    def __init__(self, probes: np.ndarray, geometry: Geometry, radius: float):
        a = geometry.side_a
        self.geometry = geometry
        self.ncell = max(1, min(128, int(a // radius)))
        self.cell = a / self.ncell
        ij = np.minimum((probes // self.cell).astype(np.int16), self.ncell - 1)
        ids = ij[:, 0] * self.ncell + ij[:, 1]
        order = np.argsort(ids, kind="stable")
        self.x = np.ascontiguousarray(probes[order, 0])
        self.y = np.ascontiguousarray(probes[order, 1])
        self.starts = np.searchsorted(ids[order], np.arange(self.ncell * self.ncell + 1))

    def block(self, point) -> list[tuple[int, int]]:
        """Slices of the probes in the 3x3 cell block around ``point``."""
        n = self.ncell
        ci, cj = (min(int(c // self.cell), n - 1) for c in point)
        cells = set()
        for di in (-1, 0, 1):
            for dj in (-1, 0, 1):
                i, j = ci + di, cj + dj
                if self.geometry.boundary == TORUS:
                    i, j = i % n, j % n
                elif not (0 <= i < n and 0 <= j < n):
                    continue
                cells.add(i * n + j)
        return [(int(self.starts[c]), int(self.starts[c + 1])) for c in sorted(cells)]


def _covered_masks(points: np.ndarray, groups: list[np.ndarray], probes: np.ndarray,
                   geometry: Geometry, radius: float) -> list[np.ndarray]:
    """For each boolean point mask in ``groups``, which probes its disks cover.

    The masks are in the grid's probe order, which is shared by all groups.
    """
    grid = _ProbeGrid(probes, geometry, radius)
    torus = geometry.boundary == TORUS
    uniform = geometry.metric == UNIFORM
    a = geometry.side_a
    covered = [np.zeros(len(probes), dtype=bool) for _ in groups]
    for v, (px, py) in enumerate(points):
        members = [g for g, mask in enumerate(groups) if mask[v]]
        if not members:
            continue
        for lo, hi in grid.block((px, py)):
            dx = np.abs(grid.x[lo:hi] - px)
            dy = np.abs(grid.y[lo:hi] - py)
            if torus:
                dx = np.minimum(dx, a - dx)
                dy = np.minimum(dy, a - dy)
            if uniform:
                hit = np.maximum(dx, dy) < radius
            else:
                hit = dx * dx + dy * dy < radius * radius
            for g in members:
                covered[g][lo:hi] |= hit
    return covered


def covered_area(points, geometry: Geometry | PointCloud, disk_radius: float,
                 samples: int = 1_000_000, seed: Seed = 0) -> CoverageEstimate:
    """Fraction of the domain within ``disk_radius`` of some point."""
    if isinstance(geometry, PointCloud):
        geometry = geometry.geometry
    if not disk_radius > 0:
        raise ParameterError(f"disk_radius must be positive, got {disk_radius!r}")
    probes = draw_probes(geometry, samples, seed)
    pts = np.asarray(points, dtype=float).reshape(-1, 2)
    if len(pts) == 0:
        return CoverageEstimate(0.0, samples, disk_radius)
    (mask,) = _covered_masks(pts, [np.ones(len(pts), bool)], probes, geometry, disk_radius)
    return CoverageEstimate(float(mask.mean()), samples, disk_radius)


def coverage_loss(cloud: PointCloud, tree: Tree | set, disk_radius: float,
                  samples: int = 1_000_000, seed: Seed = 0) -> tuple[CoverageEstimate, CoverageEstimate]:
    """(before, after): coverage of every node vs. of the tree nodes only."""
    if not disk_radius > 0:
        raise ParameterError(f"disk_radius must be positive, got {disk_radius!r}")
    keep = tree.vertices if isinstance(tree, Tree) else set(tree)
    probes = draw_probes(cloud.geometry, samples, seed)
    n = len(cloud)
    if n == 0:
        empty = CoverageEstimate(0.0, samples, disk_radius)
        return empty, empty
    in_tree = np.zeros(n, dtype=bool)
    in_tree[list(keep)] = True
    before, after = _covered_masks(cloud.points, [np.ones(n, bool), in_tree],
                                   probes, cloud.geometry, disk_radius)
    return (CoverageEstimate(float(before.mean()), samples, disk_radius),
            CoverageEstimate(float(after.mean()), samples, disk_radius))


def covered_fractions(cloud: PointCloud, vertex_sets: list, disk_radius: float,
                      samples: int, seed: Seed) -> list[float]:
    """Covered fraction of several vertex subsets on one shared probe set."""
    probes = draw_probes(cloud.geometry, samples, seed)
    groups = []
    for vs in vertex_sets:
        m = np.zeros(len(cloud), dtype=bool)
        m[list(vs)] = True
        groups.append(m)
    masks = _covered_masks(cloud.points, groups, probes, cloud.geometry, disk_radius)
    return [float(m.mean()) for m in masks]
