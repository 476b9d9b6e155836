"""Point clouds on a square or a flat torus, and the distances between them.

All randomness goes through :func:`numpy.random.default_rng`, i.e. the PCG64
bit generator seeded through ``SeedSequence``. A seed may be an ``int`` or a
tuple of ints; the same seed always yields the same cloud on every platform.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence, Union

import numpy as np

PLANE = "plane"
TORUS = "torus"
EUCLIDEAN = "euclidean"
UNIFORM = "uniform"

BOUNDARIES = (PLANE, TORUS)
METRICS = (EUCLIDEAN, UNIFORM)

Seed = Union[int, Sequence[int], np.random.SeedSequence]


class ParameterError(ValueError):
    """Invalid parameter passed to one of the package's operations."""


def make_rng(seed: Seed) -> np.random.Generator:
    if isinstance(seed, (tuple, list)):
        seed = [int(s) for s in seed]
    return np.random.default_rng(seed)


@dataclass(frozen=True)
class Geometry:
    """Domain ``[0, side_a)^2`` with a boundary mode and a norm."""

    side_a: float
    boundary: str = PLANE
    metric: str = EUCLIDEAN

    def __post_init__(self):
        if not self.side_a > 0:
            raise ParameterError(f"side_a must be positive, got {self.side_a!r}")
        if self.boundary not in BOUNDARIES:
            raise ParameterError(f"boundary must be one of {BOUNDARIES}, got {self.boundary!r}")
        if self.metric not in METRICS:
            raise ParameterError(f"metric must be one of {METRICS}, got {self.metric!r}")

    def deltas(self, diff: np.ndarray) -> np.ndarray:
        """Absolute coordinate differences, wrapped on the torus."""
        d = np.abs(diff)
        if self.boundary == TORUS:
            d = np.minimum(d, self.side_a - d)
        return d

    def norm(self, d: np.ndarray) -> np.ndarray:
        if self.metric == UNIFORM:
            return d.max(axis=-1)
        return np.sqrt((d * d).sum(axis=-1))


@dataclass(frozen=True, eq=False)
class PointCloud:
    """Ordered node positions; vertex index is the row index of ``points``."""

    points: np.ndarray
    geometry: Geometry
    _dist: np.ndarray = field(default=None, init=False, repr=False)

    def __post_init__(self):
        pts = np.array(self.points, dtype=float).reshape(-1, 2)
        a = self.geometry.side_a
        if pts.size and (pts.min() < 0 or pts.max() >= a):
            raise ParameterError(f"coordinates must lie in [0, {a})")
        pts.setflags(write=False)
        object.__setattr__(self, "points", pts)

    @classmethod
    def from_points(cls, points, side_a: float, boundary: str = PLANE,
                    metric: str = EUCLIDEAN) -> "PointCloud":
        return cls(np.asarray(points, dtype=float), Geometry(side_a, boundary, metric))

    @property
    def side_a(self) -> float:
        return self.geometry.side_a

    @property
    def boundary(self) -> str:
        return self.geometry.boundary

    @property
    def metric(self) -> str:
        return self.geometry.metric

    def __len__(self) -> int:
        return len(self.points)

    def distance_matrix(self) -> np.ndarray:
        """All pairwise distances, computed once and cached (read-only)."""
        if self._dist is None:
            dm = pairwise_distances(self.points, self.geometry)
            dm.setflags(write=False)
            object.__setattr__(self, "_dist", dm)
        return self._dist

    def subset(self, indices) -> "PointCloud":
        return PointCloud(self.points[np.asarray(list(indices), dtype=int)], self.geometry)


def distance(p, q, geometry: Geometry | PointCloud) -> float:
    if isinstance(geometry, PointCloud):
        geometry = geometry.geometry
    diff = np.asarray(p, dtype=float) - np.asarray(q, dtype=float)
    return float(geometry.norm(geometry.deltas(diff)))


def pairwise_distances(points: np.ndarray, geometry: Geometry) -> np.ndarray:
    points = np.asarray(points, dtype=float).reshape(-1, 2)
    diff = points[:, None, :] - points[None, :, :]
    return geometry.norm(geometry.deltas(diff))


def _uniform_square(rng: np.random.Generator, count: int, side_a: float) -> np.ndarray:
    pts = rng.random((count, 2)) * side_a
    # a * u can round up to a for u close to 1
    return np.minimum(pts, np.nextafter(side_a, 0.0))


def sample_binomial(n: int, side_a: float, boundary: str = PLANE,
                    metric: str = EUCLIDEAN, seed: Seed = 0) -> PointCloud:
    """Exactly ``n`` i.i.d. uniform points on the square of side ``side_a``."""
    if n < 0:
        raise ParameterError(f"n must be non-negative, got {n!r}")
    geometry = Geometry(side_a, boundary, metric)
    rng = make_rng(seed)
    return PointCloud(_uniform_square(rng, int(n), side_a), geometry)


def sample_poisson(lam: float, side_a: float, boundary: str = PLANE,
                   metric: str = EUCLIDEAN, seed: Seed = 0) -> PointCloud:
    """Homogeneous Poisson process of intensity ``lam`` (points per unit area)."""
    if not lam >= 0:
        raise ParameterError(f"lambda must be non-negative, got {lam!r}")
    geometry = Geometry(side_a, boundary, metric)
    rng = make_rng(seed)
    count = int(rng.poisson(lam * side_a * side_a))
    return PointCloud(_uniform_square(rng, count, side_a), geometry)
