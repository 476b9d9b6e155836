"""Coverage hole-free spanning trees and hop-limited forests.

The tree grows like Prim's algorithm: at each step the extremal-weight edge
leaving the tree is examined, and its outside endpoint ``x`` joins only if
the Rips complex on ``T + {x}`` has no 1-cycle (beta1 == 0). Otherwise the
edge alone is dropped; ``x`` may still join later through another edge.

Two interchangeable hole tests are available:

``"full"``
    recompute beta1 of ``Rips(T + {x})`` from its boundary matrices.
``"link"``
    count the connected components of the graph induced on the tree
    neighbours of ``x``. While ``T`` is connected with beta1 == 0, gluing the
    cone over that graph yields ``beta1 = components - 1`` (Mayer-Vietoris),
    so both tests return the same number. This is the default.
"""

from __future__ import annotations

import heapq
from collections import deque
from dataclasses import dataclass, field
from enum import Enum
from typing import NamedTuple

import numpy as np

from .geometry import ParameterError, PointCloud, Seed, make_rng
from .homology import DisjointSet, betti
from .rips import RipsComplex, build_rips, edge_heights, restrict

HOLE_TESTS = ("link", "full")


class WeightMetric(str, Enum):
    MIN_DISTANCE = "min_distance"
    MAX_DISTANCE = "max_distance"
    MAX_HEIGHT = "max_height"

    @property
    def maximize(self) -> bool:
        return self is not WeightMetric.MIN_DISTANCE


@dataclass(frozen=True)
class Tree:
    root: int
    parent: dict
    tree_edges: tuple
    rejected: frozenset
    unreachable: frozenset
    depth: dict = field(repr=False)
    order: tuple = field(repr=False)

    @property
    def vertices(self) -> frozenset:
        return frozenset(self.order)

    def __len__(self) -> int:
        return len(self.order)


@dataclass(frozen=True)
class Forest:
    trees: tuple
    hop_limit: int
    rejected: frozenset

    def tree_of(self) -> dict:
        """Map vertex -> index of the tree holding it."""
        return {v: t for t, tree in enumerate(self.trees) for v in tree.order}


class Step(NamedTuple):
    """One examined candidate edge, as recorded in a trace."""

    inside: int
    outside: int
    tree_size: int
    beta1: int
    accepted: bool


class BranchStats(NamedTuple):
    mean_hops: float
    max_hops: float
    mean_length: float
    max_length: float


def edge_weights(cx: RipsComplex, cloud: PointCloud, metric) -> dict:
    metric = WeightMetric(metric)
    if metric is WeightMetric.MAX_HEIGHT:
        return {e: float(h) for e, h in edge_heights(cx).items()}
    dm = cloud.distance_matrix()
    return {(i, j): float(dm[i, j]) for i, j in cx.edges}


def _link_beta1(x: int, in_tree: set, nbrs) -> int:
    link = [u for u in nbrs[x] if u in in_tree]
    ds = DisjointSet(len(link))
    for a in range(len(link)):
        nb = nbrs[link[a]]
        for b in range(a + 1, len(link)):
            if link[b] in nb:
                ds.union(a, b)
    return ds.count - 1


def _component(root: int, nbrs, allowed: set) -> set:
    seen = {root}
    queue = deque([root])
    while queue:
        u = queue.popleft()
        for v in nbrs[u]:
            if v in allowed and v not in seen:
                seen.add(v)
                queue.append(v)
    return seen


def _grow(cx: RipsComplex, weights: dict, maximize: bool, root: int,
          allowed: set, hop_limit: int | None = None, check: str = "link",
          trace: list | None = None) -> Tree:
    if check not in HOLE_TESTS:
        raise ParameterError(f"check must be one of {HOLE_TESTS}, got {check!r}")
    nbrs = cx.neighbors
    sign = -1.0 if maximize else 1.0
    in_tree = {root}
    order = [root]
    parent: dict[int, int] = {}
    depth = {root: 0}
    edges = []
    heap: list = []
    verdicts: dict[int, tuple[int, int]] = {}

    def push(t: int):
        if hop_limit is not None and depth[t] + 1 > hop_limit:
            return
        for x in nbrs[t]:
            if x in allowed and x not in in_tree:
                w = weights[(t, x) if t < x else (x, t)]
                heapq.heappush(heap, (sign * w, t, x))

    push(root)
    while len(in_tree) < len(allowed) and heap:
        _, t, x = heapq.heappop(heap)
        if x in in_tree:
            # both ends in T: the edge left the candidate set when x joined
            continue
        cached = verdicts.get(x)
        if cached is not None and cached[0] == len(in_tree):
            b1 = cached[1]
        elif check == "link":
            b1 = _link_beta1(x, in_tree, nbrs)
        else:
            b1 = betti(restrict(cx, in_tree | {x})).beta1
        verdicts[x] = (len(in_tree), b1)
        if trace is not None:
            trace.append(Step(t, x, len(in_tree), b1, b1 == 0))
        if b1 != 0:
            continue
        in_tree.add(x)
        order.append(x)
        parent[x] = t
        depth[x] = depth[t] + 1
        edges.append((t, x))
        push(x)

    comp = _component(root, nbrs, allowed)
    return Tree(root=root, parent=parent, tree_edges=tuple(edges),
                rejected=frozenset(comp - in_tree),
                unreachable=frozenset(allowed - comp),
                depth=depth, order=tuple(order))


def build_tree(cloud: PointCloud, r: float, metric="min_distance", root="random",
               seed: Seed = 0, check: str = "link", cx: RipsComplex | None = None,
               weights: dict | None = None, trace: list | None = None) -> Tree:
    """Grow a coverage hole-free tree over the whole cloud.

    ``root`` is a vertex index or ``"random"`` (uniform, drawn from ``seed``).
    A prebuilt complex and weight map may be passed to share them between
    runs on the same cloud. When ``trace`` is a list, every examined edge is
    appended to it as a :class:`Step`.
    """
    n = len(cloud)
    if n == 0:
        raise ParameterError("cannot build a tree on an empty cloud")
    metric = WeightMetric(metric)
    if isinstance(root, str):
        if root != "random":
            raise ParameterError(f"root must be an index or 'random', got {root!r}")
        root = int(make_rng(seed).integers(n))
    elif not 0 <= root < n:
        raise ParameterError(f"root {root} out of range for {n} vertices")
    if cx is None:
        cx = build_rips(cloud, r)
    if weights is None:
        weights = edge_weights(cx, cloud, metric)
    return _grow(cx, weights, metric.maximize, int(root), set(range(n)),
                 check=check, trace=trace)


def build_forest(cloud: PointCloud, r: float, metric="min_distance", hop_limit: int = 3,
                 seed: Seed = 0, allow_rejected_roots: bool = True, check: str = "link",
                 cx: RipsComplex | None = None, weights: dict | None = None) -> Forest:
    """Cover the cloud with hole-free trees of depth at most ``hop_limit``.

    Roots are drawn uniformly among unassigned vertices until none is left.
    Each tree grows only over vertices no earlier tree took, and an edge
    whose outside end would sit deeper than ``hop_limit`` is discarded.
    With ``allow_rejected_roots=False`` a vertex that some earlier tree
    refused cannot found a new tree; leftovers end up in ``Forest.rejected``.
    """
    if hop_limit < 1:
        raise ParameterError(f"hop_limit must be >= 1, got {hop_limit!r}")
    n = len(cloud)
    metric = WeightMetric(metric)
    if cx is None:
        cx = build_rips(cloud, r)
    if weights is None:
        weights = edge_weights(cx, cloud, metric)
    rng = make_rng(seed)
    unassigned = set(range(n))
    refused: set[int] = set()
    trees = []
    while True:
        eligible = sorted(unassigned if allow_rejected_roots else unassigned - refused)
        if not eligible:
            break
        root = eligible[int(rng.integers(len(eligible)))]
        trace: list = []
        tree = _grow(cx, weights, metric.maximize, root, set(unassigned),
                     hop_limit=hop_limit, check=check, trace=trace)
        trees.append(tree)
        unassigned -= tree.vertices
        refused |= {s.outside for s in trace if not s.accepted} - tree.vertices
    return Forest(trees=tuple(trees), hop_limit=hop_limit, rejected=frozenset(unassigned))


def branch_stats(tree: Tree, cloud: PointCloud) -> BranchStats:
    """Hop count and geometric length of every root-to-leaf branch."""
    if len(tree) <= 1:
        return BranchStats(0.0, 0.0, 0.0, 0.0)
    dm = cloud.distance_matrix()
    has_child = set(tree.parent.values())
    length = {tree.root: 0.0}
    for v in tree.order[1:]:
        p = tree.parent[v]
        length[v] = length[p] + float(dm[p, v])
    leaves = [v for v in tree.order[1:] if v not in has_child]
    hops = np.array([tree.depth[v] for v in leaves], dtype=float)
    lengths = np.array([length[v] for v in leaves])
    return BranchStats(float(hops.mean()), float(hops.max()),
                       float(lengths.mean()), float(lengths.max()))


def tree_violations(tree: Tree, cx: RipsComplex, vertex_count: int | None = None) -> list[str]:
    """Independent post-hoc audit of a tree; returns a list of problems.

    Checks the edge-count identity, connectivity (hence acyclicity), that
    every tree edge is a complex edge, and recomputes beta1 of the Rips
    complex on the tree vertices from scratch. With ``vertex_count`` the
    tree/rejected/unreachable partition is checked too.
    """
    problems = []
    verts = set(tree.order)
    if len(verts) != len(tree.order):
        problems.append("duplicate tree vertices")
    if len(tree.tree_edges) != len(verts) - 1:
        problems.append(f"{len(tree.tree_edges)} edges for {len(verts)} vertices")
    complex_edges = set(cx.edges)
    ds = DisjointSet(cx.vertex_count)
    for a, b in tree.tree_edges:
        if (min(a, b), max(a, b)) not in complex_edges:
            problems.append(f"edge {(a, b)} not in the complex")
        if a not in verts or b not in verts:
            problems.append(f"edge {(a, b)} leaves the tree")
        elif not ds.union(a, b):
            problems.append(f"edge {(a, b)} closes a cycle")
    if len({ds.find(v) for v in verts}) != 1:
        problems.append("tree edges do not connect the tree vertices")
    b1 = betti(restrict(cx, verts)).beta1
    if b1 != 0:
        problems.append(f"beta1 of the tree vertex set is {b1}")
    if vertex_count is not None:
        parts = [verts, set(tree.rejected), set(tree.unreachable)]
        if sum(map(len, parts)) != vertex_count or set().union(*parts) != set(range(vertex_count)):
            problems.append("tree/rejected/unreachable do not partition the vertices")
    return problems


def forest_violations(forest: Forest, cx: RipsComplex) -> list[str]:
    problems = []
    seen: set[int] = set()
    for t, tree in enumerate(forest.trees):
        for p in tree_violations(tree, cx):
            problems.append(f"tree {t}: {p}")
        if seen & tree.vertices:
            problems.append(f"tree {t} overlaps an earlier tree")
        seen |= tree.vertices
        deepest = max(tree.depth.values())
        if deepest > forest.hop_limit:
            problems.append(f"tree {t} reaches depth {deepest}")
    if seen & forest.rejected or len(seen) + len(forest.rejected) != cx.vertex_count:
        problems.append("trees and rejected do not partition the vertices")
    return problems


def replay_violations(tree: Tree, trace: list, cx: RipsComplex) -> list[str]:
    """Re-check every recorded verdict with a full beta1 computation.

    The tree set at a step is the first ``tree_size`` vertices of
    ``tree.order`` because the tree only grows.
    """
    problems = []
    for k, step in enumerate(trace):
        before = tree.order[:step.tree_size]
        b1 = betti(restrict(cx, set(before) | {step.outside})).beta1
        if b1 != step.beta1:
            problems.append(f"step {k}: recorded beta1 {step.beta1}, recomputed {b1}")
        if step.outside in before:
            problems.append(f"step {k}: candidate edge with both ends in the tree")
        if step.accepted and tree.parent.get(step.outside) != step.inside:
            problems.append(f"step {k}: accepted edge missing from the tree")
    return problems
