"""Plain-text formats for point clouds, trees and forests.

Point cloud::

    # side_a=10.0 boundary=plane metric=euclidean
    1.25,3.5
    ...

Tree or forest (vertices listed tree by tree, in the order they joined)::

    # hop_limit=3
    index,parent,tree_id,depth
    4,-,0,0
    7,4,0,1
    [rejected]
    2
    [unreachable]
    9

``hop_limit`` appears only for forests; ``[unreachable]`` only for trees.
"""

from __future__ import annotations

from .geometry import Geometry, ParameterError, PointCloud
from .spanning import Forest, Tree

TREE_HEADER = "index,parent,tree_id,depth"


def format_cloud(cloud: PointCloud) -> str:
    g = cloud.geometry
    lines = [f"# side_a={g.side_a!r} boundary={g.boundary} metric={g.metric}"]
    lines += [f"{x!r},{y!r}" for x, y in cloud.points.tolist()]
    return "\n".join(lines) + "\n"


def parse_cloud(text: str) -> PointCloud:
    lines = text.splitlines()
    if not lines or not lines[0].startswith("#"):
        raise ParameterError("point-cloud file must start with a '# side_a=...' header")
    meta = dict(tok.split("=", 1) for tok in lines[0][1:].split())
    try:
        geometry = Geometry(float(meta["side_a"]), meta.get("boundary", "plane"),
                            meta.get("metric", "euclidean"))
    except KeyError:
        raise ParameterError("point-cloud header lacks side_a") from None
    pts = []
    for line in lines[1:]:
        line = line.strip()
        if line and not line.startswith("#"):
            x, y = line.split(",")
            pts.append((float(x), float(y)))
    return PointCloud(pts, geometry)


def save_cloud(cloud: PointCloud, path: str):
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(format_cloud(cloud))


def load_cloud(path: str) -> PointCloud:
    with open(path, encoding="utf-8") as fh:
        return parse_cloud(fh.read())


def _tree_lines(tree: Tree, tree_id: int) -> list[str]:
    return [f"{v},{tree.parent[v] if v in tree.parent else '-'},{tree_id},{tree.depth[v]}"
            for v in tree.order]


def format_tree(tree: Tree) -> str:
    lines = [TREE_HEADER] + _tree_lines(tree, 0)
    lines += ["[rejected]"] + [str(v) for v in sorted(tree.rejected)]
    lines += ["[unreachable]"] + [str(v) for v in sorted(tree.unreachable)]
    return "\n".join(lines) + "\n"


def format_forest(forest: Forest) -> str:
    lines = [f"# hop_limit={forest.hop_limit}", TREE_HEADER]
    for t, tree in enumerate(forest.trees):
        lines += _tree_lines(tree, t)
    lines += ["[rejected]"] + [str(v) for v in sorted(forest.rejected)]
    return "\n".join(lines) + "\n"


def _parse(text: str):
    hop_limit = None
    rows = []
    sections: dict[str, list[int]] = {}
    current = None
    for line in text.splitlines():
        line = line.strip()
        if not line:
            continue
        if line.startswith("#"):
            if line[1:].strip().startswith("hop_limit="):
                hop_limit = int(line.split("=", 1)[1])
            continue
        if line == TREE_HEADER:
            continue
        if line.startswith("[") and line.endswith("]"):
            current = line[1:-1]
            sections[current] = []
        elif current is not None:
            sections[current].append(int(line))
        else:
            v, p, t, d = line.split(",")
            rows.append((int(v), None if p == "-" else int(p), int(t), int(d)))
    return hop_limit, rows, sections


def _build_trees(rows, rejected=frozenset(), unreachable=frozenset()) -> list[Tree]:
    by_tree: dict[int, list] = {}
    for row in rows:
        by_tree.setdefault(row[2], []).append(row)
    trees = []
    for t in sorted(by_tree):
        members = by_tree[t]
        roots = [v for v, p, _, _ in members if p is None]
        if len(roots) != 1:
            raise ParameterError(f"tree {t} has {len(roots)} roots")
        parent = {v: p for v, p, _, _ in members if p is not None}
        trees.append(Tree(root=roots[0], parent=parent,
                          tree_edges=tuple((p, v) for v, p, _, _ in members if p is not None),
                          rejected=frozenset(rejected), unreachable=frozenset(unreachable),
                          depth={v: d for v, _, _, d in members},
                          order=tuple(v for v, _, _, _ in members)))
    return trees


def parse_tree(text: str) -> Tree:
    _, rows, sections = _parse(text)
    (tree,) = _build_trees(rows, sections.get("rejected", ()), sections.get("unreachable", ()))
    return tree


def parse_forest(text: str) -> Forest:
    hop_limit, rows, sections = _parse(text)
    trees = _build_trees(rows)
    if hop_limit is None:
        hop_limit = max((max(t.depth.values()) for t in trees), default=0) or 1
    return Forest(tuple(trees), hop_limit, frozenset(sections.get("rejected", ())))


def save_text(text: str, path: str):
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


def load_text(path: str) -> str:
    with open(path, encoding="utf-8") as fh:
        return fh.read()
