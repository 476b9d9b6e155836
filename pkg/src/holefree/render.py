"""Static SVG snapshots of a network, its Rips complex and its tree(s)."""

from __future__ import annotations

import numpy as np

from .geometry import PointCloud, TORUS
from .rips import RipsComplex
from .spanning import Forest, Tree

PALETTE = ("#d62728", "#1f77b4", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b",
           "#e377c2", "#17becf", "#bcbd22", "#7f7f7f")
TREE_COLOR = "#d62728"
OUTSIDE_COLOR = "#1f77b4"


def _images(cloud: PointCloud, vertices) -> np.ndarray:
    """Coordinates of ``vertices`` with later ones moved next to the first.

    On the torus each vertex is shifted by a multiple of the side so the
    drawn simplex is the short one, not the one spanning the seam.
    """
    pts = cloud.points[list(vertices)].copy()
    if cloud.boundary == TORUS:
        a = cloud.side_a
        delta = pts[1:] - pts[0]
        pts[1:] -= a * np.round(delta / a)
    return pts


def render_svg(cloud: PointCloud, cx: RipsComplex | None = None,
               tree: Tree | Forest | None = None, size: int = 600,
               margin: int = 20, vertex_radius: float = 3.0) -> str:
    """Draw shaded triangles, edges and vertices; highlight tree(s).

    A :class:`Tree` is drawn in red with non-tree vertices in blue. A
    :class:`Forest` gets one colour per tree and a ring around each root.
    """
    a = cloud.side_a
    scale = (size - 2 * margin) / a

    def xy(p) -> str:
        # y axis points up in the domain, down in SVG
        return f"{margin + p[0] * scale:.3f},{size - margin - p[1] * scale:.3f}"

    color: dict[int, str] = {}
    tree_edges: set = set()
    roots = []
    if isinstance(tree, Forest):
        for t, tr in enumerate(tree.trees):
            c = PALETTE[t % len(PALETTE)]
            color.update((v, c) for v in tr.order)
            tree_edges |= {tuple(sorted(e)) for e in tr.tree_edges}
            roots.append((tr.root, c))
    elif isinstance(tree, Tree):
        color.update((v, TREE_COLOR) for v in tree.order)
        tree_edges = {tuple(sorted(e)) for e in tree.tree_edges}

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" '
        f'viewBox="0 0 {size} {size}">',
        f'<rect class="domain" x="{margin}" y="{margin}" width="{size - 2 * margin}" '
        f'height="{size - 2 * margin}" fill="white" stroke="black"/>',
        f'<clipPath id="domain-clip"><rect x="{margin}" y="{margin}" '
        f'width="{size - 2 * margin}" height="{size - 2 * margin}"/></clipPath>',
        '<g clip-path="url(#domain-clip)">',
    ]
    if cx is not None:
        for tri in cx.triangles:
            pts = " ".join(xy(p) for p in _images(cloud, tri))
            out.append(f'<polygon class="simplex" points="{pts}" fill="#cccccc" fill-opacity="0.6"/>')
        for e in cx.edges:
            p, q = _images(cloud, e)
            (x1, y1), (x2, y2) = (xy(p).split(","), xy(q).split(","))
            if e in tree_edges:
                c = color.get(e[0], TREE_COLOR)
                style = f'class="edge tree" stroke="{c}" stroke-width="2.5"'
            else:
                style = 'class="edge" stroke="#888888" stroke-width="1"'
            out.append(f'<line {style} x1="{x1}" y1="{y1}" x2="{x2}" y2="{y2}"/>')
    out.append("</g>")
    for v, p in enumerate(cloud.points):
        x, y = xy(p).split(",")
        if tree is None:
            fill, cls = "black", "vertex"
        elif v in color:
            fill, cls = color[v], "vertex in-tree"
        else:
            fill, cls = OUTSIDE_COLOR, "vertex outside"
        out.append(f'<circle class="{cls}" cx="{x}" cy="{y}" r="{vertex_radius}" fill="{fill}"/>')
    for v, c in roots:
        x, y = xy(cloud.points[v]).split(",")
        out.append(f'<circle class="root" cx="{x}" cy="{y}" r="{3 * vertex_radius}" '
                   f'fill="none" stroke="{c}" stroke-width="1.5"/>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
