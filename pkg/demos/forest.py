"""
Forests with a hop budget
=========================

Cap every branch at three hops and keep planting trees until all nodes are
served. Root vertices get a ring in ``forest.svg``.
"""

from pathlib import Path

from holefree import build_forest, build_rips, forest_violations, render_svg, sample_binomial

cloud = sample_binomial(100, 10.0, seed=7)
cx = build_rips(cloud, 2.5)
forest = build_forest(cloud, 2.5, hop_limit=3, seed=7, cx=cx)

for k, tree in enumerate(forest.trees):
    print(f"tree {k}: root {tree.root:3d}, {len(tree):3d} nodes, depth {max(tree.depth.values())}")

# every tree is hole-free, shallow enough, and the trees do not overlap
assert forest_violations(forest, cx) == []

out = Path(__file__).with_name("forest.svg")
out.write_text(render_svg(cloud, cx, forest))
print("wrote", out)
