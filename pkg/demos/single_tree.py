"""
A single hole-free tree
=======================

Drop 75 nodes on a 10 x 10 square, link every pair closer than 2.5, and grow
one communication tree that never encloses a coverage hole. The picture is
written to ``single_tree.svg`` next to this script.
"""

from pathlib import Path

from holefree import betti, build_rips, build_tree, render_svg, restrict, sample_binomial

cloud = sample_binomial(75, 10.0, seed=10)
cx = build_rips(cloud, 2.5)
print("full network  beta0, beta1 =", tuple(betti(cx)))

# grow from vertex 0, preferring short links
tree = build_tree(cloud, 2.5, "min_distance", root=0, cx=cx)
print(f"tree keeps {len(tree)} nodes, rejects {len(tree.rejected)}, "
      f"cannot reach {len(tree.unreachable)}")

# the tree's own sub-network has no hole
print("tree network  beta0, beta1 =", tuple(betti(restrict(cx, tree.vertices))))

out = Path(__file__).with_name("single_tree.svg")
out.write_text(render_svg(cloud, cx, tree))
print("wrote", out)
