"""
Three ways to weight a link
===========================

Shortest links, longest links, or links buried in the largest cliques. The
clique-height weight gives the shallowest trees with the shortest branches.
"""

import numpy as np

from holefree import build_rips, build_tree, branch_stats, edge_weights, sample_binomial

metrics = ("min_distance", "max_distance", "max_height")
stats = {m: [] for m in metrics}

for seed in range(100):
    cloud = sample_binomial(75, 10.0, seed=seed)
    cx = build_rips(cloud, 2.5)
    for m in metrics:
        # same root for every metric, so only the weighting differs
        tree = build_tree(cloud, 2.5, m, seed=(seed, 1), cx=cx, weights=edge_weights(cx, cloud, m))
        stats[m].append(branch_stats(tree, cloud))

print(f"{'metric':<14}{'mean hops':>10}{'mean length':>13}")
for m in metrics:
    s = np.array(stats[m])
    print(f"{m:<14}{s[:, 0].mean():>10.2f}{s[:, 2].mean():>13.2f}")
