"""Coverage hole-free communication trees over random wireless networks."""

from .coverage import CoverageEstimate, coverage_loss, covered_area
from .geometry import (Geometry, ParameterError, PointCloud, distance, sample_binomial,
                       sample_poisson)
from .homology import (BettiProfile, BoundaryMatrix, betti, boundary_matrix,
                       connected_components, rank_gf2)
from .render import render_svg
from .rips import (CliqueCapError, RipsComplex, build_rips, count_simplices_full, edge_height,
                   edge_heights, restrict)
from .spanning import (Forest, Tree, WeightMetric, branch_stats, build_forest, build_tree,
                       edge_weights, forest_violations, tree_violations)
from .theory import (ChiParams, chi_2d_stationary_lambdas, empirical_chi, expected_chi_2d,
                     expected_chi_series)

__version__ = "0.1.0"
