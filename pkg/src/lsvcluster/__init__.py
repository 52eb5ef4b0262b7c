"""Cluster detection in Markov chains from singular vectors of the Laplacian ``I - T``."""

from .cluster import ClusterNode, ClusterResult, lsv_cluster, permute_to_blocks, sign_split
from .coupling import (CouplingMatrix, coupling_matrix, coupling_with_singletons, diag_stats,
                       perron_values, score_clustering, stationary_distribution, weight_vector)
from .ensembles import EnsembleSpec, GroundTruth, generate, trial_seed
from .evaluation import bench, count_errors, evaluate, fully_recovered
from .matrix import (MatrixError, as_stochastic, bipartite_embed, dnf, laplacian,
                     principal_submatrix, row_normalize)
from .svd import NoMixedSignVector, full_svd, second_smallest_pair, spectral_radius

__version__ = "0.1.0"
