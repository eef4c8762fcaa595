"""Multi-view clustering from anchor-graph transition probabilities."""

from .graph import build_graphs, knn_simplex_graph, minmax_normalize, pairwise_sqdist, select_anchors
from .metrics import acc, evaluate, nmi, purity
from .solver import ClusteringResult, ProblemConfig, run
from .tensor_core import schatten_p_norm, schatten_prox

__version__ = "0.1.0"
