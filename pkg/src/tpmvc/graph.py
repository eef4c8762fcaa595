"""Anchor selection and sample-to-anchor transition graphs."""

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp
from sklearn.cluster import KMeans

from .errors import DimMismatch, InvalidK, InvalidM

DEGENERATE_DENOM = 1e-12


@dataclass
class AnchorSet:
    """Anchors shared across views; ``coords[v]`` is the ``m x d_v`` block of view ``v``."""

    coords: list
    source: str = "kmeans"

    @property
    def m(self):
        return self.coords[0].shape[0]


def minmax_normalize(x):
    """Scale every feature of ``x`` into ``[0, 1]``; constant features become 0."""
    x = np.asarray(x, dtype=float)
    lo = x.min(axis=0)
    span = x.max(axis=0) - lo
    span[span == 0] = 1.0
    return (x - lo) / span


def pairwise_sqdist(x, a):
    """Squared Euclidean distances between rows of ``x`` (n x d) and ``a`` (m x d)."""
    x = np.asarray(x, dtype=float)
    a = np.asarray(a, dtype=float)
    if x.ndim != 2 or a.ndim != 2 or x.shape[1] != a.shape[1]:
        raise DimMismatch(f"feature dimensions differ: {x.shape} vs {a.shape}")
    d = (x * x).sum(1)[:, None] + (a * a).sum(1)[None, :] - 2.0 * x @ a.T
    # the expansion loses exact zeros to cancellation
    np.maximum(d, 0.0, out=d)
    return d


def default_anchor_count(n, c, rate=0.1, cap=1024):
    return int(min(max(c, int(np.ceil(rate * n))), cap, n))


def select_anchors(views, m, seed=0, max_iter=50):
    """k-means anchors on the concatenated features of all views.

    Seeded k-means++ start, one initialisation, at most ``max_iter`` Lloyd
    steps. The returned per-view coordinates are the matching column blocks
    of the joint centroids, so anchor ``j`` is the same point in every view.
    """
    views = [np.asarray(v, dtype=float) for v in views]
    n = views[0].shape[0]
    if not 1 <= m <= n:
        raise InvalidM(f"anchor count must lie in [1, {n}], got {m}")
    joint = np.hstack(views)
    km = KMeans(n_clusters=m, init="k-means++", n_init=1, max_iter=max_iter, random_state=seed)
    km.fit(joint)
    centers = km.cluster_centers_
    splits = np.cumsum([v.shape[1] for v in views])[:-1]
    return AnchorSet(coords=np.split(centers, splits, axis=1), source="kmeans")


def knn_simplex_graph(dist, k):
    """Row-stochastic k-nearest-anchor graph with closed-form simplex weights.

    Row ``i`` puts weight ``(d_(k+1) - d_ij) / (k d_(k+1) - sum_{l<=k} d_(l))``
    on its ``k`` nearest anchors, which is the minimizer of
    ``sum_j d_ij s_ij + theta s_ij^2`` over the simplex for the ``theta``
    that leaves exactly ``k`` anchors active. Rows whose ``k + 1`` nearest
    anchors are equidistant fall back to uniform ``1/k`` weights.

    Returns an ``n x m`` CSR matrix.
    """
    dist = np.asarray(dist, dtype=float)
    n, m = dist.shape
    if not 1 <= k < m:
        raise InvalidK(f"neighbour count must satisfy 1 <= k < m={m}, got {k}")
    # stable sort keeps the lowest anchor index first among ties
    order = np.argsort(dist, axis=1, kind="stable")[:, : k + 1]
    dsorted = np.take_along_axis(dist, order, axis=1)
    dk1 = dsorted[:, k : k + 1]
    near = dsorted[:, :k]
    denom = k * dk1[:, 0] - near.sum(axis=1)
    w = np.empty((n, k))
    ok = denom > DEGENERATE_DENOM
    w[ok] = (dk1[ok] - near[ok]) / denom[ok, None]
    w[~ok] = 1.0 / k
    rows = np.repeat(np.arange(n), k)
    s = sp.csr_matrix((w.ravel(), (rows, order[:, :k].ravel())), shape=(n, m))
    s.eliminate_zeros()
    return s


def build_graphs(views, anchors, k=5):
    return [knn_simplex_graph(pairwise_sqdist(x, a), k) for x, a in zip(views, anchors.coords)]
