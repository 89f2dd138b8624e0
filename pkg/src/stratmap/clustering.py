"""
Association-strength normalization and resolution-based clustering.

The quality of a partition is

    V = sum over same-cluster pairs i < j of (s_ij - resolution)

where ``s_ij = 2m w_ij / (k_i k_j)`` on edges and zero elsewhere.  It is
maximized by seeded restarts of local moving plus aggregation.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp
from sklearn.base import BaseEstimator, ClusterMixin

from . import _kernels
from ._validation import check_graph, check_positive_int, check_positive_real, check_seed

__all__ = [
    "ClusterParams",
    "NormalizedGraph",
    "Clustering",
    "association_strength",
    "quality",
    "canonical_numbering",
    "cluster",
    "merge_small_clusters",
    "brute_force_optimum",
    "VOSClustering",
]

BRUTE_FORCE_LIMIT = 12


@dataclass(frozen=True)
class ClusterParams:
    resolution: float = 1.0
    seed: int = 0
    restarts: int = 10
    iterations_per_restart: int = 10
    min_cluster_size: int = 2
    merge_small: bool = True

    def __post_init__(self):
        check_positive_real(self.resolution, "resolution")
        check_seed(self.seed)
        check_positive_int(self.restarts, "restarts")
        check_positive_int(self.iterations_per_restart, "iterations_per_restart")
        check_positive_int(self.min_cluster_size, "min_cluster_size")


@dataclass(frozen=True, eq=False)
class NormalizedGraph:
    base: object
    assoc: sp.csr_matrix

    @property
    def n_nodes(self):
        return self.base.n_nodes

    @property
    def labels(self):
        return self.base.labels


@dataclass(frozen=True, eq=False)
class Clustering:
    """Node-to-cluster assignment, clusters numbered ``1..K`` by decreasing size."""

    assignment: np.ndarray
    quality: float = field(default=float("nan"))

    @property
    def n_clusters(self):
        return int(self.assignment.max()) if len(self.assignment) else 0

    def sizes(self):
        return np.bincount(self.assignment)[1:]

    def members(self, c):
        return np.flatnonzero(self.assignment == c)

    def __eq__(self, other):
        if not isinstance(other, Clustering):
            return NotImplemented
        return np.array_equal(self.assignment, other.assignment)


def association_strength(g, allow_isolates=False):
    """Normalize edge weights to ``s_ij = 2m w_ij / (k_i k_j)``.

    Parameters
    ----------
    g : SymGraph
    allow_isolates : bool
        Isolated nodes are an error by default; when allowed they simply
        have no association entries.
    """
    if g.n_nodes and not allow_isolates:
        isolated = np.flatnonzero(g.node_strength == 0)
        if len(isolated):
            raise ValueError(
                f"node {g.labels[isolated[0]]!r} is isolated; remove isolates first"
            )
    two_m = g.total_strength_2m
    adj = g.adjacency.tocoo()
    if adj.nnz:
        k = g.node_strength
        data = two_m * adj.data / (k[adj.row] * k[adj.col])
    else:
        data = adj.data
    s = sp.csr_matrix((data, (adj.row, adj.col)), shape=adj.shape)
    s.sort_indices()
    return NormalizedGraph(g, s)


def _as_assignment(c):
    return c.assignment if isinstance(c, Clustering) else np.asarray(c)


def quality(ng, c, resolution=1.0):
    """``V = sum_{i<j, same cluster} (s_ij - resolution)``."""
    a = _as_assignment(c)
    coo = ng.assoc.tocoo()
    mask = (coo.row < coo.col) & (a[coo.row] == a[coo.col])
    sizes = np.unique(a, return_counts=True)[1].astype(float)
    return float(coo.data[mask].sum() - resolution * (sizes * (sizes - 1) / 2).sum())


def canonical_numbering(assignment):
    """Renumber clusters ``1..K`` by decreasing size.

    Equal sizes are ordered by the smallest node index they contain.
    """
    assignment = np.asarray(assignment)
    if len(assignment) == 0:
        return assignment.astype(np.int64)
    _, inv = np.unique(assignment, return_inverse=True)
    sizes = np.bincount(inv)
    first = np.full(len(sizes), len(assignment))
    np.minimum.at(first, inv, np.arange(len(assignment)))
    order = np.lexsort((first, -sizes))
    rank = np.empty_like(order)
    rank[order] = np.arange(len(order))
    return (rank[inv] + 1).astype(np.int64)


def _csr_arrays(m):
    return m.indptr.astype(np.int64), m.indices.astype(np.int64), m.data.astype(np.float64)


def _louvain(s, node_size, clusters, rng, resolution):
    n = len(node_size)
    if n <= 1:
        return clusters
    indptr, indices, data = _csr_arrays(s)
    _kernels.local_moving(indptr, indices, data, node_size, clusters, rng.permutation(n), resolution)
    _, clusters = np.unique(clusters, return_inverse=True)
    k = int(clusters.max()) + 1
    if k == n:
        return clusters
    p = sp.csr_matrix((np.ones(n), (np.arange(n), clusters)), shape=(n, k))
    reduced = (p.T @ s @ p).tocsr()
    reduced.sort_indices()
    sizes = np.bincount(clusters, weights=node_size)
    sub = _louvain(reduced, sizes, np.arange(k, dtype=np.int64), rng, resolution)
    return sub[clusters]


def _optimize(ng, resolution, iterations, rng):
    n = ng.n_nodes
    s = ng.assoc
    node_size = np.ones(n)
    clusters = np.arange(n, dtype=np.int64)
    best_q = quality(ng, clusters, resolution)
    for _ in range(iterations):
        trial = _louvain(s, node_size, clusters.copy(), rng, resolution).astype(np.int64)
        q = quality(ng, trial, resolution)
        if q <= best_q:
            break
        clusters, best_q = trial, q
    return clusters, best_q


def cluster(ng, params=ClusterParams()):
    """Best partition over ``params.restarts`` seeded optimizations.

    Restart ``r`` draws from a PCG64 stream seeded with ``seed + r``; the
    highest-quality result wins, earlier restarts winning ties.
    """
    if ng.n_nodes == 0:
        raise ValueError("cannot cluster an empty graph")
    best, best_q = None, -np.inf
    for r in range(params.restarts):
        rng = np.random.Generator(np.random.PCG64(params.seed + r))
        labels, q = _optimize(ng, params.resolution, params.iterations_per_restart, rng)
        if q > best_q:
            best, best_q = labels, q
    result = Clustering(canonical_numbering(best), best_q)
    if params.merge_small:
        result = merge_small_clusters(ng, result, params.min_cluster_size, params.resolution)
    return result


def merge_small_clusters(ng, c, min_size, resolution=1.0):
    """Fold clusters smaller than ``min_size`` into their strongest neighbour.

    The smallest offending cluster goes first (lowest id on ties) and joins
    the cluster with the highest total association strength to it (lowest
    id on ties), or the largest cluster if it has no links at all.
    """
    a = canonical_numbering(_as_assignment(c))
    s = ng.assoc
    while len(a):
        sizes = np.bincount(a)[1:]
        k = len(sizes)
        small = np.flatnonzero(sizes < min_size)
        if k == 1 or len(small) == 0:
            break
        victim = int(small[np.argmin(sizes[small])]) + 1
        members = np.flatnonzero(a == victim)
        rows = s[members].tocoo()
        strength = np.bincount(a[rows.col], weights=rows.data, minlength=k + 1)
        strength[victim] = 0.0
        if strength.max() > 0:
            target = int(np.argmax(strength))
        else:
            others = [x for x in range(1, k + 1) if x != victim]
            target = min(others, key=lambda x: (-sizes[x - 1], x))
        a = a.copy()
        a[members] = target
        a = canonical_numbering(a)
    return Clustering(a, quality(ng, a, resolution))


def brute_force_optimum(ng, resolution=1.0):
    """Exhaustive maximization of V over every set partition (test oracle).

    Partitions are enumerated as restricted growth strings; the first one
    reaching the maximum is returned.  Refuses graphs above 12 nodes.
    """
    n = ng.n_nodes
    if n > BRUTE_FORCE_LIMIT:
        raise ValueError(f"brute force is limited to {BRUTE_FORCE_LIMIT} nodes, got {n}")
    if n == 0:
        raise ValueError("empty graph")
    gain = ng.assoc.toarray().tolist()
    blocks = []
    labels = [0] * n
    best = [-float("inf"), None]

    def extend(i, value):
        if i == n:
            if value > best[0]:
                best[0] = value
                best[1] = list(labels)
            return
        for b, block in enumerate(blocks):
            delta = sum(gain[i][j] - resolution for j in block)
            block.append(i)
            labels[i] = b
            extend(i + 1, value + delta)
            block.pop()
        blocks.append([i])
        labels[i] = len(blocks) - 1
        extend(i + 1, value)
        blocks.pop()

    extend(0, 0.0)
    assignment = canonical_numbering(best[1])
    return Clustering(assignment, best[0]), best[0]


class VOSClustering(ClusterMixin, BaseEstimator):
    """Association-strength clustering with a resolution parameter.

    Parameters
    ----------
    resolution : float, default=1.0
        Penalty per same-cluster pair; larger values give smaller clusters.
    n_restarts : int, default=10
    n_iterations : int, default=10
        Optimization rounds per restart, each starting from the last result.
    min_cluster_size : int, default=2
    merge_small_clusters : bool, default=True
    random_state : int, default=0
        Base seed; restart ``r`` uses ``random_state + r``.

    Attributes
    ----------
    labels_ : ndarray of shape (n_nodes,)
        0-based cluster index, ordered by decreasing cluster size.
    clustering_ : Clustering
        Same partition with 1-based ids, as written to map files.
    n_clusters_ : int
    quality_ : float

    Examples
    --------
    >>> from stratmap.synthgen import ring_of_cliques
    >>> g, truth = ring_of_cliques(3, 5)
    >>> VOSClustering().fit(g).n_clusters_
    3
    """

    def __init__(
        self,
        resolution=1.0,
        n_restarts=10,
        n_iterations=10,
        min_cluster_size=2,
        merge_small_clusters=True,
        random_state=0,
    ):
        self.resolution = resolution
        self.n_restarts = n_restarts
        self.n_iterations = n_iterations
        self.min_cluster_size = min_cluster_size
        self.merge_small_clusters = merge_small_clusters
        self.random_state = random_state

    def _params(self):
        return ClusterParams(
            resolution=self.resolution,
            seed=self.random_state,
            restarts=self.n_restarts,
            iterations_per_restart=self.n_iterations,
            min_cluster_size=self.min_cluster_size,
            merge_small=self.merge_small_clusters,
        )

    def fit(self, X, y=None):
        """Cluster a graph or a square symmetric affinity matrix."""
        params = self._params()
        g = check_graph(X)
        if g.n_nodes == 0:
            raise ValueError("cannot cluster an empty graph")
        ng = association_strength(g, allow_isolates=True)
        self.clustering_ = cluster(ng, params)
        self.labels_ = self.clustering_.assignment - 1
        self.n_clusters_ = self.clustering_.n_clusters
        self.quality_ = self.clustering_.quality
        self.n_features_in_ = g.n_nodes
        return self
