"""Sparse citation graphs, symmetrization, cleanup and summary statistics."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp
from scipy.sparse.csgraph import connected_components

from .pajek import PajekDocument

__all__ = [
    "DirectedGraph",
    "SymGraph",
    "NetworkStats",
    "symmetrize",
    "remove_isolates",
    "largest_component",
    "induced_subgraph",
    "network_stats",
    "link_ratios",
    "from_pajek",
    "to_pajek",
]


def _csr(n, rows, cols, weights):
    m = sp.coo_matrix(
        (np.asarray(weights, dtype=float), (np.asarray(rows, dtype=np.int64), np.asarray(cols, dtype=np.int64))),
        shape=(n, n),
    ).tocsr()
    m.sum_duplicates()
    m.eliminate_zeros()
    m.sort_indices()
    return m


@dataclass(frozen=True, eq=False)
class DirectedGraph:
    """Labelled nodes plus a sparse citing x cited weight matrix."""

    labels: tuple
    arcs: sp.csr_matrix

    def __post_init__(self):
        labels = tuple(self.labels)
        object.__setattr__(self, "labels", labels)
        if len(set(labels)) != len(labels):
            raise ValueError("node labels must be unique")
        arcs = sp.csr_matrix(self.arcs, dtype=float)
        if arcs.shape != (len(labels), len(labels)):
            raise ValueError("arc matrix shape does not match the label count")
        if arcs.nnz and (not np.all(np.isfinite(arcs.data)) or arcs.data.min() < 0):
            raise ValueError("arc weights must be finite and non-negative")
        arcs.eliminate_zeros()
        arcs.sort_indices()
        object.__setattr__(self, "arcs", arcs)

    @classmethod
    def from_arcs(cls, labels, arcs):
        """Build from ``(src, dst, weight)`` triples of 0-based indices.

        Repeated pairs are summed.
        """
        labels = tuple(labels)
        arcs = list(arcs)
        if arcs:
            rows, cols, weights = zip(*arcs)
        else:
            rows, cols, weights = (), (), ()
        return cls(labels, _csr(len(labels), rows, cols, weights))

    @property
    def n_nodes(self):
        return len(self.labels)

    def __eq__(self, other):
        if not isinstance(other, DirectedGraph):
            return NotImplemented
        return self.labels == other.labels and (self.arcs != other.arcs).nnz == 0


@dataclass(frozen=True, eq=False)
class SymGraph:
    """Loop-free symmetric weighted graph.

    ``adjacency`` holds each undirected edge in both triangles.
    """

    labels: tuple
    adjacency: sp.csr_matrix

    def __post_init__(self):
        labels = tuple(self.labels)
        object.__setattr__(self, "labels", labels)
        if len(set(labels)) != len(labels):
            raise ValueError("node labels must be unique")
        adj = sp.csr_matrix(self.adjacency, dtype=float)
        if adj.shape != (len(labels), len(labels)):
            raise ValueError("adjacency shape does not match the label count")
        adj.eliminate_zeros()
        adj.sort_indices()
        if adj.diagonal().any():
            raise ValueError("symmetric graphs cannot contain loops")
        if (adj != adj.T).nnz:
            raise ValueError("adjacency must be symmetric")
        if adj.nnz and (not np.all(np.isfinite(adj.data)) or adj.data.min() <= 0):
            raise ValueError("edge weights must be finite and positive")
        object.__setattr__(self, "adjacency", adj)
        object.__setattr__(self, "node_strength", np.asarray(adj.sum(axis=1)).ravel())

    @property
    def n_nodes(self):
        return len(self.labels)

    @property
    def n_edges(self):
        return self.adjacency.nnz // 2

    @property
    def total_strength_2m(self):
        return float(self.node_strength.sum())

    @property
    def degree(self):
        return np.diff(self.adjacency.indptr)

    def edges(self):
        """``(i, j, w)`` triples with ``i < j`` in ascending order."""
        coo = sp.triu(self.adjacency, k=1).tocoo()
        idx = np.lexsort((coo.col, coo.row))
        return list(zip(coo.row[idx].tolist(), coo.col[idx].tolist(), coo.data[idx].tolist()))

    def index_of(self, label):
        try:
            return self.labels.index(label)
        except ValueError:
            raise KeyError(f"unknown node label {label!r}") from None

    def __eq__(self, other):
        if not isinstance(other, SymGraph):
            return NotImplemented
        return self.labels == other.labels and (self.adjacency != other.adjacency).nnz == 0

    @classmethod
    def from_edges(cls, labels, edges):
        """Build from ``(i, j, w)`` 0-based triples, each pair listed once."""
        labels = tuple(labels)
        edges = [(i, j, w) for i, j, w in edges if i != j]
        rows = [i for i, j, _ in edges] + [j for i, j, _ in edges]
        cols = [j for i, j, _ in edges] + [i for i, j, _ in edges]
        weights = [w for *_, w in edges] * 2
        return cls(labels, _csr(len(labels), rows, cols, weights))


@dataclass(frozen=True)
class NetworkStats:
    n_nodes: int
    n_links: int
    n_loops: int
    total_citations: float
    density: float
    avg_total_degree: float
    clustering_coefficient: float

    def as_dict(self):
        return dict(self.__dict__)


def symmetrize(g):
    """Sum cells (i, j) and (j, i) and drop self-citations."""
    a = g.arcs
    w = (a + a.T).tocsr()
    w.setdiag(0)
    w.eliminate_zeros()
    return SymGraph(g.labels, w)


def induced_subgraph(g, members):
    """Subgraph on the given node labels, keeping the original label order.

    Raises
    ------
    KeyError
        If a member is not a node of ``g``.
    """
    pos = {label: i for i, label in enumerate(g.labels)}
    missing = [m for m in members if m not in pos]
    if missing:
        raise KeyError(f"unknown node label(s): {missing[:5]!r}")
    idx = np.array(sorted({pos[m] for m in members}), dtype=np.int64)
    return _take(g, idx)


def _take(g, idx):
    sub = g.adjacency[idx][:, idx]
    return SymGraph(tuple(g.labels[i] for i in idx), sub)


def remove_isolates(g):
    """Drop nodes without incident edges; return the graph and removed labels."""
    keep = g.degree > 0
    removed = [label for label, k in zip(g.labels, keep) if not k]
    if not removed:
        return g, []
    return _take(g, np.flatnonzero(keep)), removed


def largest_component(g):
    """Induced subgraph on the biggest connected component.

    Equal-sized components are ranked by their smallest node index.
    """
    if g.n_nodes == 0:
        raise ValueError("empty graph has no components")
    _, comp = connected_components(g.adjacency, directed=False)
    sizes = np.bincount(comp)
    first = np.full(len(sizes), g.n_nodes)
    np.minimum.at(first, comp, np.arange(g.n_nodes))
    best = min(range(len(sizes)), key=lambda c: (-sizes[c], first[c]))
    idx = np.flatnonzero(comp == best)
    if len(idx) == g.n_nodes:
        return g
    return _take(g, idx)


def link_ratios(n_nodes, n_links):
    """Density ``L / (n (n - 1))`` and average total degree ``2 L / n``."""
    if n_nodes < 2:
        raise ValueError("need at least two nodes")
    return n_links / (n_nodes * (n_nodes - 1)), 2.0 * n_links / n_nodes


def _average_local_clustering(adj):
    a = adj.copy().tocsr()
    a.setdiag(0)
    a.eliminate_zeros()
    a.data[:] = 1.0
    deg = np.asarray(a.sum(axis=1)).ravel()
    tri = np.asarray((a @ a).multiply(a).sum(axis=1)).ravel() / 2.0
    pairs = deg * (deg - 1) / 2.0
    local = np.divide(tri, pairs, out=np.zeros_like(tri), where=pairs > 0)
    return float(local.mean()) if len(local) else 0.0


def network_stats(g):
    """Table-style network characteristics of a directed citation graph.

    Links count every non-zero arc including loops; total citations
    exclude loops.  The clustering coefficient is the mean local
    coefficient of the unweighted symmetrized graph, nodes of degree < 2
    contributing zero.
    """
    n = g.n_nodes
    if n < 2:
        raise ValueError("network statistics need at least two nodes")
    arcs = g.arcs
    diag = arcs.diagonal()
    n_links = int(arcs.nnz)
    n_loops = int(np.count_nonzero(diag))
    total = float(arcs.sum() - diag.sum())
    density, avg_degree = link_ratios(n, n_links)
    sym = arcs + arcs.T
    return NetworkStats(
        n_nodes=n,
        n_links=n_links,
        n_loops=n_loops,
        total_citations=total,
        density=density,
        avg_total_degree=avg_degree,
        clustering_coefficient=_average_local_clustering(sym),
    )


def from_pajek(doc):
    """Directed graph of a Pajek document.

    Each undirected edge becomes one arc ``a -> b``, so after
    symmetrization it keeps its weight.
    """
    order = sorted(doc.vertices)
    labels = [label for _, label in order]
    triples = [(a - 1, b - 1, w) for a, b, w in doc.arcs]
    triples += [(a - 1, b - 1, w) for a, b, w in doc.edges]
    return DirectedGraph.from_arcs(labels, triples)


def to_pajek(g):
    """Pajek document for a :class:`DirectedGraph` (arcs) or :class:`SymGraph` (edges)."""
    vertices = [(i + 1, label) for i, label in enumerate(g.labels)]
    if isinstance(g, SymGraph):
        return PajekDocument(vertices, [], [(i + 1, j + 1, w) for i, j, w in g.edges()])
    coo = g.arcs.tocoo()
    idx = np.lexsort((coo.col, coo.row))
    arcs = [(int(a) + 1, int(b) + 1, float(w)) for a, b, w in zip(coo.row[idx], coo.col[idx], coo.data[idx])]
    return PajekDocument(vertices, arcs, [])
