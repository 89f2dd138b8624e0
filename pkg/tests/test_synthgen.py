import numpy as np
import pytest
from sklearn.metrics import adjusted_rand_score

from stratmap.clustering import association_strength, brute_force_optimum, cluster
from stratmap.graph import symmetrize
from stratmap.synthgen import PlantedSpec, planted_partition, ring_of_cliques


def test_forced_two_cliques():
    g, truth = planted_partition(PlantedSpec([4, 4], 1.0, 0.0, seed=3))
    s = symmetrize(g)
    assert s.n_edges == 12
    assert truth.tolist() == [1] * 4 + [2] * 4
    assert all(truth[i] == truth[j] for i, j, _ in s.edges())


def test_empty_when_probabilities_vanish():
    g, _ = planted_partition(PlantedSpec([5, 5], 0.0, 0.0))
    assert g.arcs.nnz == 0
    assert g.n_nodes == 10


def test_each_link_is_a_single_arc():
    g, _ = planted_partition(PlantedSpec([30, 30], 0.6, 0.1, seed=1))
    dense = g.arcs.toarray()
    assert not np.any((dense > 0) & (dense.T > 0))
    assert set(np.unique(dense)) <= {0.0, 1.0}
    # both directions actually occur
    upper = np.triu(dense).sum()
    assert 0 < upper < dense.sum()


def test_planted_is_deterministic():
    spec = PlantedSpec([10, 12], 0.4, 0.05, seed=9)
    a, ta = planted_partition(spec)
    b, tb = planted_partition(spec)
    assert a == b and np.array_equal(ta, tb)
    c, _ = planted_partition(PlantedSpec([10, 12], 0.4, 0.05, seed=10))
    assert c != a


def test_spec_validation():
    with pytest.raises(ValueError):
        PlantedSpec([4, 0], 0.5, 0.1)
    with pytest.raises(ValueError):
        PlantedSpec([4, 4], 0.1, 0.5)
    with pytest.raises(ValueError):
        PlantedSpec([4], 1.5, 0.0)


def test_labels_sort_in_node_order():
    g, _ = planted_partition(PlantedSpec([60, 60], 0.1, 0.0))
    assert list(g.labels) == sorted(g.labels)


def test_planted_recovery_small():
    g, truth = planted_partition(PlantedSpec([25, 25, 25, 25], 0.5, 0.01, seed=0))
    c = cluster(association_strength(symmetrize(g)))
    assert adjusted_rand_score(truth, c.assignment) == 1.0


def test_ring_shape():
    g, truth = ring_of_cliques(2, 3, ring=False)
    s = symmetrize(g)
    assert [(i, j) for i, j, _ in s.edges()] == [(0, 1), (0, 2), (1, 2), (2, 3), (3, 4), (3, 5), (4, 5)]
    closed = symmetrize(ring_of_cliques(2, 3)[0])
    assert closed.n_edges == 8
    assert truth.tolist() == [1, 1, 1, 2, 2, 2]


@pytest.mark.parametrize("k, size", [(2, 3), (3, 4), (4, 6), (6, 5)])
def test_ring_node_and_edge_counts(k, size):
    g, truth = ring_of_cliques(k, size)
    s = symmetrize(g)
    assert s.n_nodes == k * size == len(truth)
    assert s.n_edges == k * size * (size - 1) // 2 + k


@pytest.mark.parametrize("k, size", [(2, 3), (2, 5), (3, 3), (3, 4)])
def test_ring_clusters_match_brute_force(k, size):
    ng = association_strength(symmetrize(ring_of_cliques(k, size)[0]))
    oracle, v = brute_force_optimum(ng, 1.0)
    found = cluster(ng)
    assert found == oracle
    assert found.quality == pytest.approx(v)


@pytest.mark.parametrize("k", range(2, 7))
@pytest.mark.parametrize("size", range(3, 7))
def test_ring_clusters_are_the_cliques(k, size):
    g, truth = ring_of_cliques(k, size)
    c = cluster(association_strength(symmetrize(g)))
    assert c.assignment.tolist() == truth.tolist()


def test_ring_validation():
    with pytest.raises(ValueError):
        ring_of_cliques(1, 4)
    with pytest.raises(ValueError):
        ring_of_cliques(3, 2)
