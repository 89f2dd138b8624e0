"""Seeded synthetic citation networks with known block structure."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .graph import DirectedGraph

__all__ = ["PlantedSpec", "planted_partition", "ring_of_cliques"]


@dataclass(frozen=True)
class PlantedSpec:
    sizes: tuple
    p_in: float
    p_out: float
    seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, "sizes", tuple(int(s) for s in self.sizes))
        if not self.sizes or min(self.sizes) < 1:
            raise ValueError("block sizes must be positive integers")
        if not 0 <= self.p_out <= self.p_in <= 1:
            raise ValueError("need 0 <= p_out <= p_in <= 1")


def _labels(n):
    width = len(str(n))
    return [f"v{i + 1:0{width}d}" for i in range(n)]


def planted_partition(spec):
    """Random unit-weight citation graph with planted blocks.

    Every unordered pair is linked with probability ``p_in`` (same block)
    or ``p_out``; a linked pair becomes one arc whose direction is drawn
    at random.

    Returns
    -------
    graph : DirectedGraph
    truth : ndarray of int
        1-based block of each node.
    """
    truth = np.repeat(np.arange(1, len(spec.sizes) + 1), spec.sizes)
    n = len(truth)
    rng = np.random.Generator(np.random.PCG64(spec.seed))
    src, dst = [], []
    for i in range(n - 1):
        others = np.arange(i + 1, n)
        p = np.where(truth[others] == truth[i], spec.p_in, spec.p_out)
        hit = others[rng.random(n - i - 1) < p]
        flip = rng.random(len(hit)) < 0.5
        src.append(np.where(flip, hit, i))
        dst.append(np.where(flip, i, hit))
    if src:
        src, dst = np.concatenate(src), np.concatenate(dst)
    else:
        src = dst = np.zeros(0, dtype=np.int64)
    graph = DirectedGraph.from_arcs(_labels(n), zip(src.tolist(), dst.tolist(), [1.0] * len(src)))
    return graph, truth


def ring_of_cliques(k, clique_size, ring=True):
    """``k`` unit-weight cliques, consecutive ones joined by a single bridge.

    The bridge runs from the last node of clique ``c`` to the first node of
    clique ``c + 1``; with ``ring`` the last clique also links back to the
    first.
    """
    if k < 2 or clique_size < 3:
        raise ValueError("need k >= 2 cliques of size >= 3")
    arcs = []
    for c in range(k):
        base = c * clique_size
        arcs += [
            (base + i, base + j, 1.0)
            for i in range(clique_size)
            for j in range(i + 1, clique_size)
        ]
    for c in range(k - 1 + bool(ring)):
        arcs.append((c * clique_size + clique_size - 1, ((c + 1) % k) * clique_size, 1.0))
    truth = np.repeat(np.arange(1, k + 1), clique_size)
    return DirectedGraph.from_arcs(_labels(k * clique_size), arcs), truth
