"""Compiled inner loops.  Summation order is fixed so results are reproducible."""

import numpy as np
from numba import njit


@njit(cache=True)
def local_moving(indptr, indices, data, node_size, cluster, order, resolution):
    """Queue-based local moving for ``V = sum_same (s_ij - resolution * n_i n_j)``.

    ``cluster`` is updated in place; returns True if any node moved.
    Self-loops (internal weight of aggregated nodes) are ignored since they
    do not depend on the assignment.
    """
    n = node_size.shape[0]
    cluster_size = np.zeros(n, dtype=np.float64)
    n_members = np.zeros(n, dtype=np.int64)
    for i in range(n):
        cluster_size[cluster[i]] += node_size[i]
        n_members[cluster[i]] += 1
    unused = np.empty(n, dtype=np.int64)
    n_unused = 0
    for c in range(n - 1, -1, -1):
        if n_members[c] == 0:
            unused[n_unused] = c
            n_unused += 1

    edge_weight = np.zeros(n, dtype=np.float64)
    touched = np.empty(n, dtype=np.int64)
    queue = order.copy()
    in_queue = np.ones(n, dtype=np.bool_)
    head = 0
    count = n
    moved = False
    while count > 0:
        i = queue[head]
        head = (head + 1) % n
        count -= 1
        in_queue[i] = False

        current = cluster[i]
        n_touched = 0
        for k in range(indptr[i], indptr[i + 1]):
            j = indices[k]
            if j == i:
                continue
            c = cluster[j]
            if edge_weight[c] == 0.0:
                touched[n_touched] = c
                n_touched += 1
            edge_weight[c] += data[k]

        cluster_size[current] -= node_size[i]
        n_members[current] -= 1
        if n_members[current] == 0:
            unused[n_unused] = current
            n_unused += 1

        size_i = node_size[i]
        best = current
        best_gain = edge_weight[current] - resolution * size_i * cluster_size[current]
        for t in range(n_touched):
            c = touched[t]
            if c == current:
                continue
            gain = edge_weight[c] - resolution * size_i * cluster_size[c]
            if gain > best_gain or (gain == best_gain and best != current and c < best):
                best = c
                best_gain = gain
        if best_gain < 0.0:
            best = unused[n_unused - 1]
            best_gain = 0.0

        for t in range(n_touched):
            edge_weight[touched[t]] = 0.0

        if n_unused > 0 and unused[n_unused - 1] == best:
            n_unused -= 1
        cluster[i] = best
        cluster_size[best] += size_i
        n_members[best] += 1

        if best != current:
            moved = True
            for k in range(indptr[i], indptr[i + 1]):
                j = indices[k]
                if j != i and not in_queue[j] and cluster[j] != best:
                    queue[(head + count) % n] = j
                    count += 1
                    in_queue[j] = True
    return moved


@njit(cache=True)
def _pair_term(d, e):
    if e == 0.0:
        return np.log(d)
    return d ** e / e


@njit(cache=True)
def energy_and_gradient(pos, indptr, indices, data, attraction, repulsion):
    """Layout energy and its gradient.

    ``E = sum_edges s_ij f_a(d_ij) - sum_pairs f_r(d_ij)`` with
    ``f_e(d) = d**e / e`` (``log d`` for ``e = 0``).  Returns ``inf`` energy
    when two points coincide and the repulsion exponent is <= 0.
    """
    n = pos.shape[0]
    grad = np.zeros((n, 2), dtype=np.float64)
    partial = np.zeros(n, dtype=np.float64)
    a_pow = attraction - 2.0
    r_pow = repulsion - 2.0
    for i in range(n):
        xi = pos[i, 0]
        yi = pos[i, 1]
        acc = 0.0
        for j in range(i + 1, n):
            dx = xi - pos[j, 0]
            dy = yi - pos[j, 1]
            d2 = dx * dx + dy * dy
            if d2 == 0.0:
                if repulsion <= 0.0:
                    return np.inf, grad
                continue
            if repulsion == 0.0:
                acc -= 0.5 * np.log(d2)
                f = -1.0 / d2
            else:
                d = np.sqrt(d2)
                acc -= _pair_term(d, repulsion)
                f = -(d ** r_pow)
            grad[i, 0] += f * dx
            grad[i, 1] += f * dy
            grad[j, 0] -= f * dx
            grad[j, 1] -= f * dy
        for k in range(indptr[i], indptr[i + 1]):
            j = indices[k]
            if j <= i:
                continue
            dx = xi - pos[j, 0]
            dy = yi - pos[j, 1]
            d2 = dx * dx + dy * dy
            if d2 == 0.0:
                if attraction <= 0.0:
                    return np.inf, grad
                continue
            s = data[k]
            if attraction == 2.0:
                acc += 0.5 * s * d2
                f = s
            else:
                d = np.sqrt(d2)
                acc += s * _pair_term(d, attraction)
                f = s * d ** a_pow
            grad[i, 0] += f * dx
            grad[i, 1] += f * dy
            grad[j, 0] -= f * dx
            grad[j, 1] -= f * dy
        partial[i] = acc
    return np.sum(partial), grad
