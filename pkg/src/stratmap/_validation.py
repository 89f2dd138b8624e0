"""Input validation shared by the estimators and parameter records."""

import numbers

import numpy as np
import scipy.sparse as sp
from sklearn.utils.validation import check_array

from .graph import DirectedGraph, SymGraph, symmetrize


def check_positive_int(value, name):
    if isinstance(value, bool) or not isinstance(value, numbers.Integral) or value < 1:
        raise ValueError(f"{name} must be a positive integer, got {value!r}")
    return int(value)


def check_positive_real(value, name):
    if isinstance(value, bool) or not isinstance(value, numbers.Real) or not np.isfinite(value) or value <= 0:
        raise ValueError(f"{name} must be a positive real number, got {value!r}")
    return float(value)


def check_seed(value):
    if isinstance(value, bool) or not isinstance(value, numbers.Integral) or value < 0:
        raise ValueError(f"seed must be a non-negative integer, got {value!r}")
    return int(value)


def check_graph(X, labels=None):
    """Coerce ``X`` to a :class:`SymGraph`.

    Accepts a ``SymGraph``, a ``DirectedGraph`` (symmetrized by summing
    both directions), or a square, symmetric, non-negative dense or sparse
    affinity matrix whose diagonal is ignored.
    """
    if isinstance(X, SymGraph):
        return X
    if isinstance(X, DirectedGraph):
        return symmetrize(X)
    m = check_array(X, accept_sparse="csr", dtype=np.float64, ensure_min_samples=1)
    if m.shape[0] != m.shape[1]:
        raise ValueError(f"affinity matrix must be square, got shape {m.shape}")
    m = sp.csr_matrix(m)
    if m.nnz and m.data.min() < 0:
        raise ValueError("affinity matrix must be non-negative")
    m = m.tolil()
    m.setdiag(0)
    m = m.tocsr()
    m.eliminate_zeros()
    if (m != m.T).nnz:
        raise ValueError("affinity matrix must be symmetric")
    if labels is None:
        labels = [str(i + 1) for i in range(m.shape[0])]
    return SymGraph(labels, m)
