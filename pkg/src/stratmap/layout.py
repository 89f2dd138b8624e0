"""
Attraction/repulsion map layout.

The energy of a configuration is

    E = sum_edges s_ij f_a(d_ij) - sum_{all pairs} f_r(d_ij)

with ``f_e(d) = d**e / e`` and ``f_0(d) = log d``.  With the defaults
(attraction 2, repulsion 0) the scale of the map is fixed by the energy
itself, so no normalization of coordinates is applied.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin

from . import _kernels
from ._validation import check_graph, check_positive_int, check_positive_real, check_seed
from .clustering import NormalizedGraph, association_strength

__all__ = [
    "LayoutParams",
    "LayoutResult",
    "layout_energy",
    "layout_gradient",
    "layout",
    "canonicalize",
    "VOSLayout",
]

_MAX_HALVINGS = 60
_MEMORY = 10


@dataclass(frozen=True)
class LayoutParams:
    attraction: int = 2
    repulsion: int = 0
    seed: int = 0
    max_iterations: int = 1000
    tolerance: float = 1e-8

    def __post_init__(self):
        if not self.attraction > self.repulsion:
            raise ValueError(
                f"attraction ({self.attraction}) must exceed repulsion ({self.repulsion})"
            )
        check_seed(self.seed)
        check_positive_int(self.max_iterations, "max_iterations")
        check_positive_real(self.tolerance, "tolerance")


@dataclass(frozen=True, eq=False)
class LayoutResult:
    positions: np.ndarray
    energies: np.ndarray
    n_iterations: int


def _arrays(ng):
    s = ng.assoc
    return s.indptr.astype(np.int64), s.indices.astype(np.int64), s.data.astype(np.float64)


def _evaluate(ng, pos, a, r):
    indptr, indices, data = _arrays(ng)
    return _kernels.energy_and_gradient(
        np.ascontiguousarray(pos, dtype=np.float64), indptr, indices, data, float(a), float(r)
    )


def layout_energy(ng, pos, attraction=2, repulsion=0):
    """Energy of ``pos`` (shape ``(n, 2)``).

    Raises
    ------
    ValueError
        If two points coincide while the repulsion exponent is <= 0.
    """
    if not attraction > repulsion:
        raise ValueError("attraction must exceed repulsion")
    energy, _ = _evaluate(ng, pos, attraction, repulsion)
    if not np.isfinite(energy):
        raise ValueError("coincident points give infinite energy")
    return float(energy)


def layout_gradient(ng, pos, attraction=2, repulsion=0):
    energy, grad = _evaluate(ng, pos, attraction, repulsion)
    if not np.isfinite(energy):
        raise ValueError("coincident points give infinite energy")
    return grad


def _lbfgs_direction(grad, history):
    q = grad.ravel().copy()
    if not history:
        return -q.reshape(grad.shape)
    alphas = []
    for s, y, rho in reversed(history):
        a = rho * np.dot(s, q)
        alphas.append(a)
        q -= a * y
    s, y, _ = history[-1]
    q *= np.dot(s, y) / np.dot(y, y)
    for (s, y, rho), a in zip(history, reversed(alphas)):
        b = rho * np.dot(y, q)
        q += (a - b) * s
    return -q.reshape(grad.shape)


def layout(ng, params=LayoutParams(), return_result=False):
    """Minimize the layout energy by backtracking descent.

    Starts from a seeded uniform draw in the unit square.  Search
    directions come from a limited-memory BFGS model of the last
    ``_MEMORY`` steps (steepest descent when that is not a descent
    direction); the step is halved until the energy strictly decreases.
    Stops once the relative decrease falls below ``params.tolerance`` or
    after ``params.max_iterations`` steps, then canonicalizes.
    """
    n = ng.n_nodes
    if n == 0:
        raise ValueError("cannot lay out an empty graph")
    a, r = float(params.attraction), float(params.repulsion)
    rng = np.random.Generator(np.random.PCG64(params.seed))
    pos = rng.random((n, 2))
    if n == 1:
        out = np.zeros((1, 2))
        return LayoutResult(out, np.zeros(0), 0) if return_result else out

    indptr, indices, data = _arrays(ng)

    def evaluate(x):
        return _kernels.energy_and_gradient(x, indptr, indices, data, a, r)

    energy, grad = evaluate(pos)
    energies = [energy]
    history = []
    it = 0
    for it in range(1, params.max_iterations + 1):
        direction = _lbfgs_direction(grad, history)
        slope = np.vdot(direction, grad)
        if not slope < 0:
            history.clear()
            direction = -grad
            slope = -np.vdot(grad, grad)
        if slope == 0:
            it -= 1
            break
        t = 1.0 if history else 0.1 / np.sqrt(-slope)
        for _ in range(_MAX_HALVINGS):
            trial = pos + t * direction
            e_trial, g_trial = evaluate(trial)
            if e_trial < energy:
                break
            t *= 0.5
        else:
            it -= 1
            break
        rel = (energy - e_trial) / max(abs(energy), 1e-12)
        ds = (trial - pos).ravel()
        dg = (g_trial - grad).ravel()
        sy = np.dot(ds, dg)
        if sy > 1e-12 * np.dot(ds, ds):
            history.append((ds, dg, 1.0 / sy))
            if len(history) > _MEMORY:
                history.pop(0)
        pos, energy, grad = trial, e_trial, g_trial
        energies.append(energy)
        if rel < params.tolerance:
            break
    out = canonicalize(pos)
    if return_result:
        return LayoutResult(out, np.asarray(energies), it)
    return out


def _moment_sign(values, scale):
    m3 = np.mean(values**3)
    if abs(m3) <= 1e-12 * scale**3:
        return 0.0
    return np.sign(m3)


def canonicalize(pos):
    """Remove the translation, rotation and reflection freedom of a layout.

    Centres the centroid, aligns the principal axis with x, then flips
    each axis so its third central moment is non-negative (or, when that
    moment vanishes, so that the first node's coordinate is non-negative).
    """
    pos = np.array(pos, dtype=np.float64).reshape(-1, 2)
    if len(pos) == 0:
        return pos
    pos = pos - pos.mean(axis=0)
    cxx, cyy = np.mean(pos[:, 0] ** 2), np.mean(pos[:, 1] ** 2)
    cxy = np.mean(pos[:, 0] * pos[:, 1])
    spread = cxx + cyy
    if spread == 0:
        return np.zeros_like(pos)
    if abs(cxx - cyy) <= 1e-12 * spread and abs(cxy) <= 1e-12 * spread:
        # isotropic spread: anchor the first off-centre node on the x axis
        radius = np.hypot(pos[:, 0], pos[:, 1])
        k = int(np.argmax(radius > 1e-12 * np.sqrt(spread)))
        theta = np.arctan2(pos[k, 1], pos[k, 0])
    else:
        theta = 0.5 * np.arctan2(2 * cxy, cxx - cyy)
    c, s = np.cos(theta), np.sin(theta)
    pos = pos @ np.array([[c, -s], [s, c]])
    scale = np.sqrt(spread)
    for axis in (0, 1):
        sign = _moment_sign(pos[:, axis], scale)
        if sign == 0:
            sign = -1.0 if pos[0, axis] < 0 else 1.0
        if sign < 0:
            pos[:, axis] = -pos[:, axis]
    return pos + 0.0


class VOSLayout(TransformerMixin, BaseEstimator):
    """Two-dimensional map layout of a weighted graph.

    ``fit`` takes a graph or square affinity matrix; edge weights are
    association-normalized before layout.

    Attributes
    ----------
    embedding_ : ndarray of shape (n_nodes, 2)
    energies_ : ndarray
        Energy after each accepted step (first entry is the start).
    n_iter_ : int
    """

    def __init__(self, attraction=2, repulsion=0, max_iter=1000, tol=1e-8, random_state=0):
        self.attraction = attraction
        self.repulsion = repulsion
        self.max_iter = max_iter
        self.tol = tol
        self.random_state = random_state

    def fit(self, X, y=None):
        params = LayoutParams(
            attraction=self.attraction,
            repulsion=self.repulsion,
            seed=self.random_state,
            max_iterations=self.max_iter,
            tolerance=self.tol,
        )
        ng = X if isinstance(X, NormalizedGraph) else association_strength(check_graph(X), allow_isolates=True)
        result = layout(ng, params, return_result=True)
        self.embedding_ = result.positions
        self.energies_ = result.energies
        self.n_iter_ = result.n_iterations
        self.n_features_in_ = ng.n_nodes
        return self

    def fit_transform(self, X, y=None):
        return self.fit(X).embedding_

    def transform(self, X=None):
        """Return the fitted embedding; layouts are transductive."""
        from sklearn.utils.validation import check_is_fitted

        check_is_fitted(self, "embedding_")
        return self.embedding_
