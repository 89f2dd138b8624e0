"""Agreement between two classifications of (partly) the same items."""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass

import numpy as np
from scipy.optimize import linear_sum_assignment
from scipy.special import gammaincc

from .pajek import MAP_HEADER, PajekParseError, parse_map_file

__all__ = [
    "ContingencyTable",
    "ComparisonStats",
    "OverlapReport",
    "read_labeled_clustering",
    "intersect_by_label",
    "contingency",
    "chi2_upper_tail",
    "chi_square",
    "cramers_v",
    "reclassified_fraction",
    "compare",
    "set_overlap",
    "format_report",
    "format_tsv",
]


@dataclass(frozen=True, eq=False)
class ContingencyTable:
    counts: np.ndarray
    row_labels: tuple
    col_labels: tuple

    @property
    def n(self):
        return int(self.counts.sum())

    def _nonzero(self):
        keep_r = self.counts.sum(axis=1) > 0
        keep_c = self.counts.sum(axis=0) > 0
        return self.counts[keep_r][:, keep_c]


@dataclass(frozen=True)
class ComparisonStats:
    chi_square: float
    df: int
    p_value: float
    cramers_v: float
    n_common: int
    reclassified_fraction: float


@dataclass(frozen=True)
class OverlapReport:
    in_all: int
    in_exactly_two: int
    in_exactly_one: int
    exclusive: tuple


def read_labeled_clustering(text):
    """Label -> cluster from a map file or from ``label<TAB>cluster`` lines."""
    lines = text.splitlines()
    if lines and lines[0].split("\t")[:2] == list(MAP_HEADER[:2]):
        return parse_map_file(text).clusters()
    out = {}
    for lineno, line in enumerate(lines, start=1):
        if not line.strip():
            continue
        parts = line.rstrip("\n").split("\t")
        if len(parts) != 2:
            raise PajekParseError("expected 'label<TAB>cluster'", lineno)
        try:
            out[parts[0]] = int(parts[1])
        except ValueError:
            raise PajekParseError(f"cluster {parts[1]!r} is not an integer", lineno) from None
    return out


def intersect_by_label(a, b):
    """``(cluster_a, cluster_b)`` for every label in both, sorted by label.

    Labels must match exactly (case-sensitive).
    """
    common = sorted(set(a) & set(b))
    return [(a[label], b[label]) for label in common]


def contingency(pairs):
    pairs = list(pairs)
    if not pairs:
        raise ValueError("no common items to cross-tabulate")
    rows = sorted({p[0] for p in pairs})
    cols = sorted({p[1] for p in pairs})
    ri = {r: i for i, r in enumerate(rows)}
    ci = {c: j for j, c in enumerate(cols)}
    counts = np.zeros((len(rows), len(cols)), dtype=np.int64)
    for r, c in pairs:
        counts[ri[r], ci[c]] += 1
    return ContingencyTable(counts, tuple(rows), tuple(cols))


def _table(t):
    return t if isinstance(t, ContingencyTable) else ContingencyTable(np.asarray(t), (), ())


def chi2_upper_tail(x, df):
    """``P(X >= x)`` for a chi-square variable with ``df`` degrees of freedom."""
    if df < 1:
        raise ValueError("df must be >= 1")
    return float(gammaincc(df / 2.0, x / 2.0))


def chi_square(t):
    """Pearson chi-square, degrees of freedom and upper-tail p-value.

    Empty rows and columns are dropped first.
    """
    obs = _table(t)._nonzero().astype(float)
    n = obs.sum()
    if n < 1:
        raise ValueError("contingency table is empty")
    expected = np.outer(obs.sum(axis=1), obs.sum(axis=0)) / n
    chi2 = float(((obs - expected) ** 2 / expected).sum())
    df = (obs.shape[0] - 1) * (obs.shape[1] - 1)
    p = chi2_upper_tail(chi2, df) if df > 0 else 1.0
    return chi2, df, p


def cramers_v(t):
    """``sqrt(chi2 / (N (min(r, c) - 1)))``; 1 for a single occupied cell."""
    obs = _table(t)._nonzero()
    r, c = obs.shape
    if min(r, c) == 1:
        if r == c == 1:
            return 1.0
        raise ValueError("Cramer's V is undefined for a single-row or single-column table")
    chi2, _, _ = chi_square(obs)
    return float(np.sqrt(chi2 / (obs.sum() * (min(r, c) - 1))))


def reclassified_fraction(t):
    """Share of items off the best one-to-one matching of row and column clusters."""
    counts = _table(t).counts
    n = counts.sum()
    if n < 1:
        raise ValueError("contingency table is empty")
    rows, cols = linear_sum_assignment(counts, maximize=True)
    return float(1.0 - counts[rows, cols].sum() / n)


def compare(a, b):
    pairs = intersect_by_label(a, b)
    table = contingency(pairs)
    chi2, df, p = chi_square(table)
    return ComparisonStats(
        chi_square=chi2,
        df=df,
        p_value=p,
        cramers_v=cramers_v(table),
        n_common=len(pairs),
        reclassified_fraction=reclassified_fraction(table),
    )


def set_overlap(lists):
    """How many labels occur in all, exactly two, or exactly one of 2-3 lists."""
    sets = [set(x) for x in lists]
    if len(sets) not in (2, 3):
        raise ValueError("set_overlap takes two or three lists")
    counts = {}
    for s in sets:
        for label in s:
            counts[label] = counts.get(label, 0) + 1
    tally = np.bincount(np.fromiter(counts.values(), dtype=np.int64, count=len(counts)), minlength=4)
    exclusive = tuple(sorted(label for label in s if counts[label] == 1) for s in sets)
    return OverlapReport(
        in_all=int(tally[len(sets)]),
        in_exactly_two=int(tally[2]) if len(sets) == 3 else 0,
        in_exactly_one=int(tally[1]),
        exclusive=exclusive,
    )


def format_report(stats):
    """Aligned text and JSON renderings of a stats dataclass."""
    d = asdict(stats)
    width = max(len(k) for k in d)
    lines = []
    for k, v in d.items():
        if isinstance(v, float):
            v = f"{v:.6g}"
        elif isinstance(v, (list, tuple)):
            v = json.dumps(v, ensure_ascii=False)
        lines.append(f"{k:<{width}}  {v}")
    return "\n".join(lines) + "\n", json.dumps(d, indent=1, ensure_ascii=False) + "\n"


def format_tsv(stats):
    """``key<TAB>value`` lines."""
    lines = []
    for k, v in asdict(stats).items():
        if isinstance(v, (list, tuple)):
            v = json.dumps(v, ensure_ascii=False)
        lines.append(f"{k}\t{v}")
    return "\n".join(lines) + "\n"
