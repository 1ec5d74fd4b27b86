"""Bivariate association: covariance, five correlation coefficients,
contingency tables, and whole-table correlation matrices.

All pairwise statistics use pairwise deletion: only rows where both inputs
are present enter the computation. Undefined coefficients (constant input,
too few pairs) raise from the pairwise functions and surface as explicit
None markers in a CorrelationMatrix, never as silent zeros.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .table import Column, Kind, Table, numeric_with_mask


class CorrMethod(enum.Enum):
    PEARSON = "pearson"
    SPEARMAN = "spearman"
    KENDALL = "kendall"


@dataclass(frozen=True)
class CorrelationMatrix:
    method: CorrMethod
    labels: tuple[str, ...]
    values: tuple[tuple[Optional[float], ...], ...]

    def __post_init__(self) -> None:
        k = len(self.labels)
        if len(self.values) != k or any(len(row) != k for row in self.values):
            raise ValueError("correlation matrix must be square over its labels")

    def cell(self, a: str, b: str) -> Optional[float]:
        i = self.labels.index(a)
        j = self.labels.index(b)
        return self.values[i][j]

    def to_dict(self) -> dict:
        return {
            "method": self.method.value,
            "labels": list(self.labels),
            "values": [list(row) for row in self.values],
        }


@dataclass(frozen=True)
class ContingencyTable:
    row_labels: tuple[str, ...]
    col_labels: tuple[str, ...]
    counts: tuple[tuple[int, ...], ...]

    @property
    def total(self) -> int:
        return sum(sum(row) for row in self.counts)

    def to_dict(self) -> dict:
        return {
            "row_labels": list(self.row_labels),
            "col_labels": list(self.col_labels),
            "counts": [list(row) for row in self.counts],
        }


def _joint_present(x: Column, y: Column) -> tuple[np.ndarray, np.ndarray]:
    if len(x) != len(y):
        raise ValueError(f"columns {x.name!r} and {y.name!r} have different lengths")
    xv, xm = numeric_with_mask(x)
    yv, ym = numeric_with_mask(y)
    both = xm & ym
    return xv[both], yv[both]


def covariance(x: Column, y: Column) -> float:
    """Sample covariance (ddof=1) over jointly non-missing pairs."""
    a, b = _joint_present(x, y)
    n = len(a)
    if n < 2:
        raise ValueError("covariance needs >= 2 jointly present pairs")
    return float(np.sum((a - a.mean()) * (b - b.mean())) / (n - 1))


def _pearson_arrays(a: np.ndarray, b: np.ndarray) -> float:
    n = len(a)
    if n < 2:
        raise ValueError("correlation needs >= 2 jointly present pairs")
    da = a - a.mean()
    db = b - b.mean()
    va = float(np.sum(da * da))
    vb = float(np.sum(db * db))
    if va == 0 or vb == 0:
        raise ValueError("undefined correlation: zero variance input")
    r = float(np.sum(da * db)) / math.sqrt(va * vb)
    return max(-1.0, min(1.0, r))


def pearson(x: Column, y: Column) -> float:
    """Pearson's r over jointly present pairs, clamped to [-1, 1]."""
    a, b = _joint_present(x, y)
    return _pearson_arrays(a, b)


def average_ranks(a: np.ndarray) -> np.ndarray:
    """Ranks 1..n with ties replaced by their mean rank."""
    order = np.argsort(a, kind="stable")
    ranks = np.empty(len(a), dtype=float)
    i = 0
    while i < len(a):
        j = i
        while j + 1 < len(a) and a[order[j + 1]] == a[order[i]]:
            j += 1
        ranks[order[i : j + 1]] = (i + j) / 2.0 + 1.0
        i = j + 1
    return ranks


def spearman(x: Column, y: Column) -> float:
    """Spearman's rho: Pearson correlation of average-ranked values."""
    a, b = _joint_present(x, y)
    if len(a) < 2:
        raise ValueError("correlation needs >= 2 jointly present pairs")
    return _pearson_arrays(average_ranks(a), average_ranks(b))


def kendall_tau(x: Column, y: Column) -> float:
    """Kendall's tau-b with tie correction.

    (C - D) / sqrt((n0 - n1)(n0 - n2)) where n0 = n(n-1)/2 and n1/n2 count
    tied pairs in each variable. Pair enumeration is O(n^2), one row of the
    pair matrix at a time, which is fine at desk scale.
    """
    a, b = _joint_present(x, y)
    n = len(a)
    if n < 2:
        raise ValueError("kendall tau needs >= 2 jointly present pairs")
    concordant_minus_discordant = 0
    ties_x = 0
    ties_y = 0
    for i in range(n - 1):
        sx = np.sign(a[i + 1 :] - a[i])
        sy = np.sign(b[i + 1 :] - b[i])
        concordant_minus_discordant += int(np.sum(sx * sy))
        ties_x += int(np.sum(sx == 0))
        ties_y += int(np.sum(sy == 0))
    n0 = n * (n - 1) // 2
    if ties_x == n0 or ties_y == n0:
        raise ValueError("kendall tau undefined: a variable is entirely tied")
    denom = math.sqrt((n0 - ties_x) * (n0 - ties_y))
    return concordant_minus_discordant / denom


def point_biserial(b: Column, y: Column) -> float:
    """Correlation of a boolean column with a numeric one.

    Identical by construction to Pearson's r on the 0/1 coding; requires
    both classes present among the jointly non-missing rows.
    """
    if b.kind is not Kind.BOOLEAN:
        raise ValueError(f"column {b.name!r} must be boolean")
    bv, yv = _joint_present(b, y)
    if len(set(bv.tolist())) < 2:
        raise ValueError(f"column {b.name!r} has a single class; point-biserial undefined")
    return _pearson_arrays(bv, yv)


def phi(a: Column, b: Column) -> float:
    """Phi coefficient of two boolean columns via their 2x2 contingency table."""
    for c in (a, b):
        if c.kind is not Kind.BOOLEAN:
            raise ValueError(f"column {c.name!r} must be boolean")
    av, bv = _joint_present(a, b)
    n11 = int(np.sum((av == 1) & (bv == 1)))
    n10 = int(np.sum((av == 1) & (bv == 0)))
    n01 = int(np.sum((av == 0) & (bv == 1)))
    n00 = int(np.sum((av == 0) & (bv == 0)))
    r1, r0 = n11 + n10, n01 + n00
    c1, c0 = n11 + n01, n10 + n00
    if 0 in (r1, r0, c1, c0):
        raise ValueError("phi undefined: zero marginal in the 2x2 table")
    return (n11 * n00 - n10 * n01) / math.sqrt(r1 * r0 * c1 * c0)


def contingency(a: Column, b: Column) -> ContingencyTable:
    """Cross-tabulation of two categorical/boolean columns.

    Counts cover jointly non-missing rows; labels are ascending text.
    """
    if len(a) != len(b):
        raise ValueError(f"columns {a.name!r} and {b.name!r} have different lengths")
    for c in (a, b):
        if c.kind is Kind.NUMERIC:
            raise ValueError(f"column {c.name!r} is numeric; bin it first")
    pairs = [
        (str(av), str(bv))
        for av, am, bv, bm in zip(a.values, a.missing, b.values, b.missing)
        if not am and not bm
    ]
    row_labels = sorted({p[0] for p in pairs})
    col_labels = sorted({p[1] for p in pairs})
    counts = [[0] * len(col_labels) for _ in row_labels]
    ri = {label: i for i, label in enumerate(row_labels)}
    ci = {label: i for i, label in enumerate(col_labels)}
    for ra, cb in pairs:
        counts[ri[ra]][ci[cb]] += 1
    return ContingencyTable(
        tuple(row_labels), tuple(col_labels), tuple(tuple(row) for row in counts)
    )


_PAIRWISE = {
    CorrMethod.PEARSON: pearson,
    CorrMethod.SPEARMAN: spearman,
    CorrMethod.KENDALL: kendall_tau,
}


def correlation_matrix(t: Table, method: CorrMethod = CorrMethod.PEARSON) -> CorrelationMatrix:
    """Pairwise association over every numeric and boolean column.

    Each cell uses the rows jointly present for that pair. Cells whose
    coefficient is undefined hold None.
    """
    eligible = [c for c in t.columns if c.kind in (Kind.NUMERIC, Kind.BOOLEAN)]
    if len(eligible) < 2:
        raise ValueError("correlation matrix needs >= 2 numeric/boolean columns")
    fn = _PAIRWISE[method]
    k = len(eligible)
    values: list[list[Optional[float]]] = [[None] * k for _ in range(k)]
    for i in range(k):
        for j in range(i, k):
            try:
                r: Optional[float] = fn(eligible[i], eligible[j])
            except ValueError:
                r = None
            values[i][j] = r
            values[j][i] = r
    return CorrelationMatrix(
        method, tuple(c.name for c in eligible), tuple(tuple(row) for row in values)
    )
