"""Support-recovery scoring: confusion counts, ROC over a sparsity sweep, edge-difference tables."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import DataError, DimensionMismatch
from .graph import BinaryGraph, Pair, n_pairs
from .median import EdgeCountTable, MedianResult, rank_pairs


def _same_dim(a, b):
    if a.dim != b.dim:
        raise DimensionMismatch(f"dimension mismatch: {a.dim} vs {b.dim}")


def confusion(estimate: BinaryGraph, truth: BinaryGraph) -> tuple[int, int, int, int]:
    """``(tp, fp, fn, tn)`` over the upper-triangle node pairs."""
    _same_dim(estimate, truth)
    tp = len(estimate.edges & truth.edges)
    fp = len(estimate.edges) - tp
    fn = len(truth.edges) - tp
    tn = n_pairs(truth.dim) - tp - fp - fn
    return tp, fp, fn, tn


def f1_score(estimate: BinaryGraph, truth: BinaryGraph) -> float:
    tp, fp, fn, _ = confusion(estimate, truth)
    return 0.0 if tp == 0 else 2 * tp / (2 * tp + fp + fn)


@dataclass(frozen=True)
class RocCurve:
    """``points`` are ``(fpr, tpr, s)`` triples in sweep order."""

    points: tuple
    auc: float

    def to_csv(self) -> str:
        lines = ["s,fpr,tpr"]
        lines.extend(f"{s},{fpr:.17g},{tpr:.17g}" for fpr, tpr, s in self.points)
        lines.append(f"# auc={self.auc:.17g}")
        return "\n".join(lines) + "\n"


def trapezoid_auc(points) -> float:
    """Area under (fpr, tpr) points after sorting and adding the (0,0) and (1,1) corners."""
    pts = sorted({(0.0, 0.0), (1.0, 1.0), *((float(f), float(t)) for f, t in points)})
    area = 0.0
    for (x0, y0), (x1, y1) in zip(pts, pts[1:]):
        area += (x1 - x0) * (y0 + y1) / 2.0
    return area


def ranking_from_scores(scores) -> list[Pair]:
    """Pairs ordered by ``|scores[j, k]|`` descending, ties lexicographic."""
    return ranked_with_keys(np.asarray(scores, dtype=float))[0]


def ranked_with_keys(source, scores=None) -> tuple[list[Pair], list]:
    """Full ordering of node pairs plus the sort key of each pair.

    ``source`` may be a :class:`MedianResult` (counts, then its tie-break
    scores), an :class:`EdgeCountTable` (counts, then ``scores``), a
    ``d x d`` score matrix (ranked by magnitude), or an explicit list of
    pairs already in rank order (each pair then gets its own key).
    Pairs with equal keys are genuinely tied; they appear in
    lexicographic order.
    """
    if isinstance(source, MedianResult):
        table, scores = source.counts, (source.scores if scores is None else scores)
    elif isinstance(source, EdgeCountTable):
        table = source
    elif isinstance(source, np.ndarray):
        mag = np.abs(source)
        d = mag.shape[0]
        pairs = [(j, k) for j in range(d) for k in range(j + 1, d)]
        keys = {p: -mag[p] for p in pairs}
        ordered = sorted(pairs, key=keys.__getitem__)
        return ordered, [keys[p] for p in ordered]
    else:
        ordered = [tuple(p) for p in source]
        return ordered, list(range(len(ordered)))
    ordered = rank_pairs(table, scores)
    if scores is None:
        keys = [-table[p] for p in ordered]
    else:
        mag = np.asarray(scores, dtype=float)
        keys = [(-table[p], -mag[p]) for p in ordered]
    return ordered, keys


def edge_ranking(source, scores=None) -> list[Pair]:
    return ranked_with_keys(source, scores)[0]


def roc_sweep(source, truth: BinaryGraph, s_values: Sequence[int] | None = None, scores=None) -> RocCurve:
    """ROC of the top-``s`` graphs for each ``s`` in ``s_values`` (default: every s).

    When the top-``s`` cut falls inside a block of tied pairs the true
    positives are averaged over all orderings of that block, i.e. they
    grow linearly across the block. This keeps the curve independent of
    node labels.
    """
    ranking, keys = ranked_with_keys(source, scores)
    total = n_pairs(truth.dim)
    if len(ranking) != total or len(set(ranking)) != total:
        raise DimensionMismatch("ranking must order every node pair exactly once")
    positives = truth.edge_count
    negatives = total - positives
    if positives == 0 or negatives == 0:
        raise DataError("ROC needs a truth graph with at least one edge and one non-edge")

    # expected true positives among the first s ranked pairs, ties averaged
    expected = np.zeros(total + 1)
    start = 0
    found = 0
    while start < total:
        stop = start + 1
        while stop < total and keys[stop] == keys[start]:
            stop += 1
        block_hits = sum(ranking[i] in truth.edges for i in range(start, stop))
        width = stop - start
        for i in range(1, width + 1):
            expected[start + i] = found + block_hits * i / width
        found += block_hits
        start = stop

    s_values = range(total + 1) if s_values is None else s_values
    points = []
    for s in s_values:
        if not 0 <= s <= total:
            raise DataError(f"s={s} outside [0, {total}]")
        tp = float(expected[s])
        points.append(((s - tp) / negatives, tp / positives, int(s)))
    points.sort(key=lambda p: p[2])
    return RocCurve(tuple(points), trapezoid_auc([(f, t) for f, t, _ in points]))


@dataclass(frozen=True)
class DiffSummary:
    label1: str
    label2: str
    edges1: int
    edges2: int
    only_in_1: int
    only_in_2: int


def diff_summary(g1: BinaryGraph, label1: str, g2: BinaryGraph, label2: str) -> DiffSummary:
    _same_dim(g1, g2)
    shared = len(g1.edges & g2.edges)
    return DiffSummary(label1, label2, g1.edge_count, g2.edge_count, g1.edge_count - shared, g2.edge_count - shared)


def format_diff_table(rows: Sequence[tuple[str, DiffSummary]]) -> str:
    """Aligned text table with columns ``data | L1 | L2 | L1>L2 | L1<L2``.

    A new header line is emitted whenever the label pair changes.
    """
    out: list[list[str]] = []
    last = None
    for name, ds in rows:
        if (ds.label1, ds.label2) != last:
            l1, l2 = ds.label1, ds.label2
            out.append(["data", l1, l2, f"{l1}>{l2}", f"{l1}<{l2}"])
            last = (l1, l2)
        out.append([name, str(ds.edges1), str(ds.edges2), str(ds.only_in_1), str(ds.only_in_2)])
    if not out:
        return ""
    widths = [max(len(r[i]) for r in out) for i in range(5)]
    fmt = lambda r: "  ".join(c.ljust(widths[0]) if i == 0 else c.rjust(widths[i]) for i, c in enumerate(r))  # noqa: E731
    return "\n".join(fmt(r).rstrip() for r in out) + "\n"
