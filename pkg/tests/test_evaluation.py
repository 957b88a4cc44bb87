import numpy as np
import pytest
from hypothesis import given, strategies as st

from mediangraph.errors import DataError, DimensionMismatch
from mediangraph.evaluation import (
    confusion,
    diff_summary,
    f1_score,
    format_diff_table,
    ranked_with_keys,
    roc_sweep,
    trapezoid_auc,
)
from mediangraph.graph import BinaryGraph, n_pairs
from mediangraph.median import edge_counts, sparse_median, TiePolicy


def g1(d, *edges):
    return BinaryGraph.from_edges(d, [(j - 1, k - 1) for j, k in edges])


def test_confusion_examples():
    truth = g1(4, (1, 2), (3, 4))
    assert confusion(g1(4, (1, 2), (1, 3)), truth) == (1, 1, 1, 3)
    tp, fp, fn, tn = confusion(truth, truth)
    assert fp == fn == 0
    tp, fp, fn, tn = confusion(truth.complement(), truth)
    assert tp == tn == 0
    with pytest.raises(DimensionMismatch):
        confusion(BinaryGraph.empty(3), truth)
    assert f1_score(g1(4, (1, 2), (1, 3)), truth) == 0.5
    assert f1_score(BinaryGraph.empty(4), truth) == 0.0


def test_roc_endpoints_and_perfect_ranking():
    truth = g1(5, (1, 2), (2, 3), (4, 5))
    # counts: truth edges in all T=3 graphs, nothing else
    table = edge_counts([truth] * 3)
    curve = roc_sweep(table, truth)
    first, last = curve.points[0], curve.points[-1]
    assert first == (0.0, 0.0, 0) and last == (1.0, 1.0, n_pairs(5))
    assert curve.auc == 1.0


def test_roc_reversed_ranking_has_zero_auc():
    truth = g1(4, (1, 2))
    scores = np.ones((4, 4))
    scores[0, 1] = scores[1, 0] = 0.0
    assert roc_sweep(scores, truth).auc == 0.0


def test_ties_are_averaged():
    # every pair tied: the expected curve is the diagonal
    truth = g1(4, (1, 2), (3, 4))
    curve = roc_sweep(np.zeros((4, 4)), truth)
    assert curve.auc == pytest.approx(0.5)
    for fpr, tpr, _ in curve.points:
        assert fpr == pytest.approx(tpr)


def test_roc_validation():
    truth = g1(3, (1, 2))
    with pytest.raises(DataError):
        roc_sweep(np.zeros((3, 3)), truth, [4])
    with pytest.raises(DataError):
        roc_sweep(np.zeros((3, 3)), BinaryGraph.empty(3))
    with pytest.raises(DimensionMismatch):
        roc_sweep([(0, 1)], truth)


def test_trapezoid_auc():
    assert trapezoid_auc([]) == 0.5
    assert trapezoid_auc([(0.0, 1.0)]) == 1.0
    assert trapezoid_auc([(0.5, 0.5)]) == 0.5


def test_ranked_keys_from_median_result():
    graphs = [g1(4, (1, 2), (1, 3)), g1(4, (1, 2)), g1(4, (1, 2), (3, 4))]
    scores = np.zeros((4, 4))
    scores[2, 3] = scores[3, 2] = 1.0
    res = sparse_median(graphs, 1, TiePolicy.SCORE, scores)
    ordered, keys = ranked_with_keys(res)
    assert ordered[:3] == [(0, 1), (2, 3), (0, 2)]
    assert keys[0] == (-3, 0.0)


@st.composite
def scored_instances(draw):
    d = draw(st.integers(3, 8))
    scores = np.array(draw(st.lists(st.integers(0, 4), min_size=d * d, max_size=d * d)), dtype=float).reshape(d, d)
    scores = scores + scores.T
    pairs = [(j, k) for j in range(d) for k in range(j + 1, d)]
    mask = draw(st.lists(st.booleans(), min_size=len(pairs), max_size=len(pairs)).filter(lambda m: 0 < sum(m) < len(m)))
    truth = BinaryGraph(d, frozenset(p for p, m in zip(pairs, mask) if m))
    return scores, truth


@given(scored_instances())
def test_rates_nondecreasing_in_s(inst):
    scores, truth = inst
    pts = roc_sweep(scores, truth).points
    fprs = [p[0] for p in pts]
    tprs = [p[1] for p in pts]
    assert all(a <= b + 1e-12 for a, b in zip(fprs, fprs[1:]))
    assert all(a <= b + 1e-12 for a, b in zip(tprs, tprs[1:]))
    assert all(0 <= v <= 1 for v in fprs + tprs)


@given(scored_instances(), st.randoms())
def test_auc_invariant_under_relabeling(inst, rnd):
    scores, truth = inst
    d = truth.dim
    perm = list(range(d))
    rnd.shuffle(perm)
    inv = np.argsort(perm)
    permuted = scores[np.ix_(inv, inv)]
    assert roc_sweep(permuted, truth.relabel(perm)).auc == pytest.approx(roc_sweep(scores, truth).auc, abs=1e-12)


def test_diff_summary_examples():
    a = g1(5, (1, 2), (2, 3), (3, 4))
    b = g1(5, (1, 5), (2, 5), (3, 5), (4, 5))
    ds = diff_summary(a, "A", b, "C")
    assert (ds.edges1, ds.edges2, ds.only_in_1, ds.only_in_2) == (3, 4, 3, 4)
    same = diff_summary(a, "A", a, "C")
    assert same.only_in_1 == same.only_in_2 == 0
    back = diff_summary(b, "C", a, "A")
    assert (back.only_in_1, back.only_in_2) == (ds.only_in_2, ds.only_in_1)


def test_diff_table_layout():
    a, b = g1(4, (1, 2), (2, 3)), g1(4, (2, 3), (3, 4), (1, 4))
    rows = [("whole", diff_summary(a, "A", b, "C")), ("male", diff_summary(b, "A", a, "C")),
            ("case", diff_summary(a, "M", b, "F"))]
    assert format_diff_table(rows) == (
        "data   A  C  A>C  A<C\n"
        "whole  2  3    1    2\n"
        "male   3  2    2    1\n"
        "data   M  F  M>F  M<F\n"
        "case   2  3    1    2\n"
    )


def test_roc_csv_format():
    truth = g1(3, (1, 2))
    scores = np.array([[0, 3, 1], [3, 0, 2], [1, 2, 0]], dtype=float)
    assert roc_sweep(scores, truth).to_csv() == "s,fpr,tpr\n0,0,0\n1,0,1\n2,0.5,1\n3,1,1\n# auc=1\n"
