import numpy as np
import pytest

from mediangraph.clime import clime_estimate, graph_from_estimate
from mediangraph.errors import DegenerateColumn, InvalidSparsity, TieAtRankS
from mediangraph.graph import DatasetCollection, hamming_distance
from mediangraph.median import TiePolicy
from mediangraph.pipeline import PipelineKind, fit_dataset, pilot_lambda, ranking_source, run_pipeline, top_s_by_score
from mediangraph.rank import correlation
from mediangraph.stars import StarsConfig, default_lambda_grid
from mediangraph.synthetic import SyntheticScenario, simulate


@pytest.fixture(scope="module")
def sim():
    return simulate(SyntheticScenario(d=12, T=3, n=80, pattern="banded", perturb_edges=3, seed=3))


def test_single_dataset_median_is_its_graph(sim):
    x = sim.datasets[0]
    res = run_pipeline([x], "kendall", 5, tuning=0.2, tie_policy="score")
    g = graph_from_estimate(clime_estimate(correlation(x, "kendall"), 0.2))
    assert res.graph.edges <= g.edges or g.edge_count < 5
    top = sorted(g.edges, key=lambda p: -abs(res.scores[p]))[:5]
    assert res.graph.edges == frozenset(top)


def test_identical_datasets(sim):
    x = sim.datasets[0]
    res = run_pipeline([x, x, x], "pearson", 6, tuning=0.2, tie_policy="score")
    assert len(set(res.dataset_graphs)) == 1
    single = run_pipeline([x], "pearson", 6, tuning=0.2, tie_policy="score")
    assert res.graph == single.graph


def test_np_pools_rows(sim):
    res = run_pipeline(sim.datasets, "np", sim.s, tuning=0.15, tie_policy="score")
    assert res.T == 1 and len(res.lambdas) == 1
    omega = clime_estimate(correlation(sim.datasets.pooled(), "pearson"), 0.15).values
    assert np.array_equal(res.scores, np.abs(omega) - np.diag(np.abs(np.diag(omega))))
    with pytest.raises(ValueError):
        run_pipeline(sim.datasets, "np", sim.s, tuning=[0.1, 0.2, 0.3])


def test_per_dataset_lambdas_and_errors(sim):
    res = run_pipeline(sim.datasets, "kendall", sim.s, tuning=[0.1, 0.2, 0.3], tie_policy="score")
    assert res.lambdas == (0.1, 0.2, 0.3)
    with pytest.raises(InvalidSparsity):
        run_pipeline(sim.datasets, "kendall", 1000, tuning=0.2)
    with pytest.raises(TieAtRankS):
        run_pipeline(sim.datasets, "kendall", 3, tuning=0.99)


def test_degenerate_column_carries_dataset(sim):
    bad = np.array(sim.datasets[1])
    bad[:, 4] = 1.0
    with pytest.raises(DegenerateColumn) as info:
        run_pipeline([sim.datasets[0], bad], "pearson", 3, tuning=0.2)
    assert info.value.column == 4 and info.value.dataset == 1


def test_stars_tuning_is_seeded(sim):
    cfg = StarsConfig(n_subsamples=4, lambda_grid=default_lambda_grid(6, 0.05, 0.8))
    a = run_pipeline(sim.datasets, "kendall", sim.s, tuning=cfg, tie_policy="score", seed=1)
    b = run_pipeline(sim.datasets, "kendall", sim.s, tuning=cfg, tie_policy="score", seed=1)
    assert a.lambdas == b.lambdas and a.graph == b.graph
    assert pilot_lambda(sim.datasets, "np", cfg).lam in cfg.lambda_grid


def test_threads_do_not_change_result(sim):
    a = run_pipeline(sim.datasets, "kendall", sim.s, tuning=0.2, tie_policy="score", threads=1)
    b = run_pipeline(sim.datasets, "kendall", sim.s, tuning=0.2, tie_policy="score", threads=3)
    assert a.graph == b.graph and np.array_equal(a.scores, b.scores)


def test_top_s_by_score_ties():
    scores = np.array([[0, 2, 1, 1], [2, 0, 0, 0], [1, 0, 0, 0], [1, 0, 0, 0]], dtype=float)
    g, ties = top_s_by_score(scores, 1)
    assert g.edges == {(0, 1)} and ties == ()
    with pytest.raises(TieAtRankS):
        top_s_by_score(scores, 2)
    g, ties = top_s_by_score(scores, 2, TiePolicy.LEXICOGRAPHIC)
    assert g.edges == {(0, 1), (0, 2)} and set(ties) == {(0, 2), (0, 3)}


def test_ranking_source(sim):
    res = run_pipeline(sim.datasets, "np", sim.s, tuning=0.2, tie_policy="score")
    assert isinstance(ranking_source(res, PipelineKind.NP), np.ndarray)
    res = run_pipeline(sim.datasets, "kendall", sim.s, tuning=0.2, tie_policy="score")
    assert ranking_source(res, "kendall") is res


def test_pipelines_agree_on_large_gaussian_sample():
    sim = simulate(SyntheticScenario(d=10, T=1, n=5000, perturb_edges=0, transform="gaussian", seed=0))
    graphs = {k: run_pipeline(sim.datasets, k, sim.s, tuning=0.1, tie_policy="score").graph for k in PipelineKind}
    kinds = list(graphs)
    for i, a in enumerate(kinds):
        for b in kinds[i + 1:]:
            shared = len(graphs[a].edges & graphs[b].edges)
            assert shared >= 0.95 * sim.s
