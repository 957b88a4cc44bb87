"""End-to-end estimation pipelines.

* ``kendall``: per dataset, Kendall's tau -> sine transform -> CLIME -> graph; then the sparse median.
* ``pearson``: the same with the Pearson correlation.
* ``np``: pool every row into one matrix, Pearson -> CLIME, keep the ``s`` largest ``|omega_jk|``.
"""
from __future__ import annotations

import enum
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from typing import Sequence

import numpy as np

from .clime import ClimeConfig, clime_estimate, graph_from_estimate, max_threads
from .errors import DegenerateColumn, Infeasible, InvalidSparsity, TieAtRankS
from .graph import BinaryGraph, DatasetCollection, hamming_distance, n_pairs
from .median import MedianResult, TiePolicy, edge_counts, sparse_median
from .rank import correlation
from .stars import StarsConfig, StarsResult, stars_select
from .synthetic import rng_for

_STREAM_STARS = 3


class PipelineKind(str, enum.Enum):
    NP = "np"
    PEARSON = "pearson"
    KENDALL = "kendall"

    @property
    def correlation_kind(self) -> str:
        return "kendall" if self is PipelineKind.KENDALL else "pearson"


@dataclass(frozen=True)
class DatasetFit:
    lam: float
    omega: np.ndarray
    graph: BinaryGraph
    stars: StarsResult | None = None


def _with_context(exc, t):
    if isinstance(exc, DegenerateColumn):
        new = DegenerateColumn(exc.column, f"dataset {t + 1}: {exc}")
    elif isinstance(exc, Infeasible):
        new = Infeasible(exc.column, f"dataset {t + 1}: {exc}")
    else:
        return exc
    new.dataset = t
    return new


def fit_dataset(
    data,
    corr_kind: str,
    lam: float | None = None,
    stars: StarsConfig | None = None,
    gamma: float = 0.0,
    zero_tol: float = 1e-8,
    rng: np.random.Generator | None = None,
    threads: int | None = None,
) -> DatasetFit:
    """Correlation, (optionally StARS-tuned) CLIME and thresholded graph for one dataset."""
    selection = None
    if lam is None:
        selection = stars_select(data, corr_kind, stars or StarsConfig(), rng, threads=threads)
        lam = selection.lam
    r = correlation(data, corr_kind)
    est = clime_estimate(r, ClimeConfig(lam=lam, gamma=gamma, zero_tol=zero_tol), threads=threads)
    graph = graph_from_estimate(est.values, gamma, zero_tol)
    return DatasetFit(float(lam), np.asarray(est.values), graph, selection)


def _lambdas_for(tuning, T):
    if isinstance(tuning, StarsConfig) or tuning is None:
        return [None] * T
    if np.isscalar(tuning):
        return [float(tuning)] * T
    lams = [float(v) for v in tuning]
    if len(lams) != T:
        raise ValueError(f"expected {T} lambda values, got {len(lams)}")
    return lams


def mean_abs_offdiag(omegas: Sequence[np.ndarray]) -> np.ndarray:
    score = np.mean([np.abs(o) for o in omegas], axis=0)
    np.fill_diagonal(score, 0.0)
    return score


def top_s_by_score(scores, s: int, tie_policy: TiePolicy | str = TiePolicy.ERROR):
    """The ``s`` pairs with largest ``|scores|``; returns the graph and any boundary tie set."""
    scores = np.abs(np.asarray(scores, dtype=float))
    d = scores.shape[0]
    total = n_pairs(d)
    if not 0 <= s <= total:
        raise InvalidSparsity(f"s={s} outside [0, {total}] for d={d}")
    pairs = [(j, k) for j in range(d) for k in range(j + 1, d)]
    ordered = sorted(pairs, key=lambda p: -scores[p])
    ties = ()
    if 0 < s < total and scores[ordered[s - 1]] == scores[ordered[s]]:
        boundary = scores[ordered[s - 1]]
        ties = tuple(p for p in ordered if scores[p] == boundary)
        if TiePolicy(tie_policy) is TiePolicy.ERROR:
            raise TieAtRankS(ties, s)
    return BinaryGraph(d, frozenset(ordered[:s])), ties


def run_pipeline(
    inputs: DatasetCollection | Sequence[np.ndarray],
    kind: PipelineKind | str,
    s: int,
    tuning: StarsConfig | float | Sequence[float] | None = None,
    tie_policy: TiePolicy | str = TiePolicy.ERROR,
    gamma: float = 0.0,
    zero_tol: float = 1e-8,
    seed: int = 0,
    threads: int | None = None,
) -> MedianResult:
    """Estimate the sparse median graph of ``inputs`` with one of the three pipelines.

    ``tuning`` is either a :class:`StarsConfig` (per-dataset StARS, the
    default), one fixed lambda for every dataset, or one lambda per
    dataset. The NP pipeline treats the pooled rows as a single dataset.
    StARS subsampling for dataset ``t`` draws from the stream
    ``(seed, 3, t)``.
    """
    if not isinstance(inputs, DatasetCollection):
        inputs = DatasetCollection(tuple(inputs))
    kind = PipelineKind(kind)
    threads = max_threads() if threads is None else threads
    stars_cfg = tuning if isinstance(tuning, StarsConfig) else None
    total = n_pairs(inputs.dim)
    if not 0 <= s <= total:
        raise InvalidSparsity(f"s={s} outside [0, {total}] for d={inputs.dim}")

    if kind is PipelineKind.NP:
        datasets = [inputs.pooled()]
        if stars_cfg is not None or tuning is None or np.isscalar(tuning):
            lams = _lambdas_for(tuning, 1)
        else:
            values = {float(v) for v in tuning}
            if len(values) != 1:
                raise ValueError("the NP pipeline pools the data and takes a single lambda")
            lams = [values.pop()]
    else:
        datasets = list(inputs.datasets)
        lams = _lambdas_for(tuning, len(datasets))

    def fit(t):
        try:
            return fit_dataset(datasets[t], kind.correlation_kind, lams[t], stars_cfg, gamma, zero_tol,
                               rng_for(seed, _STREAM_STARS, t), threads=1)
        except (DegenerateColumn, Infeasible) as exc:
            raise _with_context(exc, t) from exc

    if threads > 1 and len(datasets) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            fits = list(pool.map(fit, range(len(datasets))))
    else:
        fits = [fit(t) for t in range(len(datasets))]

    graphs = [f.graph for f in fits]
    scores = mean_abs_offdiag([f.omega for f in fits])
    if kind is PipelineKind.NP:
        graph, ties = top_s_by_score(scores, s, tie_policy)
        result = MedianResult(graph, s, edge_counts(graphs), ties,
                              (hamming_distance(graph, graphs[0]),), scores)
    else:
        result = sparse_median(graphs, s, tie_policy, scores)
    return replace(result, dataset_graphs=tuple(graphs), lambdas=tuple(f.lam for f in fits))


def ranking_source(result: MedianResult, kind: PipelineKind | str):
    """What to rank for an ROC sweep: raw ``|omega|`` for NP, counts then mean ``|omega|`` otherwise."""
    if PipelineKind(kind) is PipelineKind.NP:
        return np.asarray(result.scores)
    return result


PILOT_SEED_OFFSET = 1000


def pilot_lambda(
    inputs: DatasetCollection,
    kind: PipelineKind | str,
    stars: StarsConfig | None = None,
    seed: int = 0,
    threads: int | None = None,
) -> StarsResult:
    """One StARS run used to fix lambda for a batch of fast-mode runs.

    Kendall and Pearson tune on the first dataset; NP tunes on the pooled rows.
    """
    kind = PipelineKind(kind)
    if not isinstance(inputs, DatasetCollection):
        inputs = DatasetCollection(tuple(inputs))
    data = inputs.pooled() if kind is PipelineKind.NP else inputs[0]
    return stars_select(data, kind.correlation_kind, stars or StarsConfig(), rng_for(seed, _STREAM_STARS, 0),
                        threads=threads)
