"""Sparse median graph under Hamming distance.

Among all graphs with exactly ``s`` edges, the one minimizing the summed
Hamming distance to ``T`` input graphs is made of the ``s`` node pairs that
occur in the most inputs. The minimizer is unique exactly when the edge
counts do not tie across the rank-``s`` boundary.
"""
from __future__ import annotations

import enum
import itertools
import json
from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np

from .errors import DimensionMismatch, EmptyInput, InvalidSparsity, TieAtRankS, TooLarge
from .graph import BinaryGraph, Pair, hamming_distance, n_pairs


class TiePolicy(str, enum.Enum):
    ERROR = "error"
    LEXICOGRAPHIC = "lexicographic"
    # extension: order tied pairs by a continuous score (descending), then lexicographically
    SCORE = "score"


@dataclass(frozen=True)
class EdgeCountTable:
    """``counts[(j, k)]`` = number of the ``T`` graphs containing edge (j, k); zeros omitted."""

    dim: int
    T: int
    counts: Mapping[Pair, int] = field(default_factory=dict)

    def __post_init__(self):
        for pair, c in self.counts.items():
            if not 0 <= c <= self.T:
                raise ValueError(f"count {c} for pair {pair} outside [0, {self.T}]")

    def __getitem__(self, pair) -> int:
        j, k = pair
        return self.counts.get((min(j, k), max(j, k)), 0)

    def as_matrix(self) -> np.ndarray:
        m = np.zeros((self.dim, self.dim), dtype=np.int64)
        for (j, k), c in self.counts.items():
            m[j, k] = m[k, j] = c
        return m

    def pairs(self):
        """All upper-triangle pairs in lexicographic order."""
        return [(j, k) for j in range(self.dim) for k in range(j + 1, self.dim)]


def _check_graphs(graphs):
    graphs = list(graphs)
    if not graphs:
        raise EmptyInput("need at least one graph")
    dims = {g.dim for g in graphs}
    if len(dims) != 1:
        raise DimensionMismatch(f"graphs disagree on dimension: {sorted(dims)}")
    return graphs, dims.pop()


def edge_counts(graphs: Sequence[BinaryGraph]) -> EdgeCountTable:
    graphs, dim = _check_graphs(graphs)
    counts: dict[Pair, int] = {}
    for g in graphs:
        for e in g.edges:
            counts[e] = counts.get(e, 0) + 1
    return EdgeCountTable(dim, len(graphs), dict(sorted(counts.items())))


def rank_pairs(table: EdgeCountTable, scores=None) -> list[Pair]:
    """All pairs ordered by count (descending), then by ``scores`` (descending), then lexicographically."""
    pairs = table.pairs()
    if scores is None:
        return sorted(pairs, key=lambda p: -table[p])
    scores = np.asarray(scores, dtype=float)
    return sorted(pairs, key=lambda p: (-table[p], -scores[p[0], p[1]]))


@dataclass(frozen=True)
class MedianResult:
    """Sparse median graph with its supporting statistics.

    ``tie_report`` lists the pairs whose count equals the count at the
    rank-``s`` boundary when that boundary is tied; it is empty iff the
    median is unique. ``scores`` is the optional continuous tie-break
    matrix; ``dataset_graphs`` and ``lambdas`` are filled by the pipelines.
    """

    graph: BinaryGraph
    s: int
    counts: EdgeCountTable
    tie_report: tuple = ()
    per_dataset_distances: tuple = ()
    scores: np.ndarray | None = None
    dataset_graphs: tuple = ()
    lambdas: tuple = ()

    @property
    def T(self) -> int:
        return self.counts.T

    @property
    def identifiable(self) -> bool:
        return not self.tie_report

    def objective(self) -> int:
        return int(sum(self.per_dataset_distances))

    def to_dict(self) -> dict:
        return {
            "d": self.graph.dim,
            "s": self.s,
            "T": self.counts.T,
            "edges": [[j + 1, k + 1] for j, k in self.graph.sorted_edges()],
            "zeta": {f"{j + 1},{k + 1}": c for (j, k), c in sorted(self.counts.counts.items())},
            "ties": [[j + 1, k + 1] for j, k in self.tie_report],
            "distances": list(self.per_dataset_distances),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2) + "\n"


def median_from_json(text: str) -> tuple[BinaryGraph, EdgeCountTable, dict]:
    """Read back the graph and counts written by :meth:`MedianResult.to_json`."""
    obj = json.loads(text)
    d = int(obj["d"])
    graph = BinaryGraph.from_edges(d, ((j - 1, k - 1) for j, k in obj["edges"]))
    counts = {}
    for key, c in obj["zeta"].items():
        j, k = (int(v) - 1 for v in key.split(","))
        counts[(j, k)] = int(c)
    return graph, EdgeCountTable(d, int(obj["T"]), counts), obj


def sparse_median(
    graphs: Sequence[BinaryGraph],
    s: int,
    tie_policy: TiePolicy | str = TiePolicy.ERROR,
    scores=None,
) -> MedianResult:
    """Closed-form sparse median: keep the ``s`` most frequent edges.

    Parameters
    ----------
    graphs : sequence of BinaryGraph
        The ``T >= 1`` input graphs, all of the same dimension.
    s : int
        Exact number of edges of the result, ``0 <= s <= d(d-1)/2``.
    tie_policy : TiePolicy
        What to do when counts tie across the rank-``s`` boundary.
        ``ERROR`` raises :class:`TieAtRankS`; ``LEXICOGRAPHIC`` fills the
        remaining slots with tied pairs in (j, k) order; ``SCORE`` orders
        tied pairs by ``scores`` (a d x d matrix, larger first) and then
        lexicographically. Ties are reported in ``tie_report`` either way.
    """
    graphs, dim = _check_graphs(graphs)
    tie_policy = TiePolicy(tie_policy)
    total = n_pairs(dim)
    if not 0 <= s <= total:
        raise InvalidSparsity(f"s={s} outside [0, {total}] for d={dim}")
    if tie_policy is TiePolicy.SCORE and scores is None:
        raise ValueError("tie policy 'score' needs a score matrix")

    table = edge_counts(graphs)
    ordered = rank_pairs(table)  # stable: lexicographic within equal counts
    ties: tuple = ()
    if 0 < s < total:
        boundary = table[ordered[s - 1]]
        if table[ordered[s]] == boundary:
            ties = tuple(p for p in ordered if table[p] == boundary)
    if ties and tie_policy is TiePolicy.ERROR:
        raise TieAtRankS(ties, s)
    if tie_policy is TiePolicy.SCORE:
        ordered = rank_pairs(table, scores)

    graph = BinaryGraph(dim, frozenset(ordered[:s]))
    distances = tuple(hamming_distance(graph, g) for g in graphs)
    return MedianResult(
        graph=graph,
        s=s,
        counts=table,
        tie_report=ties,
        per_dataset_distances=distances,
        scores=None if scores is None else np.asarray(scores, dtype=float),
    )


def median_objective(candidate: BinaryGraph, graphs: Sequence[BinaryGraph]) -> int:
    return sum(hamming_distance(candidate, g) for g in graphs)


MAX_ORACLE_PAIRS = 15


def verify_median_oracle(graphs: Sequence[BinaryGraph], s: int, candidate: BinaryGraph) -> bool:
    """Exhaustively check that ``candidate`` minimizes the summed Hamming distance among s-edge graphs.

    Only feasible for tiny graphs: ``d(d-1)/2`` must not exceed 15.
    """
    graphs, dim = _check_graphs(graphs)
    pairs = [(j, k) for j in range(dim) for k in range(j + 1, dim)]
    if len(pairs) > MAX_ORACLE_PAIRS:
        raise TooLarge(f"{len(pairs)} node pairs exceed the enumeration budget of {MAX_ORACLE_PAIRS}")
    if candidate.dim != dim:
        raise DimensionMismatch("candidate dimension differs from the inputs")
    if not 0 <= s <= len(pairs):
        raise InvalidSparsity(f"s={s} outside [0, {len(pairs)}]")
    if candidate.edge_count != s:
        return False
    best = min(
        median_objective(BinaryGraph(dim, frozenset(sub)), graphs)
        for sub in itertools.combinations(pairs, s)
    )
    return median_objective(candidate, graphs) == best


def median_by_threshold(graphs: Sequence[BinaryGraph], min_count: int) -> MedianResult:
    """Extension: keep every edge present in at least ``min_count`` graphs (no fixed s)."""
    graphs, dim = _check_graphs(graphs)
    table = edge_counts(graphs)
    if min_count <= 0:
        graph = BinaryGraph.complete(dim)
    else:
        graph = BinaryGraph(dim, frozenset(p for p, c in table.counts.items() if c >= min_count))
    distances = tuple(hamming_distance(graph, g) for g in graphs)
    return MedianResult(graph, graph.edge_count, table, (), distances)
