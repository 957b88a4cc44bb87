"""Graph and matrix value types shared by the rest of the package.

Node indices are 0-based in memory. Every external format (edge lists,
JSON) uses 1-based indices.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .errors import DimensionMismatch, InsufficientData, DataError

Pair = tuple[int, int]


def n_pairs(dim: int) -> int:
    return dim * (dim - 1) // 2


def _canonical(j: int, k: int) -> Pair:
    j, k = int(j), int(k)
    return (j, k) if j < k else (k, j)


@dataclass(frozen=True)
class BinaryGraph:
    """Undirected simple graph on ``dim`` nodes stored as a set of pairs ``(j, k)``, ``j < k``."""

    dim: int
    edges: frozenset = field(default_factory=frozenset)

    def __post_init__(self):
        if self.dim < 1:
            raise DataError(f"graph dimension must be positive, got {self.dim}")
        edges = frozenset(_canonical(j, k) for j, k in self.edges)
        for j, k in edges:
            if j == k:
                raise DataError(f"self-loop at node {j + 1}")
            if j < 0 or k >= self.dim:
                raise DataError(f"edge ({j + 1},{k + 1}) outside a graph of dimension {self.dim}")
        object.__setattr__(self, "edges", edges)

    @classmethod
    def from_edges(cls, dim: int, edges: Iterable[Sequence[int]]) -> "BinaryGraph":
        return cls(dim, frozenset(_canonical(j, k) for j, k in edges))

    @classmethod
    def from_adjacency(cls, adj) -> "BinaryGraph":
        """Build from a square 0/1 (or boolean) matrix; only the upper triangle is read."""
        adj = np.asarray(adj)
        if adj.ndim != 2 or adj.shape[0] != adj.shape[1]:
            raise DimensionMismatch(f"adjacency must be square, got shape {adj.shape}")
        rows, cols = np.nonzero(np.triu(adj != 0, k=1))
        return cls(adj.shape[0], frozenset(zip(rows.tolist(), cols.tolist())))

    @classmethod
    def empty(cls, dim: int) -> "BinaryGraph":
        return cls(dim)

    @classmethod
    def complete(cls, dim: int) -> "BinaryGraph":
        return cls(dim, frozenset((j, k) for j in range(dim) for k in range(j + 1, dim)))

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    def sorted_edges(self) -> list[Pair]:
        return sorted(self.edges)

    def adjacency(self, dtype=np.int8) -> np.ndarray:
        adj = np.zeros((self.dim, self.dim), dtype=dtype)
        if self.edges:
            idx = np.array(self.sorted_edges())
            adj[idx[:, 0], idx[:, 1]] = 1
            adj[idx[:, 1], idx[:, 0]] = 1
        return adj

    def complement(self) -> "BinaryGraph":
        return BinaryGraph(self.dim, BinaryGraph.complete(self.dim).edges - self.edges)

    def symmetric_difference(self, other: "BinaryGraph") -> "BinaryGraph":
        _check_same_dim(self, other)
        return BinaryGraph(self.dim, self.edges ^ other.edges)

    def relabel(self, perm: Sequence[int]) -> "BinaryGraph":
        """Return the graph with node ``i`` renamed to ``perm[i]``."""
        perm = list(perm)
        if sorted(perm) != list(range(self.dim)):
            raise DataError("relabel expects a permutation of range(dim)")
        return BinaryGraph.from_edges(self.dim, ((perm[j], perm[k]) for j, k in self.edges))

    def __contains__(self, pair) -> bool:
        return _canonical(*pair) in self.edges

    def __len__(self) -> int:
        return len(self.edges)


def _check_same_dim(a, b):
    if a.dim != b.dim:
        raise DimensionMismatch(f"dimension mismatch: {a.dim} vs {b.dim}")


def hamming_distance(a: BinaryGraph, b: BinaryGraph) -> int:
    """Number of upper-triangle pairs on which the two graphs disagree."""
    _check_same_dim(a, b)
    return len(a.edges ^ b.edges)


def edge_count(g: BinaryGraph) -> int:
    return len(g.edges)


class _SquareMatrix:
    values: np.ndarray

    @property
    def dim(self) -> int:
        return self.values.shape[0]

    def __array__(self, dtype=None, copy=None):
        return self.values if dtype is None else self.values.astype(dtype)


@dataclass(frozen=True, eq=False)
class CorrelationMatrix(_SquareMatrix):
    """Symmetric matrix with unit diagonal and entries in [-1, 1].

    The constructor validates the invariants and stores a read-only copy.
    Positive definiteness is *not* required: a sine-transformed Kendall
    matrix can be indefinite.
    """

    values: np.ndarray
    atol: float = 1e-10

    def __post_init__(self):
        v = np.array(self.values, dtype=float)
        if v.ndim != 2 or v.shape[0] != v.shape[1]:
            raise DimensionMismatch(f"correlation matrix must be square, got {v.shape}")
        if not np.all(np.isfinite(v)):
            raise DataError("correlation matrix has non-finite entries")
        if np.max(np.abs(v - v.T), initial=0.0) > self.atol:
            raise DataError("correlation matrix is not symmetric")
        if np.max(np.abs(np.diag(v) - 1.0), initial=0.0) > self.atol:
            raise DataError("correlation matrix must have unit diagonal")
        if np.max(np.abs(v), initial=0.0) > 1.0 + self.atol:
            raise DataError("correlation entries must lie in [-1, 1]")
        v = (v + v.T) / 2.0
        np.fill_diagonal(v, 1.0)
        v = np.clip(v, -1.0, 1.0)
        v.setflags(write=False)
        object.__setattr__(self, "values", v)


@dataclass(frozen=True, eq=False)
class ConcentrationEstimate(_SquareMatrix):
    """Symmetrized CLIME estimate of an inverse correlation matrix.

    ``raw`` keeps the column-wise LP solutions before symmetrization and
    ``objective`` the optimal l1 norm of each column.
    """

    values: np.ndarray
    lam: float
    raw: np.ndarray | None = None
    objective: np.ndarray | None = None

    def __post_init__(self):
        v = np.array(self.values, dtype=float)
        if v.ndim != 2 or v.shape[0] != v.shape[1]:
            raise DimensionMismatch(f"concentration estimate must be square, got {v.shape}")
        if not np.array_equal(v, v.T):
            raise DataError("concentration estimate must be symmetric")
        if self.lam < 0:
            raise DataError("lambda must be nonnegative")
        v.setflags(write=False)
        object.__setattr__(self, "values", v)


@dataclass(frozen=True)
class DatasetCollection:
    """T observation matrices over a shared set of ``dim`` variables."""

    datasets: tuple
    labels: tuple | None = None

    def __post_init__(self):
        arrays = tuple(np.asarray(x, dtype=float) for x in self.datasets)
        if not arrays:
            raise InsufficientData("a dataset collection needs at least one dataset")
        dims = {x.shape[1] if x.ndim == 2 else -1 for x in arrays}
        if -1 in dims:
            raise DimensionMismatch("every dataset must be a 2-d array (n_t x d)")
        if len(dims) != 1:
            raise DimensionMismatch(f"datasets disagree on dimension: {sorted(dims)}")
        for t, x in enumerate(arrays):
            if x.shape[0] < 2:
                raise InsufficientData(f"dataset {t + 1} has {x.shape[0]} observation(s); need >= 2")
            if not np.all(np.isfinite(x)):
                raise DataError(f"dataset {t + 1} contains non-finite values")
        for x in arrays:
            x.setflags(write=False)
        object.__setattr__(self, "datasets", arrays)
        if self.labels is not None:
            labels = tuple(str(s) for s in self.labels)
            if len(labels) != len(arrays):
                raise DataError("one label per dataset is required")
            object.__setattr__(self, "labels", labels)

    @property
    def dim(self) -> int:
        return self.datasets[0].shape[1]

    @property
    def T(self) -> int:
        return len(self.datasets)

    @property
    def sizes(self) -> list[int]:
        return [x.shape[0] for x in self.datasets]

    def pooled(self) -> np.ndarray:
        return np.vstack(self.datasets)

    def __len__(self):
        return len(self.datasets)

    def __iter__(self):
        return iter(self.datasets)

    def __getitem__(self, t):
        return self.datasets[t]


# -- edge-list text format ---------------------------------------------------

def format_edge_list(g: BinaryGraph) -> str:
    lines = [f"# d={g.dim} s={g.edge_count}"]
    lines.extend(f"{j + 1} {k + 1}" for j, k in g.sorted_edges())
    return "\n".join(lines) + "\n"


def parse_edge_list(text: str) -> BinaryGraph:
    lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
    if not lines or not lines[0].startswith("#"):
        raise DataError("edge list must start with a '# d=<dim> s=<count>' header")
    header = dict(tok.split("=", 1) for tok in lines[0].lstrip("#").split() if "=" in tok)
    try:
        dim, s = int(header["d"]), int(header["s"])
    except (KeyError, ValueError) as exc:
        raise DataError(f"bad edge list header: {lines[0]!r}") from exc
    edges = []
    for ln in lines[1:]:
        if ln.startswith("#"):
            continue
        parts = ln.split()
        if len(parts) != 2:
            raise DataError(f"bad edge line: {ln!r}")
        j, k = int(parts[0]), int(parts[1])
        if not 1 <= j < k <= dim:
            raise DataError(f"edge line {ln!r} violates 1 <= j < k <= d")
        edges.append((j - 1, k - 1))
    g = BinaryGraph.from_edges(dim, edges)
    if g.edge_count != s or len(edges) != s:
        raise DataError(f"header declares s={s} but the list has {len(edges)} edge(s)")
    return g


def write_edge_list(g: BinaryGraph, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(format_edge_list(g))


def read_edge_list(path) -> BinaryGraph:
    with open(path, encoding="utf-8") as fh:
        return parse_edge_list(fh.read())
