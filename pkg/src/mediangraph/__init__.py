"""Sparse median graph estimation for multiple nonparanormal datasets.

Each dataset gets a rank-based (Kendall tau + sine transform) or Pearson
correlation, a CLIME precision estimate and a graph; the graphs are then
combined into the ``s``-edge graph closest to all of them in Hamming
distance.
"""
import os as _os

if "NUMBA_THREADING_LAYER" not in _os.environ:
    import numba as _numba

    _numba.config.THREADING_LAYER = "workqueue"

from .clime import ClimeConfig, clime_column, clime_estimate, graph_from_estimate, symmetrize_min_magnitude
from .errors import (
    DataError,
    DegenerateColumn,
    DimensionMismatch,
    EmptyInput,
    Infeasible,
    InsufficientData,
    InternalError,
    InvalidPattern,
    InvalidPerturbation,
    InvalidSparsity,
    MedianGraphError,
    NoStableLambda,
    NotPositiveDefinite,
    NumericalError,
    TieAtRankS,
    TooLarge,
)
from .evaluation import RocCurve, confusion, diff_summary, f1_score, format_diff_table, roc_sweep
from .graph import (
    BinaryGraph,
    ConcentrationEstimate,
    CorrelationMatrix,
    DatasetCollection,
    hamming_distance,
    read_edge_list,
    write_edge_list,
)
from .median import EdgeCountTable, MedianResult, TiePolicy, edge_counts, sparse_median, verify_median_oracle
from .pipeline import PipelineKind, ranking_source, run_pipeline
from .rank import kendall_tau_matrix, kendall_tau_pair, pearson_matrix, sine_transform, skeptic_correlation
from .stars import StarsConfig, StarsResult, stars_select
from .synthetic import GraphPattern, SyntheticScenario, generate_pattern, simulate

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
