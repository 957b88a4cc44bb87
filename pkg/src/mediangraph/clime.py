"""CLIME: constrained l1 minimization for inverse correlation estimation.

For a correlation estimate ``R`` and tuning value ``lam`` each column of the
precision estimate solves::

    minimize ||beta||_1   subject to   ||R beta - e_j||_inf <= lam

as a linear program in the split variables ``beta = u - v`` with
``u, v >= 0`` (2d variables, 2d inequality rows). The d columns are then
symmetrized by keeping the smaller-magnitude entry of each mirrored pair.
"""
from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import _simplex
from .errors import DataError, Infeasible, InternalError
from .graph import BinaryGraph, ConcentrationEstimate


@dataclass(frozen=True)
class ClimeConfig:
    lam: float
    gamma: float = 0.0
    feasibility_tol: float = 1e-8
    zero_tol: float = 1e-8

    def __post_init__(self):
        if not self.lam >= 0:
            raise DataError(f"lambda must be nonnegative, got {self.lam}")
        if not self.gamma >= 0:
            raise DataError(f"gamma must be nonnegative, got {self.gamma}")
        if not (self.feasibility_tol > 0 and self.zero_tol > 0):
            raise DataError("tolerances must be positive")


_PIVOT_TOL = 1e-9


def max_threads() -> int:
    """Worker cap from ``MGK_THREADS`` (default 1)."""
    try:
        return max(1, int(os.environ.get("MGK_THREADS", "1")))
    except ValueError:
        return 1


def _lp_pieces(r):
    r = np.ascontiguousarray(np.asarray(r, dtype=float))
    a_ub = np.block([[r, -r], [-r, r]])
    return r, a_ub


def _solve_column(r, a_ub, j, lam, feasibility_tol):
    d = r.shape[0]
    e = np.zeros(d)
    e[j] = 1.0
    b = np.concatenate([e + lam, lam - e])
    c = np.ones(2 * d)
    status, x, _, _ = _simplex.dual_simplex(
        a_ub, b, c, _PIVOT_TOL, feasibility_tol / 10.0, 50 * (4 * d + 10)
    )
    if status == _simplex.INFEASIBLE:
        raise Infeasible(j)
    if status != _simplex.OPTIMAL:
        raise InternalError(f"simplex iteration limit reached on column {j + 1}")
    beta = x[:d] - x[d:]
    residual = np.max(np.abs(r @ beta - e))
    if residual > lam + feasibility_tol:
        raise InternalError(
            f"column {j + 1}: constraint violated by {residual - lam:.3e} after solve"
        )
    return beta


def clime_column(r, j: int, lam: float, feasibility_tol: float = 1e-8) -> np.ndarray:
    """Solve the CLIME linear program for column ``j`` (0-based)."""
    r, a_ub = _lp_pieces(r)
    d = r.shape[0]
    if not 0 <= j < d:
        raise DataError(f"column index {j} out of range for dimension {d}")
    if lam < 0:
        raise DataError("lambda must be nonnegative")
    return _solve_column(r, a_ub, j, float(lam), feasibility_tol)


def clime_columns(r, lam: float, feasibility_tol: float = 1e-8, threads: int | None = None):
    """All raw (unsymmetrized) column solutions stacked as a ``d x d`` matrix."""
    r, a_ub = _lp_pieces(r)
    d = r.shape[0]
    lam = float(lam)
    threads = max_threads() if threads is None else threads
    solve = lambda j: _solve_column(r, a_ub, j, lam, feasibility_tol)  # noqa: E731
    if threads > 1 and d > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            cols = list(pool.map(solve, range(d)))
    else:
        cols = [solve(j) for j in range(d)]
    return np.column_stack(cols)


def symmetrize_min_magnitude(raw) -> np.ndarray:
    """Keep, for each (j, k), whichever of raw[j, k] and raw[k, j] is smaller in magnitude.

    An exact magnitude tie keeps the upper-triangle entry ``raw[j, k]`` (j < k).
    """
    raw = np.asarray(raw, dtype=float)
    upper = np.triu(raw, 1)
    lower_t = np.triu(raw.T, 1)
    keep_upper = np.abs(upper) <= np.abs(lower_t)
    sym = np.where(keep_upper, upper, lower_t)
    sym = sym + sym.T
    np.fill_diagonal(sym, np.diag(raw))
    return sym


def clime_estimate(r, cfg: ClimeConfig | float, threads: int | None = None) -> ConcentrationEstimate:
    """Column-wise CLIME solve followed by min-magnitude symmetrization."""
    if not isinstance(cfg, ClimeConfig):
        cfg = ClimeConfig(lam=float(cfg))
    raw = clime_columns(r, cfg.lam, cfg.feasibility_tol, threads)
    objective = np.abs(raw).sum(axis=0)
    raw.setflags(write=False)
    objective.setflags(write=False)
    return ConcentrationEstimate(symmetrize_min_magnitude(raw), cfg.lam, raw, objective)


def graph_from_estimate(omega, gamma: float = 0.0, zero_tol: float = 1e-8) -> BinaryGraph:
    """Edge (j, k) iff ``|omega[j, k]| > max(gamma, zero_tol)``; the diagonal is ignored."""
    values = np.asarray(omega, dtype=float)
    if values.ndim != 2 or values.shape[0] != values.shape[1]:
        raise DataError("omega must be a square matrix")
    if not np.array_equal(values, values.T):
        raise DataError("omega must be symmetric")
    cut = max(gamma, zero_tol)
    return BinaryGraph.from_adjacency(np.abs(values) > cut)
