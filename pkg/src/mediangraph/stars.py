"""StARS: choose the CLIME tuning value by subsampling stability.

For each candidate ``lam`` (largest first), estimate a graph on ``N``
subsamples of size ``b`` drawn without replacement, and compute the mean
edge instability ``D(lam) = mean_{j<k} 2 theta_jk (1 - theta_jk)``, where
``theta_jk`` is the fraction of subsample graphs containing edge (j, k).
After monotonizing (``Dbar(lam) = max_{lam' >= lam} D(lam')``) the selected
value is the least regularization that is still stable: the smallest grid
``lam`` with ``Dbar(lam) <= beta``.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .clime import clime_estimate, graph_from_estimate
from .errors import DataError, NoStableLambda
from .rank import correlation


def default_lambda_grid(count: int = 30, lo: float = 0.01, hi: float = 1.0) -> tuple[float, ...]:
    return tuple(float(v) for v in np.geomspace(hi, lo, count))


@dataclass(frozen=True)
class StarsConfig:
    n_subsamples: int = 20
    subsample_size: int | None = None
    beta: float = 0.05
    lambda_grid: tuple = default_lambda_grid()

    def __post_init__(self):
        grid = tuple(float(v) for v in self.lambda_grid)
        object.__setattr__(self, "lambda_grid", grid)
        if self.n_subsamples < 2:
            raise DataError("StARS needs at least 2 subsamples")
        if not 0 < self.beta < 0.5:
            raise DataError("beta must lie in (0, 0.5)")
        if not grid or any(v <= 0 for v in grid):
            raise DataError("lambda grid must be nonempty and positive")
        if any(a <= b for a, b in zip(grid, grid[1:])):
            raise DataError("lambda grid must be strictly descending")

    def size_for(self, n: int) -> int:
        """Subsample size for ``n`` rows: default ``min(floor(10 sqrt(n)), floor(0.8 n))``, never above ``n - 1``.

        The ``0.8 n`` cap keeps small samples from subsampling almost every row,
        which would make every lambda look stable.
        """
        if self.subsample_size is not None:
            b = self.subsample_size
        else:
            b = min(int(math.floor(10 * math.sqrt(n))), int(math.floor(0.8 * n)))
        b = min(b, n - 1)
        if b < 2:
            raise DataError(f"subsample size {b} is too small (n={n})")
        return b


@dataclass(frozen=True)
class StarsResult:
    lam: float
    no_stable: bool
    grid: tuple
    instability: tuple
    monotone_instability: tuple


def edge_instability(frequencies) -> np.ndarray:
    """Per-pair ``2 theta (1 - theta)``; always within [0, 0.5]."""
    theta = np.asarray(frequencies, dtype=float)
    return 2.0 * theta * (1.0 - theta)


def total_instability(frequencies) -> float:
    """Mean instability over the upper-triangle pairs of a ``d x d`` frequency matrix."""
    theta = np.asarray(frequencies, dtype=float)
    iu = np.triu_indices(theta.shape[0], k=1)
    return float(np.mean(edge_instability(theta[iu]))) if iu[0].size else 0.0


def stars_select(
    data,
    correlation_kind: str,
    cfg: StarsConfig | None = None,
    rng: np.random.Generator | None = None,
    threads: int | None = None,
) -> StarsResult:
    """Select a CLIME tuning value for one dataset.

    The grid is scanned from the largest value down and the scan stops at
    the first value whose monotonized instability exceeds ``beta``; every
    smaller value would exceed it as well, so the selection is unchanged.
    When even the first grid value is unstable the smallest grid value is
    returned with ``no_stable=True`` and a :class:`NoStableLambda` warning.
    """
    cfg = cfg or StarsConfig()
    rng = rng if rng is not None else np.random.default_rng(0)
    data = np.asarray(data, dtype=float)
    n, d = data.shape
    b = cfg.size_for(n)
    subsets = [np.sort(rng.choice(n, size=b, replace=False)) for _ in range(cfg.n_subsamples)]
    corrs = [correlation(data[idx], correlation_kind) for idx in subsets]

    raw, mono = [], []
    running = 0.0
    selected = None
    for lam in cfg.lambda_grid:
        freq = np.zeros((d, d))
        for r in corrs:
            freq += graph_from_estimate(clime_estimate(r, lam, threads=threads)).adjacency(dtype=float)
        freq /= len(corrs)
        value = total_instability(freq)
        running = max(running, value)
        raw.append(value)
        mono.append(running)
        if running > cfg.beta:
            break
        selected = lam

    no_stable = selected is None
    if no_stable:
        selected = cfg.lambda_grid[-1]
        warnings.warn(f"no lambda on the grid has instability <= {cfg.beta}; using {selected}", NoStableLambda)
    return StarsResult(selected, no_stable, cfg.lambda_grid, tuple(raw), tuple(mono))
