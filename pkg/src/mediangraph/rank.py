"""Rank correlation: Kendall's tau, its sine transform, and Pearson correlation.

Kendall's tau uses the tau-a convention (no tie correction)::

    tau(x, y) = sum_{i < i'} sign(x_i - x_i') * sign(y_i - y_i') / (n (n - 1) / 2)

The pairwise sum is an integer that we obtain with Knight's merge-sort
inversion count in O(n log n). Because it is computed exactly in integer
arithmetic, the result matches the quadratic definition bit for bit.
"""
from __future__ import annotations

import threading
from dataclasses import dataclass

import numpy as np
from numba import njit, prange

from .errors import DegenerateColumn, DimensionMismatch, InsufficientData
from .graph import CorrelationMatrix


@njit(cache=True)
def _merge_count_inversions(a):
    """Sort ``a`` in place; return the number of pairs i < j with a[i] > a[j]."""
    n = a.shape[0]
    buf = np.empty_like(a)
    inversions = 0
    width = 1
    while width < n:
        lo = 0
        while lo < n - width:
            mid = lo + width
            hi = min(lo + 2 * width, n)
            i, j, k = lo, mid, lo
            while i < mid and j < hi:
                if a[j] < a[i]:
                    buf[k] = a[j]
                    inversions += mid - i
                    j += 1
                else:
                    buf[k] = a[i]
                    i += 1
                k += 1
            while i < mid:
                buf[k] = a[i]
                i += 1
                k += 1
            while j < hi:
                buf[k] = a[j]
                j += 1
                k += 1
            for m in range(lo, hi):
                a[m] = buf[m]
            lo += 2 * width
        width *= 2
    return inversions


@njit(cache=True)
def _tied_pairs(sorted_values):
    total = 0
    n = sorted_values.shape[0]
    i = 0
    while i < n:
        j = i + 1
        while j < n and sorted_values[j] == sorted_values[i]:
            j += 1
        t = j - i
        total += t * (t - 1) // 2
        i = j
    return total


@njit(cache=True)
def _concordance_score(x, y):
    """Integer sum of sign(dx) * sign(dy) over all unordered observation pairs."""
    n = x.shape[0]
    order = np.argsort(y, kind="mergesort")
    order = order[np.argsort(x[order], kind="mergesort")]
    xs = x[order]
    ys = y[order].copy()

    n0 = n * (n - 1) // 2
    ties_x = 0
    ties_xy = 0
    i = 0
    while i < n:
        j = i + 1
        while j < n and xs[j] == xs[i]:
            j += 1
        t = j - i
        ties_x += t * (t - 1) // 2
        # y is sorted inside each block of tied x
        a = i
        while a < j:
            b = a + 1
            while b < j and ys[b] == ys[a]:
                b += 1
            u = b - a
            ties_xy += u * (u - 1) // 2
            a = b
        i = j

    discordant = _merge_count_inversions(ys)
    ties_y = _tied_pairs(ys)
    return n0 - ties_x - ties_y + ties_xy - 2 * discordant


@njit(cache=True, parallel=True)
def _concordance_matrix(data):
    n, d = data.shape
    m = d * (d - 1) // 2
    rows = np.empty(m, dtype=np.int64)
    cols = np.empty(m, dtype=np.int64)
    p = 0
    for j in range(d):
        for k in range(j + 1, d):
            rows[p] = j
            cols[p] = k
            p += 1
    out = np.zeros((d, d), dtype=np.int64)
    for p in prange(m):
        j = rows[p]
        k = cols[p]
        score = _concordance_score(data[:, j].copy(), data[:, k].copy())
        out[j, k] = score
        out[k, j] = score
    return out


# the workqueue threading layer cannot run two parallel kernels at once
_PARALLEL_LOCK = threading.Lock()


def _as_vector(x, name):
    x = np.ascontiguousarray(x, dtype=np.float64)
    if x.ndim != 1:
        raise DimensionMismatch(f"{name} must be one-dimensional")
    return x


def concordance_score(x, y) -> int:
    """Exact integer ``sum_{i<i'} sign(x_i - x_i') sign(y_i - y_i')``."""
    x = _as_vector(x, "x")
    y = _as_vector(y, "y")
    if x.shape != y.shape:
        raise DimensionMismatch(f"length mismatch: {x.shape[0]} vs {y.shape[0]}")
    if x.shape[0] < 2:
        raise InsufficientData("Kendall's tau needs at least two observations")
    return int(_concordance_score(x, y))


def kendall_tau_pair(x, y) -> float:
    """Kendall's tau-a between two equally long samples (n >= 2)."""
    n = np.shape(x)[0]
    score = concordance_score(x, y)
    return score / (n * (n - 1) // 2)


@dataclass(frozen=True, eq=False)
class KendallTauMatrix:
    """Pairwise Kendall's tau between columns.

    ``scores`` holds the exact integer concordance sums; ``taus`` is
    ``scores / (n (n-1) / 2)`` with a unit diagonal.
    """

    taus: np.ndarray
    scores: np.ndarray
    n: int

    @property
    def dim(self) -> int:
        return self.taus.shape[0]

    def __array__(self, dtype=None, copy=None):
        return self.taus if dtype is None else self.taus.astype(dtype)


def _as_data(data):
    data = np.ascontiguousarray(data, dtype=np.float64)
    if data.ndim != 2:
        raise DimensionMismatch(f"data must be an n x d matrix, got shape {data.shape}")
    if data.shape[0] < 2:
        raise InsufficientData(f"need at least two observations, got {data.shape[0]}")
    return data


def kendall_tau_matrix(data) -> KendallTauMatrix:
    """Kendall's tau between every pair of columns of an ``n x d`` matrix."""
    data = _as_data(data)
    n = data.shape[0]
    with _PARALLEL_LOCK:
        scores = _concordance_matrix(data)
    np.fill_diagonal(scores, n * (n - 1) // 2)
    taus = scores / (n * (n - 1) // 2)
    np.fill_diagonal(taus, 1.0)
    taus.setflags(write=False)
    scores.setflags(write=False)
    return KendallTauMatrix(taus, scores, n)


def sine_transform(tau) -> CorrelationMatrix:
    """Map Kendall's tau to the latent Gaussian correlation, ``sin(pi/2 * tau)``."""
    taus = np.asarray(tau, dtype=float)
    r = np.sin(0.5 * np.pi * taus)
    np.fill_diagonal(r, 1.0)
    return CorrelationMatrix(r)


def skeptic_correlation(data) -> CorrelationMatrix:
    """Rank-based latent correlation estimate: sine-transformed Kendall matrix."""
    return sine_transform(kendall_tau_matrix(data))


def pearson_matrix(data) -> CorrelationMatrix:
    data = _as_data(data)
    centered = data - data.mean(axis=0)
    ss = np.einsum("ij,ij->j", centered, centered)
    scale = np.sqrt(np.max(np.abs(data), axis=0) ** 2 * data.shape[0])
    for j in range(data.shape[1]):
        if ss[j] <= (1e-14 * scale[j]) ** 2 or ss[j] == 0.0:
            raise DegenerateColumn(j)
    norms = np.sqrt(ss)
    r = (centered.T @ centered) / np.outer(norms, norms)
    r = np.clip((r + r.T) / 2.0, -1.0, 1.0)
    np.fill_diagonal(r, 1.0)
    return CorrelationMatrix(r)


def correlation(data, kind: str) -> CorrelationMatrix:
    """Dispatch on ``kind`` in {"kendall", "pearson"}."""
    kind = kind.lower()
    if kind == "kendall":
        return skeptic_correlation(data)
    if kind == "pearson":
        return pearson_matrix(data)
    raise ValueError(f"unknown correlation kind {kind!r}")
