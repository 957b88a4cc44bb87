"""Dense dual simplex for ``min c'x  s.t.  A x <= b, x >= 0`` with ``c >= 0``.

With nonnegative costs the all-slack basis is dual feasible from the start,
so no phase-one problem is needed even when some ``b_i < 0``. Pivoting uses
Bland's smallest-index rule on both the leaving and the entering choice,
which makes the iteration deterministic and cycle-free. The tableau is
re-factorized from the current basis every ``REFACTOR_EVERY`` pivots and
once more at termination; the reported point is the basis solution
``B^{-1} b`` rather than the accumulated tableau column.
"""
import numpy as np
from numba import njit

OPTIMAL = 0
INFEASIBLE = 1
ITERATION_LIMIT = 2

REFACTOR_EVERY = 50


@njit(cache=True, nogil=True)
def _refactor(full, b, cost, basis, tableau, reduced):
    m = full.shape[0]
    ncol = full.shape[1]
    bmat = np.empty((m, m))
    for i in range(m):
        bmat[:, i] = full[:, basis[i]]
    binv = np.linalg.inv(bmat)
    tableau[:, :ncol] = binv @ full
    tableau[:, ncol] = np.linalg.solve(bmat, b)
    cb = np.empty((1, m))
    for i in range(m):
        cb[0, i] = cost[basis[i]]
    reduced[:] = cost - (cb @ np.ascontiguousarray(tableau[:, :ncol]))[0]
    for i in range(m):
        col = basis[i]
        tableau[:, col] = 0.0
        tableau[i, col] = 1.0
        reduced[col] = 0.0


@njit(cache=True, nogil=True)
def dual_simplex(a_ub, b, c, pivot_tol, feas_tol, max_iter):
    """Return ``(status, x, basis, iterations)``; ``x`` excludes slacks."""
    m, n = a_ub.shape
    ncol = n + m
    full = np.zeros((m, ncol))
    full[:, :n] = a_ub
    for i in range(m):
        full[i, n + i] = 1.0
    cost = np.zeros(ncol)
    cost[:n] = c

    tableau = np.zeros((m, ncol + 1))
    tableau[:, :ncol] = full
    tableau[:, ncol] = b
    reduced = cost.copy()
    basis = np.arange(n, n + m)

    status = ITERATION_LIMIT
    it = 0
    since_refactor = 0
    while it < max_iter:
        if since_refactor >= REFACTOR_EVERY:
            _refactor(full, b, cost, basis, tableau, reduced)
            since_refactor = 0
        # leaving variable: smallest variable index among infeasible rows
        r = -1
        best_var = ncol
        for i in range(m):
            if tableau[i, ncol] < -feas_tol and basis[i] < best_var:
                best_var = basis[i]
                r = i
        if r == -1:
            if since_refactor == 0:
                status = OPTIMAL
                break
            _refactor(full, b, cost, basis, tableau, reduced)
            since_refactor = 0
            continue
        # entering variable: min ratio, smallest index on ties
        q = -1
        best_ratio = np.inf
        for k in range(ncol):
            coef = tableau[r, k]
            if coef < -pivot_tol:
                ratio = max(reduced[k], 0.0) / -coef
                if q == -1 or ratio < best_ratio - 1e-12 * (1.0 + best_ratio):
                    best_ratio = ratio
                    q = k
        if q == -1:
            if since_refactor == 0:
                status = INFEASIBLE
                break
            _refactor(full, b, cost, basis, tableau, reduced)
            since_refactor = 0
            continue
        # pivot on (r, q)
        piv = tableau[r, q]
        tableau[r, :] /= piv
        for i in range(m):
            if i != r:
                f = tableau[i, q]
                if f != 0.0:
                    tableau[i, :] -= f * tableau[r, :]
        f = reduced[q]
        if f != 0.0:
            reduced -= f * tableau[r, :ncol]
        basis[r] = q
        it += 1
        since_refactor += 1

    x = np.zeros(ncol)
    for i in range(m):
        x[basis[i]] = tableau[i, ncol]
    return status, x[:n], basis, it
