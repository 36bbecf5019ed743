"""Dependent multivariate dynamic time warping.

The point cost between two samples is their squared euclidean distance taken
over all channels jointly (no square root). The cost of an alignment path is
the plain sum of point costs along it; nothing is normalized by path length.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numba import njit

from .series import MultivariateTimeSeries

__all__ = ["WarpingPath", "cost_matrix", "dtw", "dtw_cost"]


@dataclass(frozen=True, eq=False)
class WarpingPath:
    """An optimal monotone alignment between two series.

    ``steps`` is an (s, 2) int array of 0-based index pairs: steps[0] is
    (0, 0), steps[-1] is (len(a)-1, len(b)-1), and every step advances one or
    both indices by exactly one (never neither). ``cost`` is the sum of point
    costs over the visited cells, so max(m, n) <= s <= m + n - 1.
    """

    steps: np.ndarray
    cost: float


def _check_pair(a: MultivariateTimeSeries, b: MultivariateTimeSeries):
    if a.channels != b.channels:
        raise ValueError(
            f"channel count mismatch: {a.channels} vs {b.channels}"
        )


def _effective_window(m: int, n: int, window) -> int:
    # -1 encodes "unconstrained" for the jitted kernels; a requested band is
    # widened to at least |m - n| so the terminal cell stays reachable
    if window is None:
        return -1
    w = int(window)
    if w < 0:
        raise ValueError(f"window must be >= 0, got {window}")
    return max(w, abs(m - n))


def cost_matrix(a: MultivariateTimeSeries, b: MultivariateTimeSeries) -> np.ndarray:
    """Grid of pairwise point costs, shape (len(a), len(b))."""
    _check_pair(a, b)
    diff = a.samples[:, None, :] - b.samples[None, :, :]
    return (diff * diff).sum(axis=2)


@njit(cache=True)
def _point_cost(xa, xb, i, j):
    acc = 0.0
    for k in range(xa.shape[1]):
        e = xa[i, k] - xb[j, k]
        acc += e * e
    return acc


@njit(cache=True)
def _cost_to_go(xa, xb, window):
    # grid of optimal remaining cost from each cell to (m-1, n-1); cells
    # outside the band (or cut off by it) hold +inf
    m = xa.shape[0]
    n = xb.shape[0]
    grid = np.full((m, n), np.inf)
    grid[m - 1, n - 1] = _point_cost(xa, xb, m - 1, n - 1)
    for j in range(n - 2, -1, -1):
        if window >= 0 and abs((m - 1) - j) > window:
            continue
        grid[m - 1, j] = _point_cost(xa, xb, m - 1, j) + grid[m - 1, j + 1]
    for i in range(m - 2, -1, -1):
        for j in range(n - 1, -1, -1):
            if window >= 0 and abs(i - j) > window:
                continue
            best = np.inf
            if j + 1 < n:
                if grid[i + 1, j + 1] < best:
                    best = grid[i + 1, j + 1]
                if grid[i, j + 1] < best:
                    best = grid[i, j + 1]
            if grid[i + 1, j] < best:
                best = grid[i + 1, j]
            grid[i, j] = _point_cost(xa, xb, i, j) + best
    return grid


@njit(cache=True)
def _cost_to_go_value(xa, xb, window):
    # same recurrence and comparison order as _cost_to_go, keeping two rows
    m = xa.shape[0]
    n = xb.shape[0]
    below = np.empty(n)
    row = np.empty(n)
    below[n - 1] = _point_cost(xa, xb, m - 1, n - 1)
    for j in range(n - 2, -1, -1):
        if window >= 0 and abs((m - 1) - j) > window:
            below[j] = np.inf
        else:
            below[j] = _point_cost(xa, xb, m - 1, j) + below[j + 1]
    for i in range(m - 2, -1, -1):
        for j in range(n - 1, -1, -1):
            if window >= 0 and abs(i - j) > window:
                row[j] = np.inf
                continue
            best = np.inf
            if j + 1 < n:
                if below[j + 1] < best:
                    best = below[j + 1]
                if row[j + 1] < best:
                    best = row[j + 1]
            if below[j] < best:
                best = below[j]
            row[j] = _point_cost(xa, xb, i, j) + best
        tmp = below
        below = row
        row = tmp
    return below[0]


@njit(cache=True)
def _walk(grid):
    # trace one optimal path from (0, 0); on cost ties prefer the diagonal
    # step, then advancing the first index, then the second
    m = grid.shape[0]
    n = grid.shape[1]
    out = np.empty((m + n - 1, 2), np.int64)
    i = 0
    j = 0
    out[0, 0] = 0
    out[0, 1] = 0
    k = 0
    while i < m - 1 or j < n - 1:
        best = np.inf
        ni = -1
        nj = -1
        if i + 1 < m and j + 1 < n and grid[i + 1, j + 1] < best:
            best = grid[i + 1, j + 1]
            ni = i + 1
            nj = j + 1
        if i + 1 < m and grid[i + 1, j] < best:
            best = grid[i + 1, j]
            ni = i + 1
            nj = j
        if j + 1 < n and grid[i, j + 1] < best:
            best = grid[i, j + 1]
            ni = i
            nj = j + 1
        if ni < 0:
            raise RuntimeError("path extraction hit an unreachable cell")
        i = ni
        j = nj
        k += 1
        out[k, 0] = i
        out[k, 1] = j
    return out[: k + 1]


def dtw(a: MultivariateTimeSeries, b: MultivariateTimeSeries, window=None) -> WarpingPath:
    """Optimal alignment path and cost between two series.

    Parameters
    ----------
    a, b : MultivariateTimeSeries
        Series with matching channel counts (lengths may differ).
    window : int, optional
        Half-width of a |i - j| band around the diagonal. Constraining the
        band only speeds things up; results are those of the banded search.
        None (default) searches the full grid.

    Returns
    -------
    WarpingPath
        Deterministic for identical inputs: ties during path extraction
        prefer the diagonal step, then advancing ``a``, then ``b``.
    """
    _check_pair(a, b)
    w = _effective_window(len(a), len(b), window)
    grid = _cost_to_go(a.samples, b.samples, w)
    steps = _walk(grid)
    steps.setflags(write=False)
    return WarpingPath(steps=steps, cost=float(grid[0, 0]))


def dtw_cost(a: MultivariateTimeSeries, b: MultivariateTimeSeries, window=None) -> float:
    """Alignment cost only, in O(len(b)) extra memory.

    Exactly equals dtw(a, b).cost, including floating-point rounding.
    """
    _check_pair(a, b)
    w = _effective_window(len(a), len(b), window)
    return float(_cost_to_go_value(a.samples, b.samples, w))
