"""Grids, sampled paths, p-variation seminorms and variation bounds.

Everything downstream (integration, sweeping solvers, diagnostics) works on
discrete skeletons: a path is its values on a finite grid, and every seminorm
is the exact supremum over sub-dissections of that grid.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np


@dataclass(frozen=True)
class Grid:
    """Strictly increasing times t_0 = 0 < t_1 < ... < t_n = T."""

    times: np.ndarray

    def __post_init__(self):
        t = np.asarray(self.times, dtype=np.float64)
        if t.ndim != 1 or t.size < 2:
            raise ValueError("grid needs at least two time points")
        if t[0] != 0.0:
            raise ValueError("grid must start at t=0")
        if not np.all(np.diff(t) > 0.0):
            raise ValueError("grid times must be strictly increasing")
        t.setflags(write=False)
        object.__setattr__(self, "times", t)

    @classmethod
    def uniform(cls, n: int, horizon: float) -> "Grid":
        """Uniform grid with n segments on [0, horizon]."""
        if n < 1:
            raise ValueError("need at least one segment")
        if horizon <= 0.0:
            raise ValueError("horizon must be positive")
        return cls(np.linspace(0.0, horizon, n + 1))

    @property
    def n_segments(self) -> int:
        return self.times.size - 1

    @property
    def horizon(self) -> float:
        return float(self.times[-1])

    @property
    def mesh(self) -> float:
        return float(np.max(np.diff(self.times)))

    def subsample(self, step: int) -> "Grid":
        """Coarsen by keeping every ``step``-th point; step must divide n."""
        if step < 1 or self.n_segments % step != 0:
            raise ValueError("step must divide the number of segments")
        return Grid(self.times[::step])

    def __len__(self) -> int:
        return self.times.size

    def __eq__(self, other) -> bool:
        return isinstance(other, Grid) and np.array_equal(self.times, other.times)


@dataclass(frozen=True)
class SamplePath:
    """Values sampled on a grid; trailing shape is the value shape.

    ``values[k]`` is the value at ``grid.times[k]``; scalars, vectors and
    matrix/tensor values are all allowed (shape ``(n+1, *value_shape)``).
    """

    grid: Grid
    values: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.values, dtype=np.float64)
        if v.shape[0] != len(self.grid):
            raise ValueError("one value per grid point required")
        v = np.ascontiguousarray(v)
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    @classmethod
    def from_function(cls, grid: Grid, fn: Callable) -> "SamplePath":
        return cls(grid, np.array([fn(t) for t in grid.times], dtype=np.float64))

    @classmethod
    def zero(cls, grid: Grid, shape=()) -> "SamplePath":
        return cls(grid, np.zeros((len(grid),) + tuple(shape)))

    @property
    def value_shape(self) -> tuple:
        return self.values.shape[1:]

    def increment(self, i: int, j: int) -> np.ndarray:
        return self.values[j] - self.values[i]

    def sup_norm(self) -> float:
        if self.values.ndim == 1:
            return float(np.max(np.abs(self.values)))
        flat = self.values.reshape(self.values.shape[0], -1)
        return float(np.max(np.linalg.norm(flat, axis=1)))

    def subsample(self, step: int) -> "SamplePath":
        return SamplePath(self.grid.subsample(step), self.values[::step])


@dataclass(frozen=True)
class VariationBoundParams:
    """Geometry and dissection data feeding the a-priori variation bounds.

    r        interior ball radius of the tube,
    S        distance from the start point to the ball centre,
    e        ambient dimension,
    N        number of windows in the declared dissection,
    R        window ball radius (the tube contains B(center, R) on each window),
    rho      oscillation bound of the perturbation per window.
    """

    r: float
    S: float
    e: int
    N: int
    R: float
    rho: float

    def __post_init__(self):
        if self.r <= 0.0 or self.R <= 0.0 or self.rho <= 0.0:
            raise ValueError("radii and oscillation bound must be positive")
        if self.e < 1 or self.N < 1:
            raise ValueError("dimension and window count must be >= 1")
        if self.S < 0.0:
            raise ValueError("start distance cannot be negative")


def _increment_norms(values: np.ndarray, j: int) -> np.ndarray:
    """Norms ||x(t_j) - x(t_i)|| for all i < j."""
    diff = values[j] - values[:j]
    if diff.ndim == 1:
        return np.abs(diff)
    return np.linalg.norm(diff.reshape(j, -1), axis=1)


def p_variation(path: SamplePath, p: float, window: tuple[int, int] | None = None) -> float:
    """Exact p-variation seminorm of the sampled skeleton over a grid window.

    Computed by the O(m^2) dynamic program
    ``best(j) = max_{i<j} (best(i) + ||x(t_i, t_j)||^p)``; the result is
    ``best(end)^(1/p)``.  For p = 1 the finest dissection is optimal and the
    program reduces to the sum of consecutive increment norms.
    """
    if p < 1.0:
        raise ValueError("p must be >= 1")
    i0, i1 = _resolve_window(path.grid, window)
    vals = path.values[i0 : i1 + 1]
    if p == 1.0:
        diffs = np.diff(vals, axis=0)
        if diffs.ndim == 1:
            return float(np.sum(np.abs(diffs)))
        return float(np.sum(np.linalg.norm(diffs.reshape(diffs.shape[0], -1), axis=1)))
    m = vals.shape[0]
    best = np.zeros(m)
    for j in range(1, m):
        best[j] = np.max(best[:j] + _increment_norms(vals, j) ** p)
    return float(best[-1] ** (1.0 / p))


def p_variation_dissection(
    path: SamplePath, p: float, window: tuple[int, int] | None = None
) -> tuple[float, list[int]]:
    """p-variation together with an optimizing dissection (grid indices)."""
    if p < 1.0:
        raise ValueError("p must be >= 1")
    i0, i1 = _resolve_window(path.grid, window)
    vals = path.values[i0 : i1 + 1]
    m = vals.shape[0]
    best = np.zeros(m)
    back = np.zeros(m, dtype=np.intp)
    for j in range(1, m):
        cand = best[:j] + _increment_norms(vals, j) ** p
        back[j] = np.argmax(cand)
        best[j] = cand[back[j]]
    idx = [m - 1]
    while idx[-1] > 0:
        idx.append(int(back[idx[-1]]))
    idx.reverse()
    return float(best[-1] ** (1.0 / p)), [i0 + k for k in idx]


def p_variation_increments(incr_norms: np.ndarray, p: float) -> float:
    """p-variation of a two-parameter increment, given ||A(t_i, t_j)|| as a matrix.

    Used for controlled-path remainders, whose increments are not differences
    of a one-parameter path.  ``incr_norms[i, j]`` is the norm of the window
    increment for i < j; entries with i >= j are ignored.
    """
    if p < 1.0:
        raise ValueError("p must be >= 1")
    m = incr_norms.shape[0]
    best = np.zeros(m)
    for j in range(1, m):
        best[j] = np.max(best[:j] + incr_norms[:j, j] ** p)
    return float(best[-1] ** (1.0 / p))


def _resolve_window(grid: Grid, window: tuple[int, int] | None) -> tuple[int, int]:
    if window is None:
        return 0, grid.n_segments
    i0, i1 = int(window[0]), int(window[1])
    if not (0 <= i0 < i1 <= grid.n_segments):
        raise ValueError("window indices out of range")
    return i0, i1


@dataclass(frozen=True)
class ControlCheckReport:
    """Worst super-additivity violation of a sampled control function."""

    max_violation: float
    argmax: tuple[float, float, float]
    tol: float

    @property
    def ok(self) -> bool:
        return self.max_violation <= self.tol


def check_control_superadditive(
    w, grid: Grid, tol: float | None = None
) -> ControlCheckReport:
    """Verify w(s,u) + w(u,t) <= w(s,t) + tol on all grid triples s <= u <= t.

    ``w`` is either a callable of two times or a precomputed (n+1, n+1)
    matrix indexed by grid positions.  The default tolerance is
    ``1e-12 * (1 + |w(0,T)|)``.
    """
    t = grid.times
    m = t.size
    if callable(w):
        W = np.empty((m, m))
        for i in range(m):
            for j in range(i, m):
                W[i, j] = w(t[i], t[j])
    else:
        W = np.asarray(w, dtype=np.float64)
        if W.shape != (m, m):
            raise ValueError("control matrix shape must match the grid")
    if tol is None:
        tol = 1e-12 * (1.0 + abs(float(W[0, -1])))
    worst = -np.inf
    arg = (0, 0, 0)
    for k in range(m):
        # violation of the triple (i, k, j): w(i,k) + w(k,j) - w(i,j)
        excess = W[: k + 1, k][:, None] + W[k, k:][None, :] - W[: k + 1, k:]
        ij = np.unravel_index(np.argmax(excess), excess.shape)
        if excess[ij] > worst:
            worst = float(excess[ij])
            arg = (int(ij[0]), k, k + int(ij[1]))
    return ControlCheckReport(worst, (float(t[arg[0]]), float(t[arg[1]]), float(t[arg[2]])), float(tol))


def valadier_bound(radius: float, start_distance: float, dim: int) -> float:
    """1-variation bound for projection recursions onto sets containing a fixed ball.

    If every set of the sweeping recursion contains the ball B(c, radius) and
    the start point sits at ``start_distance`` from c, the output's total
    variation is at most ``(S^2 - s^2) / (2 s)`` (positive part) in dimension
    > 1, and ``S - s`` (positive part) on the line.
    """
    if radius <= 0.0:
        raise ValueError("ball radius must be positive")
    if start_distance < 0.0:
        raise ValueError("start distance cannot be negative")
    if dim < 1:
        raise ValueError("dimension must be >= 1")
    s, S = radius, start_distance
    if dim == 1:
        return max(0.0, S - s)
    return max(0.0, (S * S - s * s) / (2.0 * s))


def variation_bound_oscillation(n_windows: int, rho: float, diam_sup: float) -> float:
    """Variation bound N * diam^2 / (2 rho) for perturbations oscillating < rho per window."""
    if n_windows < 1:
        raise ValueError("window count must be >= 1")
    if rho <= 0.0:
        raise ValueError("oscillation bound must be positive")
    if diam_sup < 0.0:
        raise ValueError("diameter cannot be negative")
    return n_windows * diam_sup**2 / (2.0 * rho)


def variation_bound_scheme(
    n_windows: int, window_radius: float, gamma_sup: float, state_sup: float, drive_modulus: float
) -> float:
    """Variation bound N/R * (||gamma||_inf + ||X||_inf + phi(0,T))^2 for discretized runs."""
    if n_windows < 1:
        raise ValueError("window count must be >= 1")
    if window_radius <= 0.0:
        raise ValueError("window radius must be positive")
    if min(gamma_sup, state_sup, drive_modulus) < 0.0:
        raise ValueError("norms cannot be negative")
    return n_windows / window_radius * (gamma_sup + state_sup + drive_modulus) ** 2
