"""Catching-up schemes for sweeping processes with and without perturbation.

All solvers return a :class:`SweepingRun` holding three paths on one grid,

    x = h + y   (bit-exact by construction),

where h collects the external signal / integral part, y is the reflection
(bounded-variation) part produced by projections, and x is the state.  The
unperturbed scheme has h = 0; the perturbed schemes reduce every step to a
projection onto the translated set C(t_k) - h(t_k).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .convex import PROJ_TOL, MovingConvexSet, Translated, distance, project
from .errors import InfeasibleStart
from .paths import Grid, SamplePath
from .rough import (
    ControlledPath,
    RoughLift,
    VectorField,
    compose_controlled,
    rough_integral,
    young_integral,
)

#: sup-norm tolerance for Picard fixed-point iterations
FIXED_POINT_TOL = 1e-8
#: iteration budget for Picard fixed-point iterations
MAX_PICARD_ITER = 200

# Dykstra runs two decades below the feasibility tolerance so that the
# reported feasibility of polytope runs stays within proj_tol.
_INTERNAL_TOL_FACTOR = 1e-2


@dataclass(frozen=True)
class SweepingRun:
    """One discrete trajectory of a (perturbed) sweeping process."""

    scheme: str
    grid: Grid
    x: SamplePath
    h: SamplePath
    y: SamplePath
    iterations: int
    converged: bool
    driver: SamplePath | None = None
    x_derivative: SamplePath | None = None

    def __post_init__(self):
        if not (self.x.grid == self.grid and self.h.grid == self.grid and self.y.grid == self.grid):
            raise ValueError("x, h, y must live on the run's grid")
        if self.x.values.shape != self.h.values.shape or self.x.values.shape != self.y.values.shape:
            raise ValueError("x, h, y must have one common shape")
        if not np.array_equal(self.x.values, self.h.values + self.y.values):
            raise ValueError("x = h + y must hold exactly at every grid point")

    @property
    def state_dim(self) -> int:
        return self.x.values.shape[1]


def _as_state(a, e: int | None = None) -> np.ndarray:
    a = np.atleast_1d(np.asarray(a, dtype=np.float64))
    if a.ndim != 1 or (e is not None and a.size != e):
        raise ValueError("initial state has the wrong shape")
    return a


def _state_values(path: SamplePath) -> np.ndarray:
    v = path.values
    return v[:, None] if v.ndim == 1 else v


def _check_start(m: MovingConvexSet, a: np.ndarray, proj_tol: float) -> None:
    gap = distance(m.at(0.0), a, proj_tol=proj_tol * _INTERNAL_TOL_FACTOR)
    if gap > proj_tol:
        raise InfeasibleStart(
            f"initial state is {gap:.3e} away from the admissible set at t=0"
        )


def catching_up(
    m: MovingConvexSet, a, grid: Grid, proj_tol: float = PROJ_TOL
) -> SweepingRun:
    """Unperturbed scheme: project the previous state onto the next set."""
    a = _as_state(a)
    _check_start(m, a, proj_tol)
    dyk_tol = proj_tol * _INTERNAL_TOL_FACTOR
    vals = np.empty((len(grid), a.size))
    vals[0] = a
    for k in range(grid.n_segments):
        vals[k + 1] = project(m.at(grid.times[k + 1]), vals[k], proj_tol=dyk_tol)
    y = SamplePath(grid, vals)
    h = SamplePath.zero(grid, (a.size,))
    x = SamplePath(grid, h.values + y.values)
    return SweepingRun("catching_up", grid, x, h, y, iterations=0, converged=True)


def skorokhod_decompose(
    m: MovingConvexSet, a, h: SamplePath, proj_tol: float = PROJ_TOL
) -> SweepingRun:
    """Split h + (projection corrections) into x = h + y with x(t_k) in C(t_k).

    Each step projects onto the translated set C(t_{k+1}) - h(t_{k+1});
    translations resolve structurally (a shifted box stays a box), so the
    one-dimensional half-line case reproduces the running-maximum formula
    without rounding.
    """
    hv = _state_values(h)
    a = _as_state(a, hv.shape[1])
    if not np.all(hv[0] == 0.0):
        raise ValueError("the signal part must start at zero")
    _check_start(m, a, proj_tol)
    grid = h.grid
    dyk_tol = proj_tol * _INTERNAL_TOL_FACTOR
    w = np.empty_like(hv)
    w[0] = a
    for k in range(grid.n_segments):
        t = grid.times[k + 1]
        moved = Translated(m.at(t), -hv[k + 1])
        w[k + 1] = project(moved, w[k], proj_tol=dyk_tol)
    y = SamplePath(grid, w)
    h_path = SamplePath(grid, hv)
    x = SamplePath(grid, hv + w)
    return SweepingRun("skorokhod", grid, x, h_path, y, iterations=0, converged=True)


def euler_catching_up(
    m: MovingConvexSet,
    a,
    drift: Callable[[np.ndarray], np.ndarray],
    signal: SamplePath,
    proj_tol: float = PROJ_TOL,
) -> SweepingRun:
    """One-shot Euler scheme: project x_k + drift(x_k) dt + signal increment.

    ``signal`` is the additive noise path W with W(0) = 0; the signal part of
    the run is the cumulative drift plus W, and y = x - h.
    """
    wv = _state_values(signal)
    a = _as_state(a, wv.shape[1])
    if not np.all(wv[0] == 0.0):
        raise ValueError("the additive signal must start at zero")
    _check_start(m, a, proj_tol)
    grid = signal.grid
    dyk_tol = proj_tol * _INTERNAL_TOL_FACTOR
    dt = np.diff(grid.times)
    xv = np.empty_like(wv)
    xv[0] = a
    drift_terms = np.empty((grid.n_segments, a.size))
    for k in range(grid.n_segments):
        drift_terms[k] = np.asarray(drift(xv[k]), dtype=np.float64).reshape(a.size) * dt[k]
        step = xv[k] + drift_terms[k] + (wv[k + 1] - wv[k])
        xv[k + 1] = project(m.at(grid.times[k + 1]), step, proj_tol=dyk_tol)
    hv = np.zeros_like(wv)
    hv[1:] = np.cumsum(drift_terms, axis=0)
    hv += wv
    yv = xv - hv
    h = SamplePath(grid, hv)
    y = SamplePath(grid, yv)
    x = SamplePath(grid, hv + yv)
    return SweepingRun(
        "euler", grid, x, h, y, iterations=0, converged=True, driver=signal
    )


def _field_values(f: VectorField, states: np.ndarray) -> np.ndarray:
    return np.array([np.asarray(f.value(v), dtype=np.float64) for v in states])


def _sup_gap(a: np.ndarray, b: np.ndarray) -> float:
    return float(np.max(np.linalg.norm(a - b, axis=1)))


def picard_young(
    m: MovingConvexSet,
    a,
    f: VectorField,
    z: SamplePath,
    tol: float = FIXED_POINT_TOL,
    max_iter: int = MAX_PICARD_ITER,
    proj_tol: float = PROJ_TOL,
    x0: SamplePath | None = None,
) -> SweepingRun:
    """Picard iteration with Young integrals against a once-integrable driver.

    Starting from the unperturbed catching-up trajectory (or ``x0``), each
    pass integrates f along the previous state, then re-solves the skeleton
    by Skorokhod decomposition of the integral.  Stops when successive
    states agree in sup norm below ``tol``; otherwise returns the last run
    with ``converged=False``.
    """
    grid = z.grid
    a = _as_state(a)
    zv = _state_values(z)
    probe = np.asarray(f.value(a))
    if probe.shape != (a.size, zv.shape[1]):
        raise ValueError(
            f"field values must have shape {(a.size, zv.shape[1])}, got {probe.shape}"
        )
    prev = _state_values(x0) if x0 is not None else _state_values(
        catching_up(m, a, grid, proj_tol=proj_tol).x
    )
    run = None
    converged = False
    iterations = 0
    for iterations in range(1, max_iter + 1):
        integrand = SamplePath(grid, _field_values(f, prev))
        h_n = young_integral(integrand, z)
        run = skorokhod_decompose(m, a, h_n, proj_tol=proj_tol)
        gap = _sup_gap(_state_values(run.x), prev)
        prev = _state_values(run.x)
        if gap < tol:
            converged = True
            break
    return SweepingRun(
        "picard_young",
        grid,
        run.x,
        run.h,
        run.y,
        iterations=iterations,
        converged=converged,
        driver=z,
        x_derivative=SamplePath(grid, _field_values(f, prev)),
    )


def picard_rough(
    m: MovingConvexSet,
    a,
    f: VectorField,
    lift: RoughLift,
    tol: float = FIXED_POINT_TOL,
    max_iter: int = MAX_PICARD_ITER,
    proj_tol: float = PROJ_TOL,
    x0: SamplePath | None = None,
) -> SweepingRun:
    """Picard iteration with compensated (rough) integrals against a step-2 lift.

    The n-th pass integrates the controlled integrand built from the
    previous state, whose Gubinelli derivative is the field along the state
    one pass older (zero initially, since the seed trajectory has bounded
    variation).
    """
    grid = lift.grid
    a = _as_state(a)
    d = lift.driver_dim
    probe = np.asarray(f.value(a))
    if probe.shape != (a.size, d):
        raise ValueError(
            f"field values must have shape {(a.size, d)}, got {probe.shape}"
        )
    prev = _state_values(x0) if x0 is not None else _state_values(
        catching_up(m, a, grid, proj_tol=proj_tol).x
    )
    deriv = np.zeros((len(grid), a.size, d))
    run = None
    converged = False
    iterations = 0
    for iterations in range(1, max_iter + 1):
        controlled = ControlledPath(
            value=SamplePath(grid, prev),
            derivative=SamplePath(grid, deriv),
            reference=lift,
        )
        integrand = compose_controlled(f, controlled)
        h_n = rough_integral(integrand, lift)
        run = skorokhod_decompose(m, a, h_n, proj_tol=proj_tol)
        gap = _sup_gap(_state_values(run.x), prev)
        deriv = integrand.value.values  # f along the state that was just integrated
        prev = _state_values(run.x)
        if gap < tol:
            converged = True
            break
    return SweepingRun(
        "picard_rough",
        grid,
        run.x,
        run.h,
        run.y,
        iterations=iterations,
        converged=converged,
        driver=lift.base,
        x_derivative=SamplePath(grid, _field_values(f, prev)),
    )
