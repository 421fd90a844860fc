"""Post-hoc checks on sweeping runs: feasibility, variation bounds,
normal-cone inequalities, uniqueness functionals, and grid-refinement
studies.

Every check consumes finished :class:`~roughsweep.solvers.SweepingRun`
objects and reports observed quantities next to the tolerance or bound they
are held against; nothing here mutates a run.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np
from scipy import stats

from .convex import (
    PROJ_TOL,
    MovingConvexSet,
    distance,
    interior_radius,
    translate,
)
from .paths import (
    Grid,
    SamplePath,
    VariationBoundParams,
    p_variation,
    valadier_bound,
    variation_bound_oscillation,
    variation_bound_scheme,
)
from .solvers import SweepingRun


def _state_values(path: SamplePath) -> np.ndarray:
    v = path.values
    return v[:, None] if v.ndim == 1 else v


# ---------------------------------------------------------------------------
# feasibility


@dataclass(frozen=True)
class FeasibilityReport:
    max_violation: float
    worst_time: float
    proj_tol: float

    @property
    def ok(self) -> bool:
        return self.max_violation <= self.proj_tol


def feasibility_report(
    run: SweepingRun, m: MovingConvexSet, proj_tol: float = PROJ_TOL
) -> FeasibilityReport:
    """Largest distance from the state to the admissible set over the grid."""
    xv = _state_values(run.x)
    gaps = np.array(
        [
            distance(m.at(t), xv[k], proj_tol=proj_tol * 1e-2)
            for k, t in enumerate(run.grid.times)
        ]
    )
    k = int(np.argmax(gaps))
    return FeasibilityReport(float(gaps[k]), float(run.grid.times[k]), proj_tol)


# ---------------------------------------------------------------------------
# variation bounds


@dataclass(frozen=True)
class VariationBoundReport:
    y_var: float
    bound: float
    kind: str
    satisfied: bool


def declare_window_dissection(
    m: MovingConvexSet, run: SweepingRun, window_radius: float | None = None
) -> VariationBoundParams:
    """Greedy window dissection certifying the a-priori variation bound.

    Walks the grid, cutting a new window whenever the accumulated signal
    oscillation would exceed R/2 or the ball B(gamma(window start), R) would
    leave some set of the window.  The returned parameters are valid inputs
    for the scheme-type bound; raises if even a single step violates the
    conditions.
    """
    big_r = float(window_radius) if window_radius is not None else m.r / 2.0
    grid = run.grid
    t = grid.times
    hv = _state_values(run.h)
    step_osc = np.linalg.norm(np.diff(hv, axis=0), axis=1)

    def _anchor_at(idx):
        g = np.asarray(m.gamma(t[idx]), dtype=np.float64)
        if interior_radius(m.at(t[idx]), g) < big_r:
            raise ValueError(
                "the window ball does not fit at its own anchor time; "
                "decrease the window radius"
            )
        return g

    n_windows = 1
    start = 0
    anchor = _anchor_at(0)
    osc = 0.0
    for j in range(1, len(grid)):
        osc_next = osc + step_osc[j - 1]
        fits = osc_next <= big_r / 2.0 and interior_radius(m.at(t[j]), anchor) >= big_r
        if fits:
            osc = osc_next
            continue
        if j - 1 == start:
            raise ValueError(
                "window conditions fail within a single grid step; "
                "decrease the window radius or refine the grid"
            )
        start = j - 1
        anchor = _anchor_at(start)
        n_windows += 1
        osc = step_osc[j - 1]
        if osc > big_r / 2.0 or interior_radius(m.at(t[j]), anchor) < big_r:
            raise ValueError(
                "window conditions fail within a single grid step; "
                "decrease the window radius or refine the grid"
            )
    a0 = _state_values(run.x)[0]
    return VariationBoundParams(
        r=m.r,
        S=float(np.linalg.norm(a0 - m.gamma(0.0))),
        e=run.state_dim,
        N=n_windows,
        R=big_r,
        rho=big_r / 2.0,
    )


def variation_bound_check(
    run: SweepingRun,
    params: VariationBoundParams,
    m: MovingConvexSet | None = None,
    kind: str = "scheme",
    diam_sup: float | None = None,
    drive_modulus: float | None = None,
) -> VariationBoundReport:
    """Compare ||y||_{1-var} against the declared a-priori bound.

    ``kind="scheme"`` uses N/R (sup||gamma|| + sup||x|| + phi)^2 with phi
    defaulting to the 1-variation of the signal part; ``kind="oscillation"``
    uses N diam^2 / (2 rho) and needs the tube diameter.
    """
    y_var = p_variation(run.y, 1.0)
    if kind == "scheme":
        if m is None:
            raise ValueError("the scheme bound needs the moving set")
        gamma_sup = max(float(np.linalg.norm(m.gamma(t))) for t in run.grid.times)
        phi = drive_modulus if drive_modulus is not None else p_variation(run.h, 1.0)
        bound = variation_bound_scheme(
            params.N, params.R, gamma_sup, run.x.sup_norm(), phi
        )
    elif kind == "oscillation":
        if diam_sup is None:
            raise ValueError("the oscillation bound needs the tube diameter")
        bound = variation_bound_oscillation(params.N, params.rho, diam_sup)
    else:
        raise ValueError(f"unknown bound kind {kind!r}")
    return VariationBoundReport(y_var, bound, kind, bool(y_var <= bound))


def unperturbed_variation_bound(m: MovingConvexSet, run: SweepingRun) -> float:
    """Valadier-type bound for unperturbed runs: l(r, ||a - gamma(0)||)."""
    a0 = _state_values(run.x)[0]
    return valadier_bound(m.r, float(np.linalg.norm(a0 - m.gamma(0.0))), run.state_dim)


# ---------------------------------------------------------------------------
# normal-cone inequality


@dataclass(frozen=True)
class NormalConeReport:
    max_violation: float
    tol: float
    windows_checked: int
    windows_with_probe: int

    @property
    def ok(self) -> bool:
        return self.max_violation <= self.tol


def _dyadic_windows(n: int) -> list[tuple[int, int]]:
    windows = []
    length = 1
    while length <= n:
        for a in range(0, n - length + 1, length):
            windows.append((a, a + length))
        if windows[-1][1] != n:
            windows.append((n - length, n))
        length *= 2
    return windows


def normal_cone_tolerance(run: SweepingRun) -> float:
    return 1e-8 * (1.0 + run.y.sup_norm() ** 2)


def normal_cone_check(
    run: SweepingRun,
    m: MovingConvexSet,
    proj_tol: float = PROJ_TOL,
    tol: float | None = None,
) -> NormalConeReport:
    """Discrete variational inequality of the reflection part on dyadic windows.

    For every probe z in the intersection of the translated sets
    C(tau) - h(tau) over a window [s, t] (membership checked at the grid
    times), the reflection must satisfy
    <z, y(t) - y(s)>  >=  (||y(t)||^2 - ||y(s)||^2) / 2 - tol.
    Probes are the carried selection gamma - h at the window midpoint plus
    axis offsets of half the interior radius; windows whose probes all fail
    the membership check count as vacuous.
    """
    if tol is None:
        tol = normal_cone_tolerance(run)
    grid = run.grid
    t = grid.times
    hv = _state_values(run.h)
    yv = _state_values(run.y)
    e = yv.shape[1]
    y_sq = np.einsum("ke,ke->k", yv, yv)
    worst = -np.inf
    windows = _dyadic_windows(grid.n_segments)
    with_probe = 0
    for i, j in windows:
        mid = (i + j) // 2
        center = np.asarray(m.gamma(t[mid]), dtype=np.float64) - hv[mid]
        probes = [center]
        for axis in range(e):
            off = np.zeros(e)
            off[axis] = 0.5 * m.r
            probes.append(center + off)
            probes.append(center - off)
        alive = probes
        for k in range(i, j + 1):
            moved = translate(m.at(t[k]), -hv[k])
            alive = [z for z in alive if distance(moved, z, proj_tol=proj_tol * 1e-2) <= proj_tol]
            if not alive:
                break
        if not alive:
            continue
        with_probe += 1
        dy = yv[j] - yv[i]
        rhs = 0.5 * (y_sq[j] - y_sq[i])
        for z in alive:
            worst = max(worst, rhs - float(z @ dy))
    return NormalConeReport(
        max_violation=float(worst) if with_probe else 0.0,
        tol=float(tol),
        windows_checked=len(windows),
        windows_with_probe=with_probe,
    )


# ---------------------------------------------------------------------------
# uniqueness functionals


@dataclass(frozen=True)
class UniquenessReport:
    value: float
    window: tuple[float, float]
    tol: float

    @property
    def ok(self) -> bool:
        return self.value <= self.tol


def uniqueness_tolerance(run1: SweepingRun, run2: SweepingRun) -> float:
    y_var = max(p_variation(run1.y, 1.0), p_variation(run2.y, 1.0))
    x_sup = max(run1.x.sup_norm(), run2.x.sup_norm())
    return 1e-6 * (1.0 + y_var * x_sup)


def _pair_windows(n: int, full: bool) -> list[tuple[int, int]]:
    if not full:
        return _dyadic_windows(n)
    return [(u, v) for u in range(n) for v in range(u + 1, n + 1)]


def _check_shared_grid(run1: SweepingRun, run2: SweepingRun) -> None:
    if run1.grid != run2.grid:
        raise ValueError("runs must share one grid")
    if run1.x.values.shape != run2.x.values.shape:
        raise ValueError("runs must share one state shape")


def uniqueness_functional_young(
    run1: SweepingRun, run2: SweepingRun, full: bool = False, tol: float | None = None
) -> UniquenessReport:
    """Largest windowed pairing of state gaps against reflection-gap increments.

    Discretizes integral <(x - x*)(u, r), d(y - y*)(r)> over windows [u, v]
    by left sums; for exact solutions of the same Young problem this is
    non-positive, so small positive values certify closeness.  Windows are
    dyadic by default, all pairs with ``full=True``.
    """
    _check_shared_grid(run1, run2)
    if tol is None:
        tol = uniqueness_tolerance(run1, run2)
    dv = _state_values(run1.x) - _state_values(run2.x)
    ev = _state_values(run1.y) - _state_values(run2.y)
    de = np.diff(ev, axis=0)
    prefix = np.zeros(dv.shape[0])
    prefix[1:] = np.cumsum(np.einsum("ke,ke->k", dv[:-1], de))
    best = -np.inf
    arg = (0, run1.grid.n_segments)
    for u, v in _pair_windows(run1.grid.n_segments, full):
        val = prefix[v] - prefix[u] - float(dv[u] @ (ev[v] - ev[u]))
        if val > best:
            best = val
            arg = (u, v)
    t = run1.grid.times
    return UniquenessReport(float(best), (float(t[arg[0]]), float(t[arg[1]])), float(tol))


def uniqueness_functional_rough(
    run1: SweepingRun, run2: SweepingRun, full: bool = False, tol: float | None = None
) -> UniquenessReport:
    """Rough-regime variant: state increments are replaced by controlled remainders.

    Both runs must expose a driver and the field along the state
    (``x_derivative``); the remainder of run i over [u, t_k] is
    x_i(u, t_k) - f_i(x_i(u)) z(u, t_k).  With zero derivatives this reduces
    to the Young functional bitwise.
    """
    _check_shared_grid(run1, run2)
    for run in (run1, run2):
        if run.driver is None or run.x_derivative is None:
            raise ValueError("rough functional needs runs with driver and x_derivative")
    zv1 = _state_values(run1.driver)
    zv2 = _state_values(run2.driver)
    if not np.array_equal(zv1, zv2):
        raise ValueError("runs must share one driver realization")
    if tol is None:
        tol = uniqueness_tolerance(run1, run2)
    dv = _state_values(run1.x) - _state_values(run2.x)
    ev = _state_values(run1.y) - _state_values(run2.y)
    gv = run1.x_derivative.values - run2.x_derivative.values  # (n+1, e, d)
    de = np.diff(ev, axis=0)
    n1 = dv.shape[0]
    prefix = np.zeros(n1)
    prefix[1:] = np.cumsum(np.einsum("ke,ke->k", dv[:-1], de))
    # prefix of dE_k (x) z_k for the Gubinelli correction term
    pz = np.zeros((n1,) + (ev.shape[1], zv1.shape[1]))
    pz[1:] = np.cumsum(de[:, :, None] * zv1[:-1, None, :], axis=0)
    best = -np.inf
    arg = (0, run1.grid.n_segments)
    for u, v in _pair_windows(run1.grid.n_segments, full):
        young_part = prefix[v] - prefix[u] - float(dv[u] @ (ev[v] - ev[u]))
        corr = pz[v] - pz[u] - np.outer(ev[v] - ev[u], zv1[u])
        val = young_part - float(np.sum(gv[u] * corr))
        if val > best:
            best = val
            arg = (u, v)
    t = run1.grid.times
    return UniquenessReport(float(best), (float(t[arg[0]]), float(t[arg[1]])), float(tol))


# ---------------------------------------------------------------------------
# grid-refinement studies


@dataclass(frozen=True)
class ConvergenceReport:
    grid_sizes: tuple[int, ...]
    sup_gaps: tuple[float, ...]
    ratios: tuple[float, ...]
    empirical_order: float
    theory_order: float


def convergence_study(
    run_factory: Callable[[Grid, SamplePath | None], SweepingRun],
    n_list: Sequence[int],
    horizon: float,
    fine_driver: SamplePath | None = None,
    theory_order: float = float("nan"),
) -> ConvergenceReport:
    """Refinement ladder on nested uniform grids with one shared driver.

    ``n_list`` must be ascending with each entry dividing the next; the
    driver (given on the finest grid) is restricted to coarser grids by
    index subsampling, so all runs see one noise realization.  Gaps are sup
    norms of state differences of consecutive ladder entries, compared at
    the coarser grid's points; the empirical order is the negated
    least-squares slope of log gap against log n.
    """
    ns = [int(n) for n in n_list]
    if not ns:
        raise ValueError("n_list cannot be empty")
    for a, b in zip(ns, ns[1:]):
        if b <= a or b % a != 0:
            raise ValueError("n_list must be ascending and nested (each divides the next)")
    if fine_driver is not None and fine_driver.grid.n_segments != ns[-1]:
        raise ValueError("driver must live on the finest grid")
    runs = []
    for n in ns:
        grid = Grid.uniform(n, horizon)
        driver = fine_driver.subsample(ns[-1] // n) if fine_driver is not None else None
        runs.append(run_factory(grid, driver))
    gaps = []
    for rc, rf, nc, nf in zip(runs, runs[1:], ns, ns[1:]):
        stride = nf // nc
        gap = np.linalg.norm(
            _state_values(rf.x)[::stride] - _state_values(rc.x), axis=1
        )
        gaps.append(float(np.max(gap)))
    ratios = [
        g2 / g1 if g1 > 0.0 else float("nan") for g1, g2 in zip(gaps, gaps[1:])
    ]
    positive = [(n, g) for n, g in zip(ns, gaps) if g > 0.0]
    if len(positive) >= 2:
        fit = stats.linregress(
            np.log([n for n, _ in positive]), np.log([g for _, g in positive])
        )
        order = -float(fit.slope)
    else:
        order = float("nan")
    return ConvergenceReport(
        grid_sizes=tuple(ns),
        sup_gaps=tuple(gaps),
        ratios=tuple(ratios),
        empirical_order=order,
        theory_order=float(theory_order),
    )
