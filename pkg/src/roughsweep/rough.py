"""Young integrals, step-2 rough lifts, and controlled paths on grids.

Conventions.  A driver z is a sampled path in R^d.  Its step-2 lift stores
one area matrix per grid segment; the window area over [t_i, t_j] is the
Chen fold of the segment areas,

    A(s, t) = A(s, u) + A(u, t) + z(s, u) (x) z(u, t),

with the first tensor index belonging to the earlier factor (A_ab ~
integral of z^a dz^b over the window).  Piecewise-linear lifts use the
segment areas (1/2) dz (x) dz, which makes the symmetric part of every
window area equal to (1/2) z(s,t) (x) z(s,t).
"""

from __future__ import annotations

from dataclasses import InitVar, dataclass
from typing import Callable

import numpy as np

from .paths import Grid, SamplePath, p_variation, p_variation_increments


def _vals2d(path: SamplePath) -> np.ndarray:
    v = path.values
    return v.reshape(v.shape[0], -1) if v.ndim == 1 else v


@dataclass(frozen=True)
class RoughLift:
    """A sampled driver with one step-2 area matrix per grid segment.

    Window areas over index windows are generated from the segment areas by
    folding the Chen relation, so the relation holds across every interior
    point by construction; whether the lift is (weakly) geometric depends on
    the supplied areas.
    """

    base: SamplePath
    areas: np.ndarray

    def __post_init__(self):
        a = np.asarray(self.areas, dtype=np.float64)
        d = _vals2d(self.base).shape[1]
        n = self.base.grid.n_segments
        if a.shape != (n, d, d):
            raise ValueError(f"areas must have shape {(n, d, d)}, got {a.shape}")
        a = np.ascontiguousarray(a)
        a.setflags(write=False)
        object.__setattr__(self, "areas", a)

    @property
    def grid(self) -> Grid:
        return self.base.grid

    @property
    def driver_dim(self) -> int:
        return _vals2d(self.base).shape[1]

    def increment(self, i: int, j: int) -> np.ndarray:
        v = _vals2d(self.base)
        return v[j] - v[i]

    def window_area(self, i: int, j: int) -> np.ndarray:
        """Area over [t_i, t_j], the Chen fold of the segment areas.

        Folding A <- A + areas[k] + z(i, k) (x) z(k, k+1) over the window's
        segments, evaluated as one vectorized sum.
        """
        if not (0 <= i <= j <= self.grid.n_segments):
            raise ValueError("window indices out of range")
        v = _vals2d(self.base)
        d = v.shape[1]
        if i == j:
            return np.zeros((d, d))
        rel = v[i:j] - v[i]
        dz = v[i + 1 : j + 1] - v[i:j]
        return self.areas[i:j].sum(axis=0) + np.einsum("ka,kb->ab", rel, dz)


def lift_piecewise_linear(z: SamplePath) -> RoughLift:
    """Step-2 lift of the piecewise-linear interpolation of the samples."""
    v = _vals2d(z)
    dz = np.diff(v, axis=0)
    areas = 0.5 * dz[:, :, None] * dz[:, None, :]
    return RoughLift(base=z, areas=areas)


def chen_combine(lift: RoughLift, s: int, u: int, t: int) -> np.ndarray:
    """Window area over [t_s, t_t] assembled through the interior point t_u."""
    if not (s <= u <= t):
        raise ValueError("need s <= u <= t")
    return lift.window_area(s, u) + lift.window_area(u, t) + np.outer(
        lift.increment(s, u), lift.increment(u, t)
    )


@dataclass(frozen=True)
class ControlledPath:
    """A path y with a Gubinelli derivative y' against a reference lift.

    ``value`` has shape (n+1, *S); ``derivative`` has shape (n+1, *S, d) and
    acts on driver increments through its last axis, so the remainder of the
    window [t_i, t_j] is

        R(i, j) = y(t_i, t_j) - y'(t_i) z(t_i, t_j).
    """

    value: SamplePath
    derivative: SamplePath
    reference: RoughLift

    def __post_init__(self):
        if self.value.grid != self.reference.grid:
            raise ValueError("value grid must match the reference lift")
        if self.derivative.grid != self.reference.grid:
            raise ValueError("derivative grid must match the reference lift")
        d = self.reference.driver_dim
        vs = self.value.values.shape[1:]
        ds = self.derivative.values.shape[1:]
        if ds != vs + (d,):
            raise ValueError(
                f"derivative value shape {ds} must be value shape {vs} + ({d},)"
            )

    def remainder(self, i: int, j: int) -> np.ndarray:
        dz = self.reference.increment(i, j)
        gub = np.tensordot(self.derivative.values[i], dz, axes=([-1], [0]))
        return self.value.increment(i, j) - gub

    def remainder_norms(self) -> np.ndarray:
        """Matrix of ||R(i, j)|| for all grid windows i <= j."""
        v = self.value.values
        n1 = v.shape[0]
        flat = v.reshape(n1, -1)
        z = _vals2d(self.reference.base)
        dv = self.derivative.values.reshape(n1, -1, z.shape[1])
        out = np.zeros((n1, n1))
        for i in range(n1):
            incr = flat[i + 1 :] - flat[i]
            gub = dv[i] @ (z[i + 1 :] - z[i]).T  # (flat_dim, n1-i-1)
            out[i, i + 1 :] = np.linalg.norm(incr - gub.T, axis=1)
        return out

    def remainder_variation(self, p: float) -> float:
        """p/2-variation of the remainder over the full grid (needs p >= 2)."""
        if p < 2.0:
            raise ValueError("remainder variation uses exponent p/2 >= 1")
        return p_variation_increments(self.remainder_norms(), p / 2.0)


@dataclass(frozen=True)
class VectorField:
    """A smooth field x -> f(x) with hand-coded Jacobian and declared bounds.

    ``value(x)`` returns an array of some fixed shape S, ``jacobian(x)``
    returns shape S + (state_dim,) (last axis = direction of
    differentiation).  ``bounds`` declares (sup ||f||, sup ||Df||, Lip(Df));
    the Jacobian is spot-verified against finite differences of the value at
    random points on construction.
    """

    value: Callable[[np.ndarray], np.ndarray]
    jacobian: Callable[[np.ndarray], np.ndarray]
    bounds: tuple[float, float, float]
    state_dim: int
    validate: InitVar[bool] = True

    def __post_init__(self, validate: bool = True):
        object.__setattr__(self, "bounds", tuple(float(b) for b in self.bounds))
        if len(self.bounds) != 3 or min(self.bounds) < 0.0:
            raise ValueError("bounds must be three nonnegative numbers")
        if self.state_dim < 1:
            raise ValueError("state dimension must be >= 1")
        if validate:
            self._probe_jacobian()

    def _probe_jacobian(self, n_points: int = 32, step: float = 1e-5):
        rng = np.random.Generator(np.random.Philox(key=7))
        lip = self.bounds[2]
        tol = max(1e-7, 10.0 * step * (1.0 + lip))
        for _ in range(n_points):
            x = rng.standard_normal(self.state_dim)
            v = rng.standard_normal(self.state_dim)
            v /= np.linalg.norm(v)
            fd = (np.asarray(self.value(x + step * v)) - np.asarray(self.value(x))) / step
            jv = np.tensordot(np.asarray(self.jacobian(x)), v, axes=([-1], [0]))
            if np.max(np.abs(fd - jv)) > tol:
                raise ValueError(
                    "declared jacobian disagrees with finite differences "
                    f"(gap {np.max(np.abs(fd - jv)):.3e} > {tol:.3e})"
                )


def _resolve_window(grid: Grid, window):
    if window is None:
        return 0, grid.n_segments
    i0, i1 = int(window[0]), int(window[1])
    if not (0 <= i0 < i1 <= grid.n_segments):
        raise ValueError("window indices out of range")
    return i0, i1


def _running(grid: Grid, terms: np.ndarray, i0: int, i1: int) -> SamplePath:
    out = np.zeros((len(grid),) + terms.shape[1:])
    out[i0 + 1 : i1 + 1] = np.cumsum(terms, axis=0)
    out[i1 + 1 :] = out[i1]
    return SamplePath(grid, out)


def young_integral(
    y: SamplePath, z: SamplePath, window: tuple[int, int] | None = None
) -> SamplePath:
    """Left-point Riemann sums of y against dz, as a running path.

    The output lives on the shared grid, vanishes up to the window start and
    is frozen after the window end; the window increment is the value at the
    window end.  Scalar-against-scalar, row-against-vector and
    matrix-against-vector pairings are supported.
    """
    if y.grid != z.grid:
        raise ValueError("integrand and driver must share one grid")
    i0, i1 = _resolve_window(y.grid, window)
    dz = np.diff(_vals2d(z), axis=0)[i0:i1]
    yv = y.values[i0:i1]
    if y.values.ndim == 1 and z.values.ndim == 1:
        terms = yv * dz[:, 0]
    else:
        terms = np.einsum("k...i,ki->k...", yv, dz)
    return _running(y.grid, terms, i0, i1)


def rough_integral(
    y: ControlledPath, lift: RoughLift, window: tuple[int, int] | None = None
) -> SamplePath:
    """Compensated Riemann sums of a controlled integrand against a lift.

    Each segment contributes y(t_k) z(t_k, t_{k+1}) + y'(t_k) A_k, where the
    derivative's driver axis contracts against the first (earlier) index of
    the segment area and the value's column axis against the second.  With
    y' = 0 this reduces bitwise to :func:`young_integral`.
    """
    if y.reference is not lift and not (
        y.reference.grid == lift.grid
        and np.array_equal(y.reference.base.values, lift.base.values)
        and np.array_equal(y.reference.areas, lift.areas)
    ):
        raise ValueError("controlled path was built against a different lift")
    i0, i1 = _resolve_window(lift.grid, window)
    dz = np.diff(_vals2d(lift.base), axis=0)[i0:i1]
    areas = lift.areas[i0:i1]
    scalar = y.value.values.ndim == 1
    if scalar:
        if lift.driver_dim != 1:
            raise ValueError("scalar integrand needs a one-dimensional driver")
        yv = y.value.values[i0:i1, None, None]
        yp = y.derivative.values[i0:i1, None, None, :]
    else:
        yv = y.value.values[i0:i1]
        yp = y.derivative.values[i0:i1]
    if yv.ndim != 3:
        raise ValueError("rough integrands must take matrix values (e, d)")
    terms = np.einsum("kei,ki->ke", yv, dz) + np.einsum("keab,kba->ke", yp, areas)
    if scalar:
        terms = terms[:, 0]
    return _running(lift.grid, terms, i0, i1)


def compose_controlled(phi: VectorField, x: ControlledPath) -> ControlledPath:
    """Controlled path of phi(x): value phi(x(t)), derivative Dphi(x(t)) x'(t)."""
    vals = np.array([np.asarray(phi.value(v), dtype=np.float64) for v in x.value.values])
    derivs = np.array(
        [
            np.tensordot(
                np.asarray(phi.jacobian(v), dtype=np.float64), dx, axes=([-1], [0])
            )
            for v, dx in zip(x.value.values, x.derivative.values)
        ]
    )
    grid = x.value.grid
    return ControlledPath(
        value=SamplePath(grid, vals),
        derivative=SamplePath(grid, derivs),
        reference=x.reference,
    )


@dataclass(frozen=True)
class RemainderBoundReport:
    """Observed vs declared remainder growth under composition."""

    lhs: float
    rhs: float
    ok: bool


def remainder_bound_check(phi: VectorField, x: ControlledPath, p: float) -> RemainderBoundReport:
    """Check ||R_{phi(x)}||_{p/2} <= B (||x||_p^2 + ||R_x||_{p/2}) on the grid.

    B is the largest declared bound of the field; the inequality is the
    discrete form of the composition remainder estimate and must hold
    whenever the declared bounds dominate the true ones.
    """
    composed = compose_controlled(phi, x)
    lhs = composed.remainder_variation(p)
    xvar = p_variation(x.value, p)
    rhs = max(phi.bounds) * (xvar**2 + x.remainder_variation(p))
    return RemainderBoundReport(lhs=lhs, rhs=rhs, ok=bool(lhs <= rhs * (1.0 + 1e-9) + 1e-15))
