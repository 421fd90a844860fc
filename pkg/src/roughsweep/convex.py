"""Closed bounded convex sets, projections, and moving-set tubes.

The set family is deliberately small — balls, boxes, bounded polytopes in
halfspace form, and translates of these — because every consumer only needs
three primitives: metric projection, point-to-set distance, and Hausdorff
distance between family members.  Projections onto balls, boxes and
translates are closed-form; polytopes use Dykstra's alternating projections
onto their halfspaces.
"""

from __future__ import annotations

from dataclasses import InitVar, dataclass
from typing import Callable, Union

import numpy as np
from scipy.optimize import linprog

from .errors import PolytopeNonConvergence

#: default projection / feasibility tolerance (overridable per call)
PROJ_TOL = 1e-10
#: sweep budget for Dykstra's alternating projections
DYKSTRA_MAX_SWEEPS = 10_000
#: direction count for sampled Hausdorff distances on general pairs
HAUSDORFF_N_DIR = 256


def _as_vector(x) -> np.ndarray:
    v = np.asarray(x, dtype=np.float64)
    if v.ndim == 0:
        v = v.reshape(1)
    if v.ndim != 1:
        raise ValueError("expected a vector")
    return v


@dataclass(frozen=True, eq=False)
class Ball:
    """Closed Euclidean ball."""

    center: np.ndarray
    radius: float

    def __post_init__(self):
        c = _as_vector(self.center)
        c.setflags(write=False)
        object.__setattr__(self, "center", c)
        object.__setattr__(self, "radius", float(self.radius))
        if self.radius <= 0.0:
            raise ValueError("ball radius must be positive")

    @property
    def dim(self) -> int:
        return self.center.size

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Ball)
            and np.array_equal(self.center, other.center)
            and self.radius == other.radius
        )


@dataclass(frozen=True, eq=False)
class Box:
    """Axis-aligned box [lower_1, upper_1] x ... x [lower_e, upper_e]."""

    lower: np.ndarray
    upper: np.ndarray

    def __post_init__(self):
        lo, hi = _as_vector(self.lower), _as_vector(self.upper)
        if lo.shape != hi.shape:
            raise ValueError("box bounds must have matching shapes")
        if not np.all(lo < hi):
            raise ValueError("box must satisfy lower < upper componentwise")
        lo.setflags(write=False)
        hi.setflags(write=False)
        object.__setattr__(self, "lower", lo)
        object.__setattr__(self, "upper", hi)

    @property
    def dim(self) -> int:
        return self.lower.size

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Box)
            and np.array_equal(self.lower, other.lower)
            and np.array_equal(self.upper, other.upper)
        )


@dataclass(frozen=True, eq=False)
class Polytope:
    """Bounded polytope {x : <normal_i, x> <= offset_i} with unit normals.

    Construction runs a feasibility probe: the Chebyshev-center linear
    program must produce a strictly positive inscribed radius (so the set has
    a nonempty interior), and coordinate-range programs must all be bounded.
    """

    normals: np.ndarray
    offsets: np.ndarray
    validate: InitVar[bool] = True

    def __post_init__(self, validate: bool = True):
        a = np.asarray(self.normals, dtype=np.float64)
        b = np.asarray(self.offsets, dtype=np.float64).reshape(-1)
        if a.ndim != 2 or a.shape[0] != b.size or a.shape[0] < 1:
            raise ValueError("need one offset per normal row")
        scale = np.linalg.norm(a, axis=1)
        if np.any(scale == 0.0):
            raise ValueError("zero normal row")
        a = a / scale[:, None]
        b = b / scale
        a.setflags(write=False)
        b.setflags(write=False)
        object.__setattr__(self, "normals", a)
        object.__setattr__(self, "offsets", b)
        if validate:
            _probe_polytope(a, b)

    @property
    def dim(self) -> int:
        return self.normals.shape[1]

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Polytope)
            and np.array_equal(self.normals, other.normals)
            and np.array_equal(self.offsets, other.offsets)
        )


@dataclass(frozen=True, eq=False)
class Translated:
    """A base set shifted by a fixed vector: C + shift."""

    base: "ConvexSet"
    shift: np.ndarray

    def __post_init__(self):
        s = _as_vector(self.shift)
        s.setflags(write=False)
        object.__setattr__(self, "shift", s)
        if s.size != set_dim(self.base):
            raise ValueError("shift dimension must match the base set")

    @property
    def dim(self) -> int:
        return self.shift.size

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Translated)
            and self.base == other.base
            and np.array_equal(self.shift, other.shift)
        )


ConvexSet = Union[Ball, Box, Polytope, Translated]


def set_dim(cset: ConvexSet) -> int:
    return cset.dim


def _probe_polytope(normals: np.ndarray, offsets: np.ndarray) -> None:
    m, e = normals.shape
    # Chebyshev center: maximize rho subject to <a_i, x> + rho <= b_i.
    c = np.zeros(e + 1)
    c[-1] = -1.0
    a_ub = np.hstack([normals, np.ones((m, 1))])
    res = linprog(c, A_ub=a_ub, b_ub=offsets, bounds=[(None, None)] * e + [(0.0, None)])
    if res.status == 2:
        raise ValueError("polytope is empty")
    if res.status == 3 or not res.success:
        raise ValueError("polytope is unbounded or degenerate")
    if res.x[-1] <= 1e-9:
        raise ValueError("polytope has no strictly interior point")
    # Boundedness probe along every coordinate direction.
    for i in range(e):
        for sign in (1.0, -1.0):
            ci = np.zeros(e)
            ci[i] = sign
            ri = linprog(ci, A_ub=normals, b_ub=offsets, bounds=[(None, None)] * e)
            if ri.status == 3:
                raise ValueError("polytope is unbounded")


def chebyshev_center(poly: Polytope) -> tuple[np.ndarray, float]:
    """Center and radius of the largest inscribed ball (ties broken by the LP)."""
    m, e = poly.normals.shape
    c = np.zeros(e + 1)
    c[-1] = -1.0
    a_ub = np.hstack([poly.normals, np.ones((m, 1))])
    res = linprog(c, A_ub=a_ub, b_ub=poly.offsets, bounds=[(None, None)] * e + [(0.0, None)])
    if not res.success:
        raise ValueError("chebyshev LP failed")
    return res.x[:-1], float(res.x[-1])


def translate(cset: ConvexSet, shift) -> ConvexSet:
    """Same-family set shifted by a vector (nested translates are flattened)."""
    s = _as_vector(shift)
    if isinstance(cset, Ball):
        return Ball(cset.center + s, cset.radius)
    if isinstance(cset, Box):
        return Box(cset.lower + s, cset.upper + s)
    if isinstance(cset, Polytope):
        return Polytope(cset.normals, cset.offsets + cset.normals @ s, validate=False)
    if isinstance(cset, Translated):
        return translate(cset.base, cset.shift + s)
    raise TypeError(f"unsupported set type {type(cset).__name__}")


def _resolve(cset: ConvexSet) -> ConvexSet:
    """Push translation shifts into leaf parameters."""
    if isinstance(cset, Translated):
        return translate(cset.base, cset.shift)
    return cset


def _dykstra(normals, offsets, x, tol, max_sweeps):
    p = np.array(x, dtype=np.float64)
    m = normals.shape[0]
    corr = np.zeros((m, normals.shape[1]))
    for _ in range(max_sweeps):
        start = p.copy()
        for i in range(m):
            y = p + corr[i]
            viol = float(normals[i] @ y) - offsets[i]
            proj = y - viol * normals[i] if viol > 0.0 else y
            corr[i] = y - proj
            p = proj
        if np.max(np.abs(p - start)) < tol:
            return p
    raise PolytopeNonConvergence(
        f"Dykstra did not settle below {tol:g} within {max_sweeps} sweeps"
    )


def project(cset: ConvexSet, x, proj_tol: float = PROJ_TOL) -> np.ndarray:
    """Metric projection of x onto the set.

    Balls, boxes and translates are closed-form (boxes by componentwise
    clamping, which returns interior points bit-for-bit unchanged); polytopes
    run Dykstra over their halfspaces until successive sweeps move less than
    ``proj_tol``.
    """
    x = _as_vector(x)
    cset = _resolve(cset)
    if isinstance(cset, Ball):
        gap = x - cset.center
        dist = float(np.linalg.norm(gap))
        if dist <= cset.radius:
            return x
        return cset.center + gap * (cset.radius / dist)
    if isinstance(cset, Box):
        return np.minimum(np.maximum(x, cset.lower), cset.upper)
    if isinstance(cset, Polytope):
        if np.all(cset.normals @ x <= cset.offsets):
            return x
        return _dykstra(cset.normals, cset.offsets, x, proj_tol, DYKSTRA_MAX_SWEEPS)
    raise TypeError(f"unsupported set type {type(cset).__name__}")


def distance(cset: ConvexSet, x, proj_tol: float = PROJ_TOL) -> float:
    """Euclidean distance from x to the set (0 for members)."""
    x = _as_vector(x)
    return float(np.linalg.norm(x - project(cset, x, proj_tol=proj_tol)))


def interior_radius(cset: ConvexSet, point) -> float:
    """Largest rho with B(point, rho) inside the set; negative outside.

    For balls, boxes and polytopes (unit normals) this is exact; for
    translates it is computed on the resolved set.
    """
    p = _as_vector(point)
    cset = _resolve(cset)
    if isinstance(cset, Ball):
        return cset.radius - float(np.linalg.norm(p - cset.center))
    if isinstance(cset, Box):
        return float(min(np.min(p - cset.lower), np.min(cset.upper - p)))
    if isinstance(cset, Polytope):
        return float(np.min(cset.offsets - cset.normals @ p))
    raise TypeError(f"unsupported set type {type(cset).__name__}")


def support(cset: ConvexSet, direction) -> float:
    """Support function h_C(u) = sup_{x in C} <u, x>."""
    u = _as_vector(direction)
    cset = _resolve(cset)
    if isinstance(cset, Ball):
        return float(cset.center @ u) + cset.radius * float(np.linalg.norm(u))
    if isinstance(cset, Box):
        return float(np.sum(np.maximum(u * cset.lower, u * cset.upper)))
    if isinstance(cset, Polytope):
        res = linprog(
            -u, A_ub=cset.normals, b_ub=cset.offsets, bounds=[(None, None)] * cset.dim
        )
        if not res.success:
            raise ValueError("support LP failed")
        return -float(res.fun)
    raise TypeError(f"unsupported set type {type(cset).__name__}")


def _directions(dim: int, n_dir: int) -> np.ndarray:
    if dim == 1:
        return np.array([[1.0], [-1.0]])
    if dim == 2:
        ang = np.linspace(0.0, 2.0 * np.pi, n_dir, endpoint=False)
        return np.stack([np.cos(ang), np.sin(ang)], axis=1)
    if dim == 3:
        # Fibonacci sphere
        k = np.arange(n_dir)
        z = 1.0 - 2.0 * (k + 0.5) / n_dir
        phi = np.pi * (1.0 + np.sqrt(5.0)) * k
        rho = np.sqrt(1.0 - z * z)
        return np.stack([rho * np.cos(phi), rho * np.sin(phi), z], axis=1)
    rng = np.random.Generator(np.random.Philox(key=0))
    g = rng.standard_normal((n_dir, dim))
    return g / np.linalg.norm(g, axis=1, keepdims=True)


def hausdorff(
    a: ConvexSet, b: ConvexSet, n_dir: int = HAUSDORFF_N_DIR, return_exact: bool = False
):
    """Hausdorff distance between two family members.

    Exact branches: identical sets, ball/ball (||center gap|| + |radius
    gap|), box/box (largest bound deviation per coordinate), and translates
    of one common base (norm of the shift difference).  Any other pair falls
    back to support-function sampling over ``n_dir`` quasi-uniform
    directions, which under-estimates the true distance; callers that care
    can request the exactness flag.
    """
    if set_dim(a) != set_dim(b):
        raise ValueError("sets live in different dimensions")
    value, exact = _hausdorff_inner(a, b, n_dir)
    if return_exact:
        return value, exact
    return value


def _hausdorff_inner(a, b, n_dir):
    if a == b:
        return 0.0, True
    if isinstance(a, Translated) and isinstance(b, Translated) and a.base == b.base:
        return float(np.linalg.norm(a.shift - b.shift)), True
    ra, rb = _resolve(a), _resolve(b)
    if isinstance(ra, Ball) and isinstance(rb, Ball):
        return (
            float(np.linalg.norm(ra.center - rb.center)) + abs(ra.radius - rb.radius),
            True,
        )
    if isinstance(ra, Box) and isinstance(rb, Box):
        dev = max(
            float(np.max(np.abs(ra.lower - rb.lower))),
            float(np.max(np.abs(ra.upper - rb.upper))),
        )
        return dev, True
    dirs = _directions(set_dim(a), n_dir)
    gaps = [abs(support(ra, u) - support(rb, u)) for u in dirs]
    return float(max(gaps)), False


@dataclass(frozen=True)
class MovingConvexSet:
    """A tube t -> C(t) with a continuous selection gamma and interior radius r.

    ``at`` evaluates the set at a time, ``gamma`` the selection; the declared
    invariant is B(gamma(t), r) inside C(t) for all t in the horizon
    (verified on demand by :func:`verify_interior_ball`).  ``hoelder`` is an
    optional declared modulus (K, alpha) with
    d_H(C(s), C(t)) <= K |t-s|^alpha.
    """

    at: Callable[[float], ConvexSet]
    gamma: Callable[[float], np.ndarray]
    r: float
    hoelder: tuple[float, float] | None = None

    def __post_init__(self):
        object.__setattr__(self, "r", float(self.r))
        if self.r <= 0.0:
            raise ValueError("interior radius must be positive")
        if self.hoelder is not None:
            k, alpha = self.hoelder
            if k < 0.0 or not (0.0 < alpha <= 1.0):
                raise ValueError("hoelder must be (K >= 0, 0 < alpha <= 1)")
            object.__setattr__(self, "hoelder", (float(k), float(alpha)))

    @classmethod
    def static(cls, cset: ConvexSet, gamma, r: float) -> "MovingConvexSet":
        g = _as_vector(gamma)
        return cls(at=lambda t: cset, gamma=lambda t: g, r=r, hoelder=(0.0, 1.0))

    @classmethod
    def translating(cls, base: ConvexSet, velocity, gamma0, r: float) -> "MovingConvexSet":
        """Tube C(t) = base + t * velocity with the selection carried along."""
        v = _as_vector(velocity)
        g0 = _as_vector(gamma0)
        return cls(
            at=lambda t: Translated(base, t * v),
            gamma=lambda t: g0 + t * v,
            r=r,
            hoelder=(float(np.linalg.norm(v)), 1.0),
        )


@dataclass(frozen=True)
class InteriorBallReport:
    """Worst-case slack of the declared interior ball along a grid."""

    min_margin: float
    worst_time: float
    ok: bool


def verify_interior_ball(m: MovingConvexSet, grid) -> InteriorBallReport:
    """Check B(gamma(t), r) inside C(t) at the grid times.

    The margin at t is the exact inscribed radius at gamma(t) minus r; the
    report carries the minimum margin and where it is attained.
    """
    margins = np.array(
        [interior_radius(m.at(t), m.gamma(t)) - m.r for t in grid.times]
    )
    k = int(np.argmin(margins))
    return InteriorBallReport(
        min_margin=float(margins[k]),
        worst_time=float(grid.times[k]),
        ok=bool(margins[k] >= 0.0),
    )


def spot_check_hoelder(m: MovingConvexSet, grid, max_pairs: int = 64) -> float:
    """Largest observed d_H(C(s), C(t)) / (K |t-s|^alpha) over sampled grid pairs.

    Requires a declared modulus; a return value <= 1 (up to sampling slack)
    is consistent with the declaration.  Pairs are consecutive and dyadically
    spaced grid points, capped at ``max_pairs``.
    """
    if m.hoelder is None:
        raise ValueError("no declared hoelder modulus to check")
    k_const, alpha = m.hoelder
    t = grid.times
    pairs = []
    stride = 1
    while stride <= grid.n_segments:
        idx = np.arange(0, grid.n_segments + 1 - stride, stride)
        pairs.extend((int(i), int(i + stride)) for i in idx[: max_pairs // 4 + 1])
        stride *= 2
    worst = 0.0
    for i, j in pairs[:max_pairs]:
        gap = hausdorff(m.at(t[i]), m.at(t[j]))
        if k_const == 0.0:
            worst = max(worst, gap)  # static declaration: gap itself must vanish
            continue
        worst = max(worst, gap / (k_const * (t[j] - t[i]) ** alpha))
    return worst
