"""Shared fixtures for the test suite.

The central object is the solver run matrix: named configurations spanning
the convex-set families (ball, box, polytope), static and moving tubes, and
all five schemes.  Invariant tests iterate over every entry, so the matrix
is built once per session.
"""

from typing import NamedTuple

import numpy as np
import pytest

from roughsweep import (
    Ball,
    Box,
    FbmSpec,
    Grid,
    MovingConvexSet,
    Polytope,
    SamplePath,
    VectorField,
    catching_up,
    euler_catching_up,
    lift_piecewise_linear,
    picard_rough,
    picard_young,
    sample_fbm,
    skorokhod_decompose,
)
from roughsweep.solvers import SweepingRun

N_MATRIX = 128
HORIZON = 1.0


class RunCase(NamedTuple):
    name: str
    run: SweepingRun
    m: MovingConvexSet


def sine_signal(grid: Grid, amp: float = 1.2, freq: float = 4.0 * np.pi,
                slope: float = -0.3) -> SamplePath:
    """Scalar signal amp*sin(freq t) + slope*t, starting at zero."""
    vals = amp * np.sin(freq * grid.times) + slope * grid.times
    return SamplePath(grid, vals[:, None])


def circle_signal(grid: Grid, radius: float) -> SamplePath:
    """Planar loop of the given radius, starting at the origin."""
    th = 2.0 * np.pi * grid.times
    vals = radius * np.stack([np.cos(th) - 1.0, np.sin(th)], axis=1)
    return SamplePath(grid, vals)


def scaled_fbm(grid: Grid, hurst: float, dims: int, seed: int,
               scale: float) -> SamplePath:
    b = sample_fbm(FbmSpec(hurst=hurst, horizon=grid.horizon,
                           n=grid.n_segments, dims=dims, seed=seed))
    return SamplePath(grid, scale * b.values)


def triangle(scale: float = 1.2) -> Polytope:
    """The planar region {x + y <= scale, x >= -1, y >= -1}."""
    return Polytope(
        normals=[[1.0, 1.0], [-1.0, 0.0], [0.0, -1.0]],
        offsets=[scale, 1.0, 1.0],
    )


def linear_field_1d(offset: float, gain: float) -> VectorField:
    """f(x) = offset + gain*x as a 1x1 matrix field."""
    return VectorField(
        value=lambda x: np.array([[offset + gain * x[0]]]),
        jacobian=lambda x: np.array([[[gain]]]),
        bounds=(offset + 3.0 * abs(gain), abs(gain), 0.0),
        state_dim=1,
    )


def _build_matrix() -> list[RunCase]:
    grid = Grid.uniform(N_MATRIX, HORIZON)
    cases = []

    # --- unperturbed catching-up -----------------------------------------
    m = MovingConvexSet.static(Ball([0.0, 0.0], 1.0), [0.0, 0.0], 0.6)
    cases.append(RunCase("cu_static_ball", catching_up(m, [0.9, 0.0], grid), m))

    m = MovingConvexSet.translating(Ball([0.0, 0.0], 1.0), [0.5, 0.0],
                                    [0.0, 0.0], 0.5)
    cases.append(RunCase("cu_moving_ball", catching_up(m, [-0.5, 0.5], grid), m))

    m = MovingConvexSet.translating(Box([0.0], [1.0]), [0.6], [0.5], 0.3)
    cases.append(RunCase("cu_moving_box", catching_up(m, [0.1], grid), m))

    # --- Skorokhod decomposition -----------------------------------------
    m = MovingConvexSet.static(Box([0.0], [2.0]), [1.0], 0.6)
    h = sine_signal(grid)
    cases.append(RunCase("sk_static_box", skorokhod_decompose(m, [0.5], h), m))

    m = MovingConvexSet.static(triangle(), [-0.2, -0.2], 0.35)
    h = circle_signal(grid, 0.55)
    cases.append(RunCase("sk_static_polytope",
                         skorokhod_decompose(m, [0.0, 0.0], h), m))

    m = MovingConvexSet.translating(Ball([0.0, 0.0], 1.0), [0.3, 0.0],
                                    [0.0, 0.0], 0.5)
    h = circle_signal(grid, 0.55)
    cases.append(RunCase("sk_moving_ball",
                         skorokhod_decompose(m, [0.2, 0.0], h), m))

    m = MovingConvexSet.translating(triangle(), [0.2, 0.1], [-0.2, -0.2], 0.35)
    h = circle_signal(grid, 0.55)
    cases.append(RunCase("sk_moving_polytope",
                         skorokhod_decompose(m, [0.0, 0.0], h), m))

    # --- Euler with drift and additive noise -----------------------------
    m = MovingConvexSet.static(Box([0.0], [1.0]), [0.5], 0.4)
    w = scaled_fbm(grid, hurst=0.7, dims=1, seed=101, scale=0.5)
    cases.append(RunCase("eu_static_box",
                         euler_catching_up(m, [0.5], lambda x: -x, w), m))

    m = MovingConvexSet.translating(Box([0.0], [2.0]), [1.2], [1.0], 0.5)
    w = scaled_fbm(grid, hurst=0.6, dims=1, seed=102, scale=0.25)
    cases.append(RunCase("eu_moving_box",
                         euler_catching_up(m, [0.5], lambda x: 0.3 * np.ones(1), w),
                         m))

    m = MovingConvexSet.static(triangle(0.5), [-0.2, -0.2], 0.35)
    w = scaled_fbm(grid, hurst=0.7, dims=2, seed=103, scale=0.3)
    cases.append(RunCase("eu_static_polytope",
                         euler_catching_up(m, [0.0, 0.0], lambda x: -0.5 * x, w),
                         m))

    # --- Picard with Young integrals -------------------------------------
    m = MovingConvexSet.static(Box([0.0], [0.6]), [0.3], 0.25)
    f = VectorField(
        value=lambda x: np.array([[0.2 * np.cos(x[0])]]),
        jacobian=lambda x: np.array([[[-0.2 * np.sin(x[0])]]]),
        bounds=(0.2, 0.2, 0.2),
        state_dim=1,
    )
    z = SamplePath(grid, grid.times[:, None])
    cases.append(RunCase("py_static_box", picard_young(m, [0.5], f, z), m))

    m = MovingConvexSet.static(Ball([0.0, 0.0], 1.2), [0.0, 0.0], 0.7)
    f = VectorField(
        value=lambda x: np.array([[0.3], [0.1]]),
        jacobian=lambda x: np.zeros((2, 1, 2)),
        bounds=(0.4, 0.0, 0.0),
        state_dim=2,
    )
    z = scaled_fbm(grid, hurst=0.8, dims=1, seed=104, scale=0.5)
    cases.append(RunCase("py_static_ball", picard_young(m, [0.5, 0.0], f, z), m))

    # --- Picard with rough integrals -------------------------------------
    m = MovingConvexSet.static(Box([0.0], [0.8]), [0.4], 0.3)
    f = linear_field_1d(0.1, 0.1)
    lift = lift_piecewise_linear(scaled_fbm(grid, hurst=0.4, dims=1,
                                            seed=105, scale=0.8))
    cases.append(RunCase("pr_static_box", picard_rough(m, [0.5], f, lift), m))

    m = MovingConvexSet.static(Ball([0.0, 0.0], 1.2), [0.0, 0.0], 0.7)
    f = VectorField(
        value=lambda x: np.diag(0.05 + 0.1 * x),
        jacobian=lambda x: 0.1 * np.einsum("ij,im->ijm", np.eye(2), np.eye(2)),
        bounds=(0.4, 0.2, 0.0),
        state_dim=2,
    )
    lift = lift_piecewise_linear(scaled_fbm(grid, hurst=0.45, dims=2,
                                            seed=106, scale=0.3))
    cases.append(RunCase("pr_static_ball", picard_rough(m, [0.3, 0.2], f, lift), m))

    return cases


@pytest.fixture(scope="session")
def run_matrix() -> list[RunCase]:
    return _build_matrix()
