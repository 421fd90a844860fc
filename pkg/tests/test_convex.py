"""Convex sets, projections, Hausdorff distances, and moving tubes."""

import itertools

import numpy as np
import pytest

from roughsweep import (
    Ball,
    Box,
    Grid,
    MovingConvexSet,
    Polytope,
    PolytopeNonConvergence,
    Translated,
    distance,
    hausdorff,
    interior_radius,
    project,
    translate,
    verify_interior_ball,
)
from roughsweep.convex import (
    PROJ_TOL,
    _dykstra,
    chebyshev_center,
    spot_check_hoelder,
    support,
)

TRIANGLE = Polytope(
    normals=[[1.0, 1.0], [-1.0, 0.0], [0.0, -1.0]],
    offsets=[1.0, 0.0, 0.0],
)


def active_set_project(poly: Polytope, x: np.ndarray) -> np.ndarray:
    """Exact projection onto a planar polytope by candidate enumeration.

    The nearest point is x itself, the foot on one face hyperplane, or a
    vertex; enumerate all of them and keep the closest feasible one.
    """
    a, b = poly.normals, poly.offsets
    feasible = lambda v: np.all(a @ v <= b + 1e-12)
    candidates = [x] if feasible(x) else []
    for ai, bi in zip(a, b):
        foot = x - (ai @ x - bi) * ai
        if feasible(foot):
            candidates.append(foot)
    for i, j in itertools.combinations(range(len(b)), 2):
        mat = np.array([a[i], a[j]])
        if abs(np.linalg.det(mat)) < 1e-12:
            continue
        vertex = np.linalg.solve(mat, [b[i], b[j]])
        if feasible(vertex):
            candidates.append(vertex)
    return min(candidates, key=lambda v: np.linalg.norm(v - x))


def sample_sets(rng):
    dim = int(rng.integers(1, 4))
    which = rng.integers(0, 3)
    if which == 0:
        return Ball(rng.standard_normal(dim), float(rng.uniform(0.5, 2.0)))
    if which == 1:
        lo = rng.standard_normal(dim)
        return Box(lo, lo + rng.uniform(0.5, 2.0, dim))
    lo = rng.standard_normal(2)
    box_as_poly = Polytope(
        normals=np.vstack([np.eye(2), -np.eye(2)]),
        offsets=np.concatenate([lo + 1.0, -lo]),
    )
    return box_as_poly if rng.integers(0, 2) else Translated(TRIANGLE, rng.standard_normal(2))


# ---------------------------------------------------------------------------
# construction and validation


def test_ball_box_validation():
    with pytest.raises(ValueError):
        Ball([0.0, 0.0], 0.0)
    with pytest.raises(ValueError):
        Box([0.0, 0.0], [1.0, 0.0])  # upper must exceed lower
    with pytest.raises(ValueError):
        Box([0.0], [1.0, 2.0])
    with pytest.raises(ValueError):
        Translated(Ball([0.0, 0.0], 1.0), [1.0])  # shift dimension mismatch


def test_polytope_normalizes_rows():
    poly = Polytope(normals=[[2.0, 0.0], [0.0, -3.0], [-1.0, 0.0], [0.0, 3.0]],
                    offsets=[2.0, 0.0, 1.0, 6.0])
    assert np.allclose(np.linalg.norm(poly.normals, axis=1), 1.0)
    assert np.allclose(poly.offsets, [1.0, 0.0, 1.0, 2.0])


def test_polytope_probe_rejects_unbounded():
    # A slab constrains one coordinate only, so coordinate ranges diverge.
    with pytest.raises(ValueError):
        Polytope(normals=[[1.0, 0.0], [-1.0, 0.0]], offsets=[1.0, 1.0])


def test_polytope_probe_rejects_empty():
    with pytest.raises(ValueError):
        Polytope(normals=[[1.0], [-1.0]], offsets=[-1.0, -2.0])  # x <= -1, x >= 2


def test_polytope_probe_rejects_degenerate_interior():
    with pytest.raises(ValueError):
        Polytope(normals=[[1.0], [-1.0]], offsets=[0.0, 0.0])  # the single point 0


def test_polytope_validate_flag_skips_probe():
    poly = Polytope(normals=[[1.0, 0.0], [-1.0, 0.0]], offsets=[1.0, 1.0],
                    validate=False)
    assert poly.dim == 2


def test_chebyshev_center_unit_square():
    square = Polytope(
        normals=np.vstack([np.eye(2), -np.eye(2)]),
        offsets=[1.0, 1.0, 0.0, 0.0],
    )
    center, radius = chebyshev_center(square)
    assert np.allclose(center, [0.5, 0.5], atol=1e-8)
    assert radius == pytest.approx(0.5, abs=1e-8)


def test_set_equality_semantics():
    assert Ball([0.0, 0.0], 1.0) == Ball([0.0, 0.0], 1.0)
    assert Ball([0.0, 0.0], 1.0) != Ball([0.0, 0.0], 2.0)
    assert Box([0.0], [1.0]) == Box([0.0], [1.0])
    assert TRIANGLE == Polytope(normals=[[1.0, 1.0], [-1.0, 0.0], [0.0, -1.0]],
                                offsets=[1.0, 0.0, 0.0])
    assert Translated(TRIANGLE, [1.0, 0.0]) != Translated(TRIANGLE, [0.0, 1.0])


# ---------------------------------------------------------------------------
# projections


def test_project_ball_radial():
    assert np.allclose(project(Ball([0.0, 0.0], 1.0), [3.0, 4.0]), [0.6, 0.8])


def test_project_box_clamp():
    assert np.allclose(project(Box([0.0, 0.0], [1.0, 1.0]), [2.0, -1.0]), [1.0, 0.0])


def test_project_triangle_corner():
    got = project(TRIANGLE, [1.0, 1.0])
    assert np.allclose(got, [0.5, 0.5], atol=1e-9)


def test_project_member_is_identity_bitwise():
    rng = np.random.Generator(np.random.Philox(key=21))
    ball = Ball([0.0, 0.0], 1.0)
    box = Box([-1.0, -1.0], [1.0, 1.0])
    for _ in range(20):
        x = rng.uniform(-0.7, 0.7, 2)
        assert np.array_equal(project(ball, x), x)
        assert np.array_equal(project(box, x), x)


def test_project_polytope_matches_qp_reference():
    rng = np.random.Generator(np.random.Philox(key=22))
    pentagon = Polytope(
        normals=[[np.cos(a), np.sin(a)] for a in np.linspace(0, 2 * np.pi, 5,
                                                             endpoint=False)],
        offsets=np.full(5, 1.0),
    )
    for poly in (TRIANGLE, pentagon):
        for _ in range(10):
            x = rng.uniform(-3.0, 3.0, 2)
            assert np.allclose(project(poly, x), active_set_project(poly, x),
                               atol=1e-8)


def test_project_nonexpansive():
    rng = np.random.Generator(np.random.Philox(key=23))
    for _ in range(40):
        cset = sample_sets(rng)
        dim = cset.dim
        x, z = rng.standard_normal(dim) * 3, rng.standard_normal(dim) * 3
        px, pz = project(cset, x), project(cset, z)
        assert np.linalg.norm(px - pz) <= np.linalg.norm(x - z) + 1e-9


def test_project_idempotent():
    rng = np.random.Generator(np.random.Philox(key=24))
    for _ in range(40):
        cset = sample_sets(rng)
        p1 = project(cset, rng.standard_normal(cset.dim) * 3)
        p2 = project(cset, p1)
        assert np.linalg.norm(p2 - p1) <= 10.0 * PROJ_TOL


def test_project_variational_inequality():
    rng = np.random.Generator(np.random.Philox(key=25))
    for _ in range(40):
        cset = sample_sets(rng)
        dim = cset.dim
        x = rng.standard_normal(dim) * 3
        px = project(cset, x)
        for _ in range(5):
            z = project(cset, rng.standard_normal(dim) * 3)  # a member point
            gap = float((x - px) @ (z - px))
            assert gap <= 1e-8 * (1.0 + np.linalg.norm(x))


def test_project_translated_consistent_with_base():
    rng = np.random.Generator(np.random.Philox(key=26))
    for _ in range(10):
        s = rng.standard_normal(2)
        x = rng.standard_normal(2) * 2
        direct = project(Translated(TRIANGLE, s), x + s)
        assert np.allclose(direct, project(TRIANGLE, x) + s, atol=1e-8)


def test_project_dimension_mismatch():
    with pytest.raises(ValueError):
        project(Ball([0.0, 0.0], 1.0), [1.0, 2.0, 3.0])


def test_dykstra_nonconvergence_raises():
    far = np.array([10.0, 10.0])
    with pytest.raises(PolytopeNonConvergence):
        _dykstra(TRIANGLE.normals, TRIANGLE.offsets, far, 1e-12, max_sweeps=1)


# ---------------------------------------------------------------------------
# distances


def test_distance_values():
    ball = Ball([0.0, 0.0], 1.0)
    assert distance(ball, [0.0, 0.5]) == 0.0
    assert distance(ball, [2.0, 0.0]) == pytest.approx(1.0)
    assert distance(Box([0.0, 0.0], [1.0, 1.0]), [2.0, 2.0]) == pytest.approx(np.sqrt(2.0))
    assert distance(TRIANGLE, [1.0, 1.0]) == pytest.approx(np.sqrt(0.5), abs=1e-8)


# ---------------------------------------------------------------------------
# translation


def test_translate_pushes_into_leaves():
    moved = translate(Ball([0.0, 0.0], 1.0), [1.0, 2.0])
    assert isinstance(moved, Ball)
    assert np.allclose(moved.center, [1.0, 2.0])
    moved = translate(Box([0.0], [1.0]), [0.5])
    assert isinstance(moved, Box)
    assert np.allclose([moved.lower[0], moved.upper[0]], [0.5, 1.5])
    moved = translate(TRIANGLE, [1.0, 0.0])
    assert isinstance(moved, Polytope)
    # offsets move by <normal, shift>; geometry checked via projection
    x = np.array([2.0, 1.0])
    assert np.allclose(project(moved, x), project(TRIANGLE, x - [1.0, 0.0]) + [1.0, 0.0],
                       atol=1e-8)


def test_translate_zero_shift_keeps_values():
    moved = translate(Ball([1.0, -1.0], 2.0), [0.0, 0.0])
    assert moved == Ball([1.0, -1.0], 2.0)


# ---------------------------------------------------------------------------
# support functions and Hausdorff distances


def test_support_values():
    assert support(Ball([1.0, 0.0], 2.0), [1.0, 0.0]) == pytest.approx(3.0)
    assert support(Box([0.0, 0.0], [1.0, 2.0]), [0.0, -1.0]) == pytest.approx(0.0)
    assert support(TRIANGLE, [1.0, 1.0] / np.sqrt(2.0)) == pytest.approx(1.0 / np.sqrt(2.0))


def test_hausdorff_exact_branches():
    assert hausdorff(Ball([0.0, 0.0], 1.0), Ball([1.0, 0.0], 1.0)) == pytest.approx(1.0)
    assert hausdorff(Ball([0.0, 0.0], 1.0), Ball([0.0, 0.0], 1.0)) == 0.0
    assert hausdorff(TRIANGLE, TRIANGLE) == 0.0
    assert hausdorff(
        Box([0.0, 0.0], [1.0, 1.0]), Box([0.5, 0.0], [1.5, 1.0])
    ) == pytest.approx(0.5)
    assert hausdorff(
        Translated(TRIANGLE, [0.0, 0.0]), Translated(TRIANGLE, [3.0, 4.0])
    ) == pytest.approx(5.0)


def test_hausdorff_exact_flag():
    _, exact = hausdorff(Ball([0.0, 0.0], 1.0), Ball([1.0, 0.0], 1.0),
                         return_exact=True)
    assert exact
    _, exact = hausdorff(Ball([0.0, 0.0], 1.0), Box([-1.0, -1.0], [1.0, 1.0]),
                         return_exact=True)
    assert not exact


def test_hausdorff_sampled_interval_case():
    # In one dimension the ball [-1, 1] and the box [-1, 1] coincide and the
    # two sampling directions are exact.
    val = hausdorff(Ball([0.0], 1.0), Box([-1.0], [1.0]))
    assert val == pytest.approx(0.0, abs=1e-12)


def test_hausdorff_sampled_square_vs_disc():
    # Unit disc inside the unit square: the true distance is the corner gap.
    val = hausdorff(Ball([0.0, 0.0], 1.0), Box([-1.0, -1.0], [1.0, 1.0]))
    true = np.sqrt(2.0) - 1.0
    assert val <= true + 1e-12  # support sampling under-approximates
    assert val == pytest.approx(true, abs=2e-3)


def test_hausdorff_metric_axioms_on_balls():
    rng = np.random.Generator(np.random.Philox(key=27))
    for _ in range(20):
        balls = [Ball(rng.standard_normal(3), float(rng.uniform(0.5, 2.0)))
                 for _ in range(3)]
        a, b, c = balls
        assert hausdorff(a, b) == pytest.approx(hausdorff(b, a))
        assert hausdorff(a, a) == 0.0
        assert hausdorff(a, c) <= hausdorff(a, b) + hausdorff(b, c) + 1e-12


# ---------------------------------------------------------------------------
# interior radii and moving tubes


def test_interior_radius_values():
    assert interior_radius(Ball([0.0, 0.0], 2.0), [1.0, 0.0]) == pytest.approx(1.0)
    assert interior_radius(Box([0.0, 0.0], [2.0, 4.0]), [0.5, 2.0]) == pytest.approx(0.5)
    third = interior_radius(TRIANGLE, [0.25, 0.25])
    assert third == pytest.approx(min(0.25, (1.0 - 0.5) / np.sqrt(2.0)))
    assert interior_radius(Ball([0.0], 1.0), [2.0]) < 0.0  # outside: negative slack


def test_moving_set_validation():
    with pytest.raises(ValueError):
        MovingConvexSet.static(Ball([0.0], 1.0), [0.0], 0.0)
    with pytest.raises(ValueError):
        MovingConvexSet(at=lambda t: Ball([0.0], 1.0), gamma=lambda t: np.zeros(1),
                        r=0.5, hoelder=(1.0, 1.5))


def test_verify_interior_ball_static():
    m = MovingConvexSet.static(Ball([0.0, 0.0], 2.0), [0.0, 0.0], 1.0)
    report = verify_interior_ball(m, Grid.uniform(8, 1.0))
    assert report.ok
    assert report.min_margin == pytest.approx(1.0)


def test_verify_interior_ball_inscribed_margin_zero():
    m = MovingConvexSet(
        at=lambda t: Box([t, 0.0], [t + 1.0, 1.0]),
        gamma=lambda t: np.array([t + 0.5, 0.5]),
        r=0.5,
    )
    report = verify_interior_ball(m, Grid.uniform(8, 1.0))
    assert report.min_margin == pytest.approx(0.0, abs=1e-12)
    assert report.ok


def test_verify_interior_ball_flags_violation():
    m = MovingConvexSet.static(Ball([0.0, 0.0], 1.0), [0.0, 0.0], 1.5)
    report = verify_interior_ball(m, Grid.uniform(4, 1.0))
    assert not report.ok
    assert report.min_margin == pytest.approx(-0.5)


def test_translating_tube_hoelder_declaration():
    m = MovingConvexSet.translating(Ball([0.0, 0.0], 1.0), [3.0, 4.0],
                                    [0.0, 0.0], 0.5)
    assert m.hoelder == (5.0, 1.0)
    ratio = spot_check_hoelder(m, Grid.uniform(16, 1.0))
    assert ratio <= 1.0 + 1e-9


def test_spot_check_hoelder_requires_declaration():
    m = MovingConvexSet(at=lambda t: Ball([0.0], 1.0), gamma=lambda t: np.zeros(1),
                        r=0.5)
    with pytest.raises(ValueError):
        spot_check_hoelder(m, Grid.uniform(4, 1.0))
