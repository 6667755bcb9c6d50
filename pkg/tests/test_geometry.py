import numpy as np
import pytest
from hypothesis import given, strategies as st

from planforge.errors import GeometryError
from planforge.geometry import (
    convex_hull,
    convex_overlap_area,
    interior_angles,
    is_convex_ccw,
    line_intersection,
    normalize_ring,
    points_segment_distance,
    polygon_is_simple,
    polygon_signed_area,
    segment_foot,
)

SQUARE = np.array([[0.0, 0.0], [2.0, 0.0], [2.0, 2.0], [0.0, 2.0]])


def brute_force_hull(points):
    """A point is a hull vertex iff some line through it has all others on one side."""
    pts = np.unique(np.asarray(points, dtype=float), axis=0)
    keep = []
    for i, p in enumerate(pts):
        others = np.delete(pts, i, axis=0)
        on_hull = False
        for q in others:
            d = q - p
            side = np.sign(np.round(d[0] * (others[:, 1] - p[1])
                                    - d[1] * (others[:, 0] - p[0]), 12))
            nz = side[side != 0]
            if len(nz) == 0 or np.all(nz > 0) or np.all(nz < 0):
                on_hull = True
                break
        if on_hull:
            keep.append(p)
    return keep


def test_signed_area_ccw_positive():
    assert polygon_signed_area(SQUARE) == 4.0
    assert polygon_signed_area(SQUARE[::-1]) == -4.0


def test_normalize_ring_idempotent():
    ring = normalize_ring(SQUARE[::-1])
    assert polygon_signed_area(ring) > 0
    assert np.array_equal(normalize_ring(ring), ring)
    assert tuple(ring[0]) == (0.0, 0.0)


def test_convex_hull_square_with_interior():
    rng = np.random.default_rng(0)
    interior = rng.uniform(0.2, 1.8, size=(50, 2))
    hull = convex_hull(np.vstack([SQUARE, interior]))
    assert np.array_equal(hull, normalize_ring(SQUARE))


def test_convex_hull_collinear_raises():
    pts = np.array([[0.0, 0.0], [1.0, 1.0], [2.0, 2.0], [3.0, 3.0]])
    with pytest.raises(GeometryError, match="collinear"):
        convex_hull(pts)


def test_convex_hull_drops_collinear_edge_points():
    pts = np.vstack([SQUARE, [[1.0, 0.0], [2.0, 1.0]]])
    hull = convex_hull(pts)
    assert len(hull) == 4


@given(
    st.lists(
        st.tuples(
            st.floats(-50, 50).map(lambda v: round(v, 3)),
            st.floats(-50, 50).map(lambda v: round(v, 3)),
        ),
        min_size=4,
        max_size=40,
    )
)
def test_convex_hull_matches_brute_force(coords):
    pts = np.array(coords, dtype=float)
    try:
        hull = convex_hull(pts)
    except GeometryError:
        return  # collinear draw
    assert is_convex_ccw(hull)
    expected = brute_force_hull(pts)
    # every brute-force vertex must be within the hull ring or on an edge
    for p in expected:
        d = min(
            points_segment_distance(p[None, :], hull[i], hull[(i + 1) % len(hull)])[0]
            for i in range(len(hull))
        )
        assert d <= 1e-9
    # and every hull vertex must be one of the input points
    for v in hull:
        assert np.min(np.hypot(*(pts - v).T)) <= 1e-12


def test_segment_foot_perpendicular_drop():
    foot, t, dist = segment_foot((1.0, 1.0), (0.0, 0.0), (2.0, 0.0))
    assert np.allclose(foot, [1.0, 0.0])
    assert t == 0.5
    assert dist == 1.0


def test_segment_foot_clamps_to_endpoint():
    foot, t, dist = segment_foot((5.0, 1.0), (0.0, 0.0), (2.0, 0.0))
    assert np.allclose(foot, [2.0, 0.0])
    assert t == 1.0
    assert dist == pytest.approx(np.hypot(3.0, 1.0))


def test_points_segment_distance_matches_scalar():
    rng = np.random.default_rng(1)
    pts = rng.normal(size=(64, 2))
    a, b = np.array([0.3, -0.2]), np.array([1.7, 2.2])
    vec = points_segment_distance(pts, a, b)
    for p, d in zip(pts, vec):
        assert segment_foot(p, a, b)[2] == pytest.approx(d, abs=1e-12)


def test_line_intersection_axes():
    hit = line_intersection((0.0, 3.0), (1.0, 0.0), (5.0, 0.0), (0.0, 1.0))
    assert np.allclose(hit, [5.0, 3.0])


def test_line_intersection_parallel_raises():
    with pytest.raises(GeometryError, match="parallel"):
        line_intersection((0, 0), (1, 0), (0, 1), (1, 0))


def test_interior_angles_rectangle():
    angles = interior_angles(SQUARE)
    assert np.allclose(angles, np.pi / 2)


def test_interior_angles_l_shape_has_reflex():
    l_shape = np.array(
        [[0.0, 0.0], [2.0, 0.0], [2.0, 1.0], [1.0, 1.0], [1.0, 2.0], [0.0, 2.0]]
    )
    angles = interior_angles(l_shape)
    assert np.isclose(angles.sum(), (len(l_shape) - 2) * np.pi)
    assert np.isclose(sorted(angles)[-1], 1.5 * np.pi)


def test_polygon_is_simple_detects_bowtie():
    bowtie = np.array([[0.0, 0.0], [1.0, 1.0], [1.0, 0.0], [0.0, 1.0]])
    assert not polygon_is_simple(bowtie)
    assert polygon_is_simple(SQUARE)


def test_convex_overlap_area_known_rectangles():
    a = SQUARE
    b = SQUARE + np.array([1.0, 1.0])
    assert convex_overlap_area(a, b) == pytest.approx(1.0)
    assert convex_overlap_area(a, SQUARE + np.array([5.0, 0.0])) == 0.0
    assert convex_overlap_area(a, a) == pytest.approx(4.0)
