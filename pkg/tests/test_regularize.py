import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from planforge import cluster3, extract_boundary, fit_wedge, fit_wedge_lsq, place_wedge
from planforge.errors import GeometryError
from planforge.types import ClusterResult, PlanTransform, Wedge


def grid_square(step=0.1):
    n = round(1.0 / step) + 1
    xs = np.linspace(0.0, 1.0, n)
    return np.array([(x, y) for x in xs for y in xs])


def as_sorted(points):
    return np.array(sorted(map(tuple, np.round(points, 9))))


class TestExtractBoundary:
    def test_grid_square_keeps_edge_band_only(self):
        pts = grid_square()
        kept = extract_boundary(pts, band=0.02)
        on_edge = pts[
            (np.isclose(pts[:, 0], 0) | np.isclose(pts[:, 0], 1))
            | (np.isclose(pts[:, 1], 0) | np.isclose(pts[:, 1], 1))
        ]
        assert len(on_edge) == 40
        assert np.array_equal(as_sorted(kept), as_sorted(on_edge))

    def test_three_points_survive(self):
        pts = np.array([[0.0, 0.0], [2.0, 0.0], [1.0, 1.0]])
        kept = extract_boundary(pts, band=0.02)
        assert np.array_equal(as_sorted(kept), as_sorted(pts))

    def test_wide_band_keeps_everything(self):
        pts = grid_square()
        kept = extract_boundary(pts, band=1.0)
        assert len(kept) == len(pts)

    def test_collinear_is_degenerate(self):
        pts = np.array([[0.0, 0.0], [1.0, 1.0], [2.0, 2.0], [3.0, 3.0]])
        with pytest.raises(GeometryError, match="degenerate capture"):
            extract_boundary(pts)

    def test_too_few_points(self):
        with pytest.raises(GeometryError, match="degenerate capture"):
            extract_boundary(np.array([[0.0, 0.0], [1.0, 0.0]]))


def blob_cloud(centers, sigma=0.01, per=100, seed=42):
    rng = np.random.default_rng(seed)
    parts = [c + rng.normal(scale=sigma, size=(per, 2)) for c in centers]
    return np.vstack(parts)


class TestCluster3:
    CENTERS = np.array([[0.0, 0.0], [1.0, 0.0], [1.0, 1.0]])

    def test_recovers_blob_centers(self):
        pts = blob_cloud(self.CENTERS)
        result = cluster3(pts, seed=0)
        for center in self.CENTERS:
            nearest = np.min(np.hypot(*(result.means - center).T))
            assert nearest < 0.05

    def test_apex_slot_has_largest_angle(self):
        pts = blob_cloud(self.CENTERS)
        result = cluster3(pts, seed=0)
        assert np.max(np.abs(result.means[1] - [1.0, 0.0])) < 0.05

    def test_three_distinct_points_become_their_own_means(self):
        pts = np.array([[0.0, 0.0], [2.0, 0.0], [2.0, 2.0]])
        result = cluster3(pts, seed=5)
        assert np.array_equal(as_sorted(result.means), as_sorted(pts))

    def test_same_seed_same_result(self):
        pts = blob_cloud(self.CENTERS, seed=7)
        a = cluster3(pts, seed=11)
        b = cluster3(pts, seed=11)
        assert np.array_equal(a.means, b.means)
        assert np.array_equal(a.assignments, b.assignments)

    def test_too_few_points(self):
        with pytest.raises(GeometryError, match="cannot cluster"):
            cluster3(np.array([[0.0, 0.0], [1.0, 1.0]]), seed=0)


def means_result(m1, m2, m3):
    return ClusterResult(np.array([m1, m2, m3], dtype=float), np.array([0, 1, 2]))


class TestFitWedge:
    def test_hand_example(self):
        wedge = fit_wedge(means_result((0, 0), (1, 0), (1.1, 1.0)))
        assert np.allclose(wedge.apex, [1.0, 0.0])
        assert np.allclose(wedge.dir1, [1.0, 0.0])
        assert np.allclose(wedge.dir2, [0.0, 1.0])
        assert wedge.len1 == pytest.approx(1.0)
        assert wedge.len2 == pytest.approx(math.sqrt(1.01))

    def test_already_perpendicular_is_fixed_point(self):
        wedge = fit_wedge(means_result((0, 0), (1, 0), (1, 1)))
        assert np.allclose(wedge.dir1, [1.0, 0.0])
        assert np.allclose(wedge.dir2, [0.0, 1.0])
        assert wedge.len1 == pytest.approx(1.0)
        assert wedge.len2 == pytest.approx(1.0)

    def test_mirror_symmetry(self):
        wedge = fit_wedge(means_result((0, 0), (-1, 0), (-1.1, 1.0)))
        assert np.allclose(wedge.apex, [-1.0, 0.0])
        assert np.allclose(wedge.dir1, [-1.0, 0.0])
        assert np.allclose(wedge.dir2, [0.0, 1.0])

    def test_coincident_means_rejected(self):
        with pytest.raises(GeometryError, match="degenerate means"):
            fit_wedge(means_result((0, 0), (0, 0), (1, 1)))

    @given(
        st.lists(
            st.tuples(
                st.floats(-10, 10, allow_nan=False).map(lambda v: round(v, 3)),
                st.floats(-10, 10, allow_nan=False).map(lambda v: round(v, 3)),
            ),
            min_size=3,
            max_size=3,
            unique=True,
        )
    )
    def test_arms_always_perpendicular(self, triple):
        m1, m2, m3 = (np.array(m) for m in triple)
        if np.hypot(*(m2 - m1)) < 1e-6 or np.hypot(*(m3 - m2)) < 1e-6:
            return
        wedge = fit_wedge(means_result(m1, m2, m3))
        assert abs(float(wedge.dir1 @ wedge.dir2)) < 1e-9
        assert np.array_equal(wedge.apex, m2)


def l_shape_cloud(corner, arm1_end, arm2_end, per=200, sigma=0.0, seed=0, gap=0.0):
    """Points along two wall segments meeting at ``corner``.

    ``gap`` drops samples within that distance of the corner, mimicking an
    occluded junction.
    """
    rng = np.random.default_rng(seed)
    corner = np.asarray(corner, dtype=float)
    segs = []
    for end in (arm1_end, arm2_end):
        t = rng.uniform(0.0, 1.0, size=per)
        pts = corner + np.outer(t, np.asarray(end, dtype=float) - corner)
        if sigma:
            pts = pts + rng.normal(scale=sigma, size=pts.shape)
        segs.append(pts)
    pts = np.vstack(segs)
    if gap:
        pts = pts[np.hypot(*(pts - corner).T) > gap]
    return pts


class TestFitWedgeLsq:
    def test_recovers_clean_corner(self):
        pts = l_shape_cloud((2.0, 0.0), (0.0, 0.0), (2.0, 1.5))
        wedge = fit_wedge_lsq(pts, cluster3(pts, seed=0))
        assert np.max(np.abs(wedge.apex - [2.0, 0.0])) < 1e-6
        assert abs(float(wedge.dir1 @ wedge.dir2)) < 1e-9

    def test_recovers_noisy_corner(self):
        pts = l_shape_cloud((2.0, 0.0), (0.0, 0.0), (2.0, 1.5), sigma=0.005, seed=1)
        wedge = fit_wedge_lsq(pts, cluster3(pts, seed=0))
        assert np.max(np.abs(wedge.apex - [2.0, 0.0])) < 0.02

    def test_apex_survives_corner_gap(self):
        pts = l_shape_cloud((2.0, 0.0), (0.0, 0.0), (2.0, 1.5), gap=0.4, seed=2)
        assert np.min(np.hypot(*(pts - [2.0, 0.0]).T)) > 0.39
        wedge = fit_wedge_lsq(pts, cluster3(pts, seed=0))
        assert np.max(np.abs(wedge.apex - [2.0, 0.0])) < 1e-6

    def test_rotation_equivariance(self):
        pts = l_shape_cloud((2.0, 0.0), (0.0, 0.0), (2.0, 1.5), sigma=0.003, seed=3)
        rot = np.array([[0.0, -1.0], [1.0, 0.0]])
        turned = pts @ rot.T
        w0 = fit_wedge_lsq(pts, cluster3(pts, seed=0))
        w1 = fit_wedge_lsq(turned, cluster3(turned, seed=0))
        assert np.max(np.abs(w1.apex - rot @ w0.apex)) < 1e-6

    def test_parallel_walls_rejected(self):
        rng = np.random.default_rng(4)
        t = rng.uniform(0, 4, size=300)
        pts = np.column_stack([t, np.where(t > 2, 0.001, -0.001)])
        with pytest.raises(GeometryError, match="nearly parallel"):
            fit_wedge_lsq(pts, cluster3(pts, seed=0))

    def test_length_mismatch_rejected(self):
        pts = l_shape_cloud((2.0, 0.0), (0.0, 0.0), (2.0, 1.5))
        clusters = cluster3(pts, seed=0)
        with pytest.raises(GeometryError, match="disagree in length"):
            fit_wedge_lsq(pts[:-1], clusters)


class TestPlaceWedge:
    WEDGE = Wedge(
        apex=np.array([1.0, 0.0]),
        dir1=np.array([1.0, 0.0]),
        dir2=np.array([0.0, 1.0]),
        len1=1.0,
        len2=1.5,
    )

    def test_identity_is_noop(self):
        moved = place_wedge(self.WEDGE, PlanTransform.identity())
        assert np.allclose(moved.apex, self.WEDGE.apex)
        assert np.allclose(moved.dir1, self.WEDGE.dir1)
        assert np.allclose(moved.dir2, self.WEDGE.dir2)
        assert moved.len1 == self.WEDGE.len1
        assert moved.len2 == self.WEDGE.len2

    def test_quarter_turn_with_offset(self):
        xform = PlanTransform(math.pi / 2, 10.0, 20.0)
        moved = place_wedge(self.WEDGE, xform)
        assert np.allclose(moved.apex, xform.apply(self.WEDGE.apex))
        assert abs(float(moved.dir1 @ moved.dir2)) < 1e-9
        assert np.hypot(*moved.dir1) == pytest.approx(1.0)

    def test_random_rigid_motions_preserve_the_right_angle(self):
        rng = np.random.default_rng(17)
        for _ in range(200):
            xform = PlanTransform(
                rng.uniform(-math.pi, math.pi),
                rng.uniform(-50, 50),
                rng.uniform(-50, 50),
            )
            moved = place_wedge(self.WEDGE, xform)
            assert abs(float(moved.dir1 @ moved.dir2)) < 1e-9
            assert moved.len1 == self.WEDGE.len1
            assert moved.len2 == self.WEDGE.len2
