"""Per-capture regularization: boundary points -> 3 clusters -> right-angle wedge.

Each corner capture sees two walls meeting at a corner.  The plan projection
of its wall-edge points is clustered into three groups; the middle cluster
straddles the corner while the outer two lie on the separate walls.  A wedge
(two perpendicular segments joined at an apex) is fitted either from the
cluster means directly or from total-least-squares lines through the two
outer clusters, and finally placed into the global plan frame.
"""

from __future__ import annotations

import math

import numpy as np

from .errors import GeometryError
from .geometry import convex_hull, line_intersection, points_segment_distance
from .types import ClusterResult, PlanTransform, Wedge

HULL_BAND = 0.02  # meters: keep points this close to a hull edge
LLOYD_TOL = 1e-6  # meters: mean shift below this counts as converged
LLOYD_MAX_ITER = 100
RESEED_ATTEMPTS = 5
TLS_REFINE_ITERS = 20


def extract_boundary(points: np.ndarray, band: float = HULL_BAND) -> np.ndarray:
    """Keep the outer contour: points within ``band`` of a convex-hull edge.

    Hull vertices themselves sit at distance zero, so they always survive.
    """
    pts = np.asarray(points, dtype=float).reshape(-1, 2)
    if len(pts) < 3:
        raise GeometryError(f"degenerate capture: {len(pts)} boundary points")
    try:
        hull = convex_hull(pts)
    except GeometryError as exc:
        raise GeometryError(f"degenerate capture: {exc}") from exc
    n = len(hull)
    dist = np.full(len(pts), np.inf)
    for i in range(n):
        d = points_segment_distance(pts, hull[i], hull[(i + 1) % n])
        np.minimum(dist, d, out=dist)
    return pts[dist <= band]


def _kmeans_seed(points: np.ndarray, k: int, rng: np.random.Generator) -> np.ndarray:
    """k-means++ style seeding: spread initial means by squared distance."""
    n = len(points)
    first = int(rng.integers(n))
    means = [points[first]]
    d2 = np.sum((points - means[0]) ** 2, axis=1)
    for _ in range(k - 1):
        total = float(d2.sum())
        if total <= 0:
            idx = int(rng.integers(n))
        else:
            idx = int(rng.choice(n, p=d2 / total))
        means.append(points[idx])
        d2 = np.minimum(d2, np.sum((points - means[-1]) ** 2, axis=1))
    return np.array(means, dtype=float)


def _lloyd(points: np.ndarray, means: np.ndarray) -> tuple[np.ndarray, np.ndarray] | None:
    """Run Lloyd iterations; None when a cluster empties out."""
    for _ in range(LLOYD_MAX_ITER):
        d2 = np.sum((points[:, None, :] - means[None, :, :]) ** 2, axis=2)
        assign = np.argmin(d2, axis=1)
        new_means = np.empty_like(means)
        for j in range(len(means)):
            members = points[assign == j]
            if len(members) == 0:
                return None
            new_means[j] = members.mean(axis=0)
        shift = float(np.max(np.hypot(*(new_means - means).T)))
        means = new_means
        if shift < LLOYD_TOL:
            break
    # final assignment against the converged means
    d2 = np.sum((points[:, None, :] - means[None, :, :]) ** 2, axis=2)
    assign = np.argmin(d2, axis=1)
    if len(np.unique(assign)) < len(means):
        return None
    return means, assign


def _order_means(means: np.ndarray, assign: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Order means (m1, m2, m3) so the apex sits in the middle slot.

    The apex is the mean with the largest angle between the segments to the
    other two means.  Of the remaining pair, the one farther from the apex
    becomes m1 (mirror-invariant; lexicographic tie-break).
    """
    angles = []
    for i in range(3):
        j, k = [x for x in range(3) if x != i]
        u = means[j] - means[i]
        w = means[k] - means[i]
        nu, nw = np.hypot(*u), np.hypot(*w)
        if nu < 1e-12 or nw < 1e-12:
            angles.append(-1.0)
            continue
        angles.append(float(np.arccos(np.clip(u @ w / (nu * nw), -1.0, 1.0))))
    apex = int(np.argmax(angles))
    rest = [x for x in range(3) if x != apex]
    d = [float(np.hypot(*(means[r] - means[apex]))) for r in rest]
    if d[0] > d[1] or (d[0] == d[1] and tuple(means[rest[0]]) <= tuple(means[rest[1]])):
        order = [rest[0], apex, rest[1]]
    else:
        order = [rest[1], apex, rest[0]]
    relabel = np.empty(3, dtype=int)
    for new, old in enumerate(order):
        relabel[old] = new
    return means[order], relabel[assign]


def cluster3(points: np.ndarray, seed: int) -> ClusterResult:
    """Deterministic 3-means over 2-D points.

    Seeding is k-means++ style from a seeded generator; Lloyd iterations run
    until the largest mean shift drops below 1e-6 m or 100 iterations.  An
    emptied cluster triggers a re-seed, up to 5 attempts.
    """
    pts = np.asarray(points, dtype=float).reshape(-1, 2)
    if len(pts) < 3:
        raise GeometryError(f"cannot cluster {len(pts)} points into 3 groups")
    rng = np.random.default_rng(seed)
    for _ in range(RESEED_ATTEMPTS):
        means = _kmeans_seed(pts, 3, rng)
        result = _lloyd(pts, means)
        if result is not None:
            means, assign = result
            means, assign = _order_means(means, assign)
            return ClusterResult(means, assign)
    raise GeometryError("cluster collapse: a cluster emptied in every attempt")


def _perpendicular(base: np.ndarray, toward: np.ndarray) -> np.ndarray:
    """The unit perpendicular of ``base`` nearest ``toward``.

    At an exact tie the counter-clockwise candidate (seen from ``toward``)
    wins, keeping the choice deterministic.
    """
    cand = np.array([-base[1], base[0]])
    d = float(toward @ cand)
    if abs(d) < 1e-12:
        return cand if (toward[0] * cand[1] - toward[1] * cand[0]) > 0 else -cand
    return cand if d > 0 else -cand


def fit_wedge(clusters: ClusterResult) -> Wedge:
    """Wedge from the cluster means: segment m1->m2 is kept, segment m2->m3
    is rotated about the apex m2 by the minimal angle making it perpendicular."""
    m1, m2, m3 = clusters.means
    v1 = m2 - m1
    v2 = m3 - m2
    l1, l2 = float(np.hypot(*v1)), float(np.hypot(*v2))
    if l1 < 1e-9 or l2 < 1e-9:
        raise GeometryError("degenerate means: coincident cluster centers")
    dir1 = v1 / l1
    dir2 = _perpendicular(dir1, v2 / l2)
    return Wedge(apex=m2.copy(), dir1=dir1, dir2=dir2, len1=l1, len2=l2)


def _tls_direction(members: np.ndarray) -> np.ndarray | None:
    """Total-least-squares (principal component) direction of a point set."""
    if len(members) < 2:
        return None
    centered = members - members.mean(axis=0)
    a = float(np.mean(centered[:, 0] ** 2))
    b = float(np.mean(centered[:, 0] * centered[:, 1]))
    c = float(np.mean(centered[:, 1] ** 2))
    if a + c < 1e-18:
        return None
    theta = 0.5 * math.atan2(2.0 * b, a - c)
    return np.array([math.cos(theta), math.sin(theta)])


def fit_wedge_lsq(points: np.ndarray, clusters: ClusterResult) -> Wedge:
    """Wedge from total-least-squares lines through two of the clusters.

    The pair of clusters with the most perpendicular line directions defines
    the two walls; the apex is the line intersection, so the corner itself
    does not have to be visible.  The second line is rotated about the apex
    to exact perpendicularity.
    """
    pts = np.asarray(points, dtype=float).reshape(-1, 2)
    if len(pts) != len(clusters.assignments):
        raise GeometryError("points and cluster assignments disagree in length")
    fits = []
    for j in range(3):
        members = pts[clusters.assignments == j]
        direction = _tls_direction(members)
        if direction is not None:
            fits.append((j, members, members.mean(axis=0), direction))
    best = None
    for i in range(len(fits)):
        for j in range(i + 1, len(fits)):
            cross = abs(
                fits[i][3][0] * fits[j][3][1] - fits[i][3][1] * fits[j][3][0]
            )
            if best is None or cross > best[0]:
                best = (cross, fits[i], fits[j])
    if best is None or best[0] < math.sin(math.radians(15.0)):
        raise GeometryError("wall directions nearly parallel: cannot fit a corner")
    _, fit_a, fit_b = best
    # The larger cluster anchors the unrotated line; ties go to the smaller index.
    if len(fit_b[1]) > len(fit_a[1]):
        fit_a, fit_b = fit_b, fit_a
    _, members_a, mean_a, v_a = fit_a
    _, members_b, mean_b, v_b = fit_b

    # Cluster boundaries rarely fall exactly at the corner, so the initial
    # memberships mix points from both walls and tilt the lines.  Alternate
    # assigning every point to the nearer line with per-side refits until the
    # split stabilizes.
    side_a = None
    for _ in range(TLS_REFINE_ITERS):
        d_a = np.abs((pts[:, 0] - mean_a[0]) * v_a[1] - (pts[:, 1] - mean_a[1]) * v_a[0])
        d_b = np.abs((pts[:, 0] - mean_b[0]) * v_b[1] - (pts[:, 1] - mean_b[1]) * v_b[0])
        new_side = d_a <= d_b
        if side_a is not None and bool(np.all(new_side == side_a)):
            break
        na = int(new_side.sum())
        if na < 2 or len(pts) - na < 2:
            break
        cand_a, cand_b = pts[new_side], pts[~new_side]
        dir_a, dir_b = _tls_direction(cand_a), _tls_direction(cand_b)
        if dir_a is None or dir_b is None:
            break
        if abs(dir_a[0] * dir_b[1] - dir_a[1] * dir_b[0]) < math.sin(math.radians(15.0)):
            break
        side_a = new_side
        members_a, mean_a, v_a = cand_a, cand_a.mean(axis=0), dir_a
        members_b, mean_b, v_b = cand_b, cand_b.mean(axis=0), dir_b

    apex = line_intersection(mean_a, v_a, mean_b, v_b)

    to_apex = apex - mean_a
    dir1 = v_a if float(to_apex @ v_a) >= 0 else -v_a
    from_apex = mean_b - apex
    w_b = v_b if float(from_apex @ v_b) >= 0 else -v_b
    dir2 = _perpendicular(dir1, w_b)

    len1 = float(np.max((apex - members_a) @ dir1))
    len2 = float(np.max((members_b - apex) @ dir2))
    len1 = max(len1, float(np.hypot(*to_apex)), 1e-3)
    len2 = max(len2, float(np.hypot(*from_apex)), 1e-3)
    return Wedge(apex=apex, dir1=dir1, dir2=dir2, len1=len1, len2=len2)


def place_wedge(wedge: Wedge, xform: PlanTransform) -> Wedge:
    """Rigidly move a capture-local wedge into the global plan frame."""
    return Wedge(
        apex=xform.apply(wedge.apex),
        dir1=xform.apply_direction(wedge.dir1),
        dir2=xform.apply_direction(wedge.dir2),
        len1=wedge.len1,
        len2=wedge.len2,
    )
