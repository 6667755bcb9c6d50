"""2-D geometric primitives shared by the pipeline stages.

All polygons are (N, 2) float arrays of vertices without a repeated closing
vertex.  Rings are normalized counter-clockwise starting at the
lexicographically smallest vertex so equal shapes compare equal element-wise.
"""

from __future__ import annotations

import numpy as np

from .errors import GeometryError


def polygon_signed_area(vertices: np.ndarray) -> float:
    """Shoelace area; positive for counter-clockwise rings."""
    v = np.asarray(vertices, dtype=float)
    x, y = v[:, 0], v[:, 1]
    return 0.5 * float(np.dot(x, np.roll(y, -1)) - np.dot(y, np.roll(x, -1)))


def normalize_ring(vertices: np.ndarray) -> np.ndarray:
    """Return the ring oriented CCW, starting at the lexicographic-min vertex.

    Idempotent: normalizing a normalized ring returns identical values.
    """
    v = np.asarray(vertices, dtype=float).reshape(-1, 2)
    if polygon_signed_area(v) < 0:
        v = v[::-1]
    start = min(range(len(v)), key=lambda i: (v[i, 0], v[i, 1]))
    return np.roll(v, -start, axis=0)


def _segments_properly_cross(a, b, c, d) -> bool:
    """True when open segments ab and cd cross at an interior point."""

    def orient(p, q, r):
        return (q[0] - p[0]) * (r[1] - p[1]) - (q[1] - p[1]) * (r[0] - p[0])

    o1, o2 = orient(a, b, c), orient(a, b, d)
    o3, o4 = orient(c, d, a), orient(c, d, b)
    return (o1 * o2 < 0) and (o3 * o4 < 0)


def polygon_is_simple(vertices: np.ndarray) -> bool:
    """Brute-force non-self-intersection test (rings here are small)."""
    v = np.asarray(vertices, dtype=float)
    n = len(v)
    if n < 3:
        return False
    edges = [(v[i], v[(i + 1) % n]) for i in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            if j == i or (j + 1) % n == i or (i + 1) % n == j:
                continue  # shared endpoint, not a crossing
            if _segments_properly_cross(*edges[i], *edges[j]):
                return False
    return True


def is_convex_ccw(vertices: np.ndarray) -> bool:
    """True when every turn of the CCW ring is a left turn (or straight)."""
    v = np.asarray(vertices, dtype=float)
    n = len(v)
    for i in range(n):
        p, q, r = v[i], v[(i + 1) % n], v[(i + 2) % n]
        cross = (q[0] - p[0]) * (r[1] - q[1]) - (q[1] - p[1]) * (r[0] - q[0])
        if cross < -1e-12:
            return False
    return polygon_signed_area(v) > 0


def convex_hull(points: np.ndarray) -> np.ndarray:
    """Convex hull by Andrew's monotone chain, CCW, collinear points dropped.

    Raises GeometryError when all points are collinear (no 2-D hull exists).
    """
    pts = np.unique(np.asarray(points, dtype=float).reshape(-1, 2), axis=0)
    if len(pts) < 3:
        raise GeometryError("convex hull needs >= 3 distinct points")
    order = np.lexsort((pts[:, 1], pts[:, 0]))
    pts = pts[order]

    def build(seq):
        chain: list[np.ndarray] = []
        for p in seq:
            while len(chain) >= 2:
                o, a = chain[-2], chain[-1]
                if (a[0] - o[0]) * (p[1] - o[1]) - (a[1] - o[1]) * (p[0] - o[0]) <= 0:
                    chain.pop()
                else:
                    break
            chain.append(p)
        return chain

    lower = build(pts)
    upper = build(pts[::-1])
    hull = np.array(lower[:-1] + upper[:-1], dtype=float)
    if len(hull) < 3:
        raise GeometryError("degenerate hull: input points are collinear")
    return normalize_ring(hull)


def segment_foot(p: np.ndarray, a: np.ndarray, b: np.ndarray) -> tuple[np.ndarray, float, float]:
    """Closest point to ``p`` on segment ab: (foot, param t in [0,1], distance)."""
    p = np.asarray(p, dtype=float)
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    ab = b - a
    denom = float(ab @ ab)
    if denom == 0.0:
        return a.copy(), 0.0, float(np.hypot(*(p - a)))
    t = float(np.clip((p - a) @ ab / denom, 0.0, 1.0))
    foot = a + t * ab
    return foot, t, float(np.hypot(*(p - foot)))


def points_segment_distance(points: np.ndarray, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Distance from each of (N, 2) points to segment ab, vectorized."""
    pts = np.asarray(points, dtype=float).reshape(-1, 2)
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    ab = b - a
    denom = float(ab @ ab)
    if denom == 0.0:
        return np.hypot(*(pts - a).T)
    t = np.clip((pts - a) @ ab / denom, 0.0, 1.0)
    feet = a + t[:, None] * ab
    return np.hypot(*(pts - feet).T)


def line_intersection(p1: np.ndarray, d1: np.ndarray, p2: np.ndarray, d2: np.ndarray) -> np.ndarray:
    """Intersection of two infinite lines given as point + direction."""
    p1 = np.asarray(p1, dtype=float)
    p2 = np.asarray(p2, dtype=float)
    d1 = np.asarray(d1, dtype=float)
    d2 = np.asarray(d2, dtype=float)
    denom = d1[0] * d2[1] - d1[1] * d2[0]
    if abs(denom) < 1e-12:
        raise GeometryError("cannot intersect near-parallel lines")
    t = ((p2[0] - p1[0]) * d2[1] - (p2[1] - p1[1]) * d2[0]) / denom
    return p1 + t * d1


def interior_angles(vertices: np.ndarray) -> np.ndarray:
    """Interior angle at each vertex of a CCW simple polygon, radians."""
    v = np.asarray(vertices, dtype=float)
    n = len(v)
    out = np.empty(n)
    for i in range(n):
        prev, cur, nxt = v[i - 1], v[i], v[(i + 1) % n]
        u = prev - cur
        w = nxt - cur
        # the interior lies left of a CCW ring, so measure from the outgoing
        # edge direction w around to the incoming direction u
        ang = np.arctan2(w[0] * u[1] - w[1] * u[0], u @ w)
        if ang < 0:
            ang += 2.0 * np.pi
        out[i] = ang
    return out


def convex_clip(subject: np.ndarray, clip: np.ndarray) -> np.ndarray:
    """Sutherland-Hodgman clip of a convex subject by a convex CCW clip ring.

    Returns the (possibly empty) intersection ring.
    """
    output = [np.asarray(p, dtype=float) for p in subject]
    clip = np.asarray(clip, dtype=float)
    n = len(clip)
    for i in range(n):
        a, b = clip[i], clip[(i + 1) % n]
        edge = b - a
        if not output:
            break
        inputs, output = output, []

        def inside(p):
            return edge[0] * (p[1] - a[1]) - edge[1] * (p[0] - a[0]) >= -1e-12

        for j, cur in enumerate(inputs):
            prev = inputs[j - 1]
            cur_in, prev_in = inside(cur), inside(prev)
            if cur_in:
                if not prev_in:
                    output.append(_edge_line_hit(prev, cur, a, edge))
                output.append(cur)
            elif prev_in:
                output.append(_edge_line_hit(prev, cur, a, edge))
    return np.array(output, dtype=float).reshape(-1, 2)


def _edge_line_hit(p, q, a, edge):
    """Intersection of segment pq with the infinite line through a along edge."""
    d = q - p
    denom = d[0] * edge[1] - d[1] * edge[0]
    if abs(denom) < 1e-15:
        return q
    t = ((a[0] - p[0]) * edge[1] - (a[1] - p[1]) * edge[0]) / denom
    return p + t * d


def convex_overlap_area(poly_a: np.ndarray, poly_b: np.ndarray) -> float:
    """Area of the intersection of two convex rings."""
    inter = convex_clip(poly_a, poly_b)
    if len(inter) < 3:
        return 0.0
    return abs(polygon_signed_area(inter))
