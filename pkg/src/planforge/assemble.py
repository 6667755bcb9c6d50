"""Global assembly: wedges -> rooms -> snapped, boundary-aligned floor plan."""

from __future__ import annotations

import math
from itertools import combinations

import numpy as np

from .errors import GeometryError
from .geometry import (
    convex_hull,
    interior_angles,
    points_segment_distance,
    segment_foot,
)
from .types import BoundaryPolygon, DoorPlacement, FloorPlan, RoomPolygon, Wedge

MANHATTAN_TOL = 1e-9  # meters: axis-component below this counts as aligned
EDGE_INSIDE_TOL = 1e-9  # meters: containment treats near-edge points as inside
GROUP_SPREAD_TOL = 0.5  # meters: max offset spread of one wall's line group


def _rotation_std(theta: float) -> np.ndarray:
    """Standard CCW rotation matrix (textbook convention, local use only)."""
    c, s = math.cos(theta), math.sin(theta)
    return np.array([[c, -s], [s, c]], dtype=float)


def is_manhattan(vertices: np.ndarray, tol: float = MANHATTAN_TOL) -> bool:
    """True when every edge is axis-parallel within ``tol`` meters."""
    v = np.asarray(vertices, dtype=float)
    d = np.roll(v, -1, axis=0) - v
    return bool(np.all(np.minimum(np.abs(d[:, 0]), np.abs(d[:, 1])) <= tol))


def assemble_room(
    wedges: list[Wedge] | tuple[Wedge, ...],
    room_id: str,
    spread_tol: float = GROUP_SPREAD_TOL,
) -> RoomPolygon:
    """Intersect the wall lines of four corner wedges into a rectangle.

    Each wedge contributes one horizontal and one vertical wall line through
    its apex.  The four lines per axis split into two offset groups (one per
    wall); each wall is the average of its group and the room corners are the
    pairwise intersections.
    """
    if len(wedges) != 4:
        raise GeometryError(
            f"room {room_id!r}: expected 4 corner wedges, got {len(wedges)}"
        )
    h_offsets: list[float] = []
    v_offsets: list[float] = []
    for w in wedges:
        for d in (w.dir1, w.dir2):
            if abs(d[0]) >= abs(d[1]):
                h_offsets.append(float(w.apex[1]))  # wall line y = const
            else:
                v_offsets.append(float(w.apex[0]))  # wall line x = const
    if len(h_offsets) < 2 or len(v_offsets) < 2:
        raise GeometryError(f"room {room_id!r}: insufficient wall lines on one axis")

    def two_walls(offsets: list[float], axis_name: str) -> tuple[float, float]:
        o = np.sort(np.asarray(offsets, dtype=float))
        split = int(np.argmax(np.diff(o))) + 1
        groups = (o[:split], o[split:])
        for g in groups:
            spread = float(g[-1] - g[0])
            if spread > spread_tol:
                raise GeometryError(
                    f"room {room_id!r}: inconsistent captures, {axis_name} wall "
                    f"offsets spread {spread:.3f} m"
                )
        return float(groups[0].mean()), float(groups[1].mean())

    y_lo, y_hi = two_walls(h_offsets, "horizontal")
    x_lo, x_hi = two_walls(v_offsets, "vertical")
    if (y_hi - y_lo) < 1e-9 or (x_hi - x_lo) < 1e-9:
        raise GeometryError(f"room {room_id!r}: degenerate extent after assembly")
    corners = [(x_lo, y_lo), (x_hi, y_lo), (x_hi, y_hi), (x_lo, y_hi)]
    return RoomPolygon(room_id, np.array(corners))


def snap_manhattan(
    room: RoomPolygon, axis: float = 0.0, angle_tol_deg: float = 5.0
) -> RoomPolygon:
    """Force every wall onto the axis grid defined by ``axis``.

    Edge directions snap to the nearest of the two axes; consecutive edges
    landing on the same axis merge into one wall whose offset is the
    length-weighted average.  Vertices are re-derived by intersecting the
    consecutive (now perpendicular) wall lines.  Turns within
    ``angle_tol_deg`` of straight are treated as noise and absorbed before
    classification.  Exactly idempotent: an already-Manhattan polygon is
    returned unchanged.
    """
    rot = _rotation_std(-axis) if axis != 0.0 else None
    verts = room.vertices if rot is None else room.vertices @ rot.T
    if is_manhattan(verts):
        return room

    verts = _drop_near_straight(verts, math.radians(angle_tol_deg))
    edges = np.roll(verts, -1, axis=0) - verts
    classes = (np.abs(edges[:, 0]) < np.abs(edges[:, 1])).astype(int)  # 0=H wall, 1=V wall
    if len(set(classes.tolist())) < 2:
        raise GeometryError(f"room {room.room_id!r}: degenerate room, single wall axis")

    # start the cyclic scan at a class change so runs never wrap
    start = next(i for i in range(len(classes)) if classes[i - 1] != classes[i])
    order = [(i + start) % len(classes) for i in range(len(classes))]

    runs: list[tuple[int, float, float]] = []  # (class, weight, weighted offset sum)
    for i in order:
        cls = int(classes[i])
        a, b = verts[i], verts[(i + 1) % len(verts)]
        weight = float(np.hypot(*(b - a)))
        offset_coord = 0.5 * (a[1] + b[1]) if cls == 0 else 0.5 * (a[0] + b[0])
        if runs and runs[-1][0] == cls:
            prev = runs[-1]
            runs[-1] = (cls, prev[1] + weight, prev[2] + weight * offset_coord)
        else:
            runs.append((cls, weight, weight * offset_coord))
    if len(runs) < 4:
        raise GeometryError(f"room {room.room_id!r}: degenerate room after snapping")

    lines = [(cls, s / w) for cls, w, s in runs]  # alternating H/V by construction
    new_verts = []
    for k in range(len(lines)):
        cls_a, off_a = lines[k]
        cls_b, off_b = lines[(k + 1) % len(lines)]
        x = off_b if cls_b == 1 else off_a
        y = off_b if cls_b == 0 else off_a
        new_verts.append((x, y))
    ring = _dedup_ring(np.array(new_verts, dtype=float))
    if len(ring) < 4:
        raise GeometryError(f"room {room.room_id!r}: degenerate room after snapping")
    if rot is not None:
        ring = ring @ _rotation_std(axis).T
    snapped = RoomPolygon(room.room_id, ring)
    _check_right_angles(snapped)
    return snapped


def _drop_near_straight(verts: np.ndarray, tol_rad: float) -> np.ndarray:
    """Remove vertices whose turn deviates from straight by at most ``tol_rad``."""
    v = _dedup_ring(verts)
    changed = True
    while changed and len(v) > 3:
        changed = False
        keep = np.ones(len(v), dtype=bool)
        for i in range(len(v)):
            u = v[i] - v[i - 1]
            w = v[(i + 1) % len(v)] - v[i]
            turn = math.atan2(abs(u[0] * w[1] - u[1] * w[0]), float(u @ w))
            if turn <= tol_rad:
                keep[i] = False
                changed = True
                break  # recompute turns after each removal
        v = v[keep]
    return v


def _dedup_ring(verts: np.ndarray) -> np.ndarray:
    out: list[np.ndarray] = []
    for p in verts:
        if not out or np.hypot(*(p - out[-1])) > 1e-12:
            out.append(p)
    while len(out) > 1 and np.hypot(*(out[0] - out[-1])) <= 1e-12:
        out.pop()
    return np.array(out, dtype=float).reshape(-1, 2)


def _check_right_angles(room: RoomPolygon, tol: float = 1e-6) -> None:
    angles = interior_angles(room.vertices)
    ok = np.minimum(np.abs(angles - 0.5 * np.pi), np.abs(angles - 1.5 * np.pi)) <= tol
    if not bool(ok.all()):
        raise GeometryError(
            f"room {room.room_id!r}: degenerate room, non-right angle after snapping"
        )


def reconcile_shared_walls(
    rooms: list[RoomPolygon] | tuple[RoomPolygon, ...], gap_tol: float = 0.3
) -> list[RoomPolygon]:
    """Merge near-coincident facing walls of rectangular rooms.

    Independent per-room estimates of a shared wall land on slightly
    different offsets, leaving slivers of overlap or gaps between adjacent
    rooms.  Facing wall pairs closer than ``gap_tol`` (and actually
    overlapping along the wall direction) are replaced by their average, so
    adjacent rooms meet exactly.  Exact on clean input and a no-op for
    non-rectangular rooms.
    """
    boxes: dict[int, np.ndarray | None] = {}
    for i, r in enumerate(rooms):
        if len(r.vertices) == 4 and is_manhattan(r.vertices, tol=1e-12):
            lo = r.vertices.min(axis=0)
            hi = r.vertices.max(axis=0)
            boxes[i] = np.array([lo, hi])  # [[x_lo, y_lo], [x_hi, y_hi]]
        else:
            boxes[i] = None
    order = sorted(range(len(rooms)), key=lambda i: rooms[i].room_id)
    for ii, i in enumerate(order):
        for j in order[ii + 1 :]:
            bi, bj = boxes[i], boxes[j]
            if bi is None or bj is None:
                continue
            for axis in (0, 1):
                other = 1 - axis
                span = min(bi[1, other], bj[1, other]) - max(bi[0, other], bj[0, other])
                if span <= 1e-9:
                    continue  # rooms do not face each other along this axis
                for hi_side, lo_side in ((i, j), (j, i)):
                    bh, bl = boxes[hi_side], boxes[lo_side]
                    gap = bl[0, axis] - bh[1, axis]
                    if gap != 0.0 and abs(gap) <= gap_tol:
                        mid = 0.5 * (bh[1, axis] + bl[0, axis])
                        bh[1, axis] = mid
                        bl[0, axis] = mid
    out = []
    for i, r in enumerate(rooms):
        b = boxes[i]
        if b is None:
            out.append(r)
            continue
        (x0, y0), (x1, y1) = b
        out.append(RoomPolygon(r.room_id, np.array([(x0, y0), (x1, y0), (x1, y1), (x0, y1)])))
    return out


def boundary_hull(rooms: list[RoomPolygon] | tuple[RoomPolygon, ...]) -> BoundaryPolygon:
    """Convex hull over every room vertex."""
    if not rooms:
        raise GeometryError("cannot build a boundary from zero rooms")
    pts = np.vstack([r.vertices for r in rooms])
    return BoundaryPolygon(convex_hull(pts))


def point_in_ring(point: np.ndarray, ring: np.ndarray) -> bool:
    """Parity ray-cast (+x ray, half-open rule) against a simple polygon.

    An edge is counted iff exactly one endpoint lies strictly above the ray,
    which makes vertices on the ray count once instead of twice.
    """
    px, py = float(point[0]), float(point[1])
    v = np.asarray(ring, dtype=float)
    inside = False
    for i in range(len(v)):
        ax, ay = v[i]
        bx, by = v[(i + 1) % len(v)]
        if (ay > py) != (by > py):
            x_hit = ax + (py - ay) * (bx - ax) / (by - ay)
            if x_hit > px:
                inside = not inside
    return inside


def point_in_boundary(
    point: np.ndarray, boundary: BoundaryPolygon, edge_tol: float = EDGE_INSIDE_TOL
) -> bool:
    """Containment with points within ``edge_tol`` of an edge counted inside."""
    v = boundary.vertices
    p = np.asarray(point, dtype=float).reshape(1, 2)
    for i in range(len(v)):
        if points_segment_distance(p, v[i], v[(i + 1) % len(v)])[0] <= edge_tol:
            return True
    return point_in_ring(point, v)


def align_to_boundary(
    room: RoomPolygon,
    boundary: BoundaryPolygon,
    snap_dist: float = 0.3,
    angle_tol_deg: float = 5.0,
) -> RoomPolygon:
    """Snap interior vertices near the boundary onto it.

    Each vertex inside the boundary and within ``snap_dist`` of its nearest
    boundary edge moves to the perpendicular foot on that edge (clamped to
    the segment).  If the moves broke axis alignment the polygon is
    re-snapped to Manhattan.
    """
    if snap_dist < 0:
        raise GeometryError("snap distance must be non-negative")
    bv = boundary.vertices
    verts = room.vertices.copy()
    for i, p in enumerate(verts):
        if not point_in_boundary(p, boundary):
            continue
        best_foot, best_dist = None, np.inf
        for j in range(len(bv)):
            foot, _, dist = segment_foot(p, bv[j], bv[(j + 1) % len(bv)])
            if dist < best_dist:
                best_foot, best_dist = foot, dist
        # a vertex already on the boundary stays bit-identical
        if 1e-12 < best_dist <= snap_dist:
            verts[i] = best_foot
    aligned = RoomPolygon(room.room_id, verts)
    if is_manhattan(aligned.vertices):
        return aligned
    return snap_manhattan(aligned, axis=0.0, angle_tol_deg=angle_tol_deg)


def _rectilinear_overlap_area(va: np.ndarray, vb: np.ndarray) -> float:
    """Interior overlap of two rectilinear rings via grid decomposition."""
    xs = np.unique(np.concatenate([va[:, 0], vb[:, 0]]))
    ys = np.unique(np.concatenate([va[:, 1], vb[:, 1]]))
    area = 0.0
    for i in range(len(xs) - 1):
        for j in range(len(ys) - 1):
            cell = (xs[i + 1] - xs[i]) * (ys[j + 1] - ys[j])
            if cell <= 0:
                continue
            center = np.array([0.5 * (xs[i] + xs[i + 1]), 0.5 * (ys[j] + ys[j + 1])])
            if point_in_ring(center, va) and point_in_ring(center, vb):
                area += cell
    return area


def build_floorplan(
    rooms: list[RoomPolygon] | tuple[RoomPolygon, ...],
    boundary: BoundaryPolygon,
    doors: list[DoorPlacement] | tuple[DoorPlacement, ...] = (),
    overlap_tol: float = 1e-6,
) -> FloorPlan:
    """Validate and bundle the final plan.

    Rooms may share walls but their interiors must not overlap by more than
    ``overlap_tol`` square meters, and every vertex must lie inside or on
    the boundary.
    """
    rooms = tuple(sorted(rooms, key=lambda r: r.room_id))
    for ra, rb in combinations(rooms, 2):
        overlap = _rectilinear_overlap_area(ra.vertices, rb.vertices)
        if overlap > overlap_tol:
            raise GeometryError(
                f"rooms {ra.room_id!r} and {rb.room_id!r} overlap by {overlap:.6f} m^2"
            )
    for r in rooms:
        for p in r.vertices:
            if not point_in_boundary(p, boundary, edge_tol=1e-7):
                raise GeometryError(
                    f"room {r.room_id!r} vertex ({p[0]:.3f}, {p[1]:.3f}) outside boundary"
                )
    ids = {r.room_id for r in rooms}
    for d in doors:
        if d.room_id not in ids:
            raise GeometryError(f"door references unknown room {d.room_id!r}")
        n_walls = len(next(r for r in rooms if r.room_id == d.room_id).vertices)
        if not 0 <= d.wall_index < n_walls:
            raise GeometryError(
                f"door references wall {d.wall_index} of room {d.room_id!r} "
                f"which has {n_walls} walls"
            )
    return FloorPlan(rooms, boundary, tuple(doors))
