"""Door placement: image-space door boxes onto room walls in the plan."""

from __future__ import annotations

import math

import numpy as np

from .errors import GeometryError, InputError
from .types import (
    CameraIntrinsics,
    DoorBox,
    DoorPlacement,
    PlanTransform,
    RoomPolygon,
)

DEFAULT_DOOR_WIDTH = 0.9  # meters, used when no box-derived width is available


def door_ratio(box: DoorBox) -> float:
    """Fractional position of the door center between the wall's image ends."""
    if not box.u_left < box.centroid_u < box.u_right:
        raise InputError(
            f"door outside wall: centroid u={box.centroid_u:.1f} not within "
            f"({box.u_left:.1f}, {box.u_right:.1f})"
        )
    return (box.centroid_u - box.u_left) / (box.u_right - box.u_left)


def place_door(
    ratio: float, room: RoomPolygon, wall_index: int, width: float
) -> DoorPlacement:
    """Place a door center at ``ratio`` of the wall length from the wall's
    first vertex.  A door poking past a wall end keeps its width and has its
    offset clamped into the wall, flagged ``clamped``."""
    if not 0.0 < ratio < 1.0:
        raise GeometryError(f"door ratio {ratio} outside (0, 1)")
    if not 0 <= wall_index < len(room.vertices):
        raise GeometryError(
            f"wall index {wall_index} out of range for room {room.room_id!r}"
        )
    a, b = room.walls()[wall_index]
    wall_len = float(np.hypot(*(b - a)))
    if not 0.0 < width < wall_len:
        raise GeometryError(
            f"door width {width:.3f} m does not fit wall of {wall_len:.3f} m"
        )
    center = ratio * wall_len
    clamped = False
    half = 0.5 * width
    if center < half or center > wall_len - half:
        center = min(max(center, half), wall_len - half)
        clamped = True
    return DoorPlacement(room.room_id, wall_index, center / wall_len, width, clamped)


def _ray_segment_hit(
    origin: np.ndarray, direction: np.ndarray, a: np.ndarray, b: np.ndarray
) -> float | None:
    """Ray parameter of the first intersection with segment ab, else None."""
    e = b - a
    denom = direction[0] * e[1] - direction[1] * e[0]
    if abs(denom) < 1e-12:
        return None
    rel = a - origin
    t = (rel[0] * e[1] - rel[1] * e[0]) / denom
    s = (rel[0] * direction[1] - rel[1] * direction[0]) / denom
    if t > 1e-9 and -1e-9 <= s <= 1 + 1e-9:
        return float(t)
    return None


def associate_wall(pose_plan: PlanTransform, room: RoomPolygon) -> int:
    """Index of the room wall the camera's forward ray hits first."""
    origin = np.array([pose_plan.tx, pose_plan.ty])
    direction = pose_plan.apply_direction(np.array([0.0, 1.0]))
    best_t, best_idx = math.inf, None
    for idx, (a, b) in enumerate(room.walls()):
        t = _ray_segment_hit(origin, direction, a, b)
        if t is not None and t < best_t:
            best_t, best_idx = t, idx
    if best_idx is None:
        raise GeometryError(
            f"camera forward ray misses every wall of room {room.room_id!r}"
        )
    return best_idx


def _endpoint_u(
    point: np.ndarray, pose_plan: PlanTransform, intrinsics: CameraIntrinsics
) -> float:
    """Horizontal image coordinate of a plan point seen from the camera."""
    local = pose_plan.inverse().apply(point)
    forward = float(local[1])
    if forward <= 1e-9:
        raise GeometryError("wall endpoint is behind the camera")
    return intrinsics.cx + intrinsics.f * float(local[0]) / forward


def place_door_from_box(
    box: DoorBox,
    pose_plan: PlanTransform,
    room: RoomPolygon,
    intrinsics: CameraIntrinsics,
) -> DoorPlacement:
    """Full image-to-plan door transfer for one capture.

    The camera's forward ray selects the wall; the door-center fraction
    between the wall's image endpoints transfers to the same fraction of the
    wall's plan length (measured from whichever wall endpoint appears
    leftmost in the image), and the box width transfers proportionally.
    """
    wall_index = associate_wall(pose_plan, room)
    a, b = room.walls()[wall_index]
    u_a = _endpoint_u(a, pose_plan, intrinsics)
    u_b = _endpoint_u(b, pose_plan, intrinsics)
    if abs(u_a - u_b) < 1e-9:
        raise GeometryError(
            f"wall {wall_index} of room {room.room_id!r} projects to a point"
        )
    ratio = door_ratio(box)
    if u_a > u_b:
        ratio = 1.0 - ratio
    wall_len = float(np.hypot(*(b - a)))
    width = (box.u_max - box.u_min) / (box.u_right - box.u_left) * wall_len
    return place_door(ratio, room, wall_index, width)


def door_span(
    room: RoomPolygon, placement: DoorPlacement
) -> tuple[np.ndarray, np.ndarray]:
    """Plan endpoints of the door opening along its wall."""
    a, b = room.walls()[placement.wall_index]
    wall_len = float(np.hypot(*(b - a)))
    along = (b - a) / wall_len
    center = a + along * (placement.ratio * wall_len)
    half = 0.5 * placement.width * along
    return center - half, center + half
