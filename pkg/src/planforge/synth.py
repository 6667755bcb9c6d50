"""Synthetic Manhattan floors: ground truth plus rendered capture datasets.

Rooms are axis-aligned rectangles with vertical walls.  Each room gets four
captures taken near the room center, one per corner, plus one fronto-parallel
capture per door.  Depth is ray-cast per pixel against the wall rectangles
(and optional box occluders); the edge mask marks rays landing within 3 cm of
a wall-wall or wall-floor junction.  All randomness derives from a master
seed split per capture, so identical specs produce byte-identical datasets.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from PIL import Image

from .doors import DEFAULT_DOOR_WIDTH
from .errors import InputError
from .geometry import convex_hull
from .ingest import (
    MANIFEST_VERSION,
    CaptureRecord,
    DatasetManifest,
    RoomRecord,
    emit_manifest,
    reduce_pose,
)
from .types import (
    MASK_RASTER_BYTES,
    BoundaryPolygon,
    CameraIntrinsics,
    CapturePose,
    DoorBox,
    DoorPlacement,
    FloorPlan,
    Label,
    PlanTransform,
    RoomPolygon,
    SceneScale,
)

DEFAULT_INTRINSICS = CameraIntrinsics(f=400.0, cx=240.0, cy=320.0, width=480, height=640)
DEFAULT_SCALE = SceneScale(4000.0)

JUNCTION_BAND = 0.03  # meters: edge label within this of a junction
CAMERA_BACKOFF = 0.5  # meters: camera sits this far behind the room center
DOOR_CAMERA_DIST = 2.0  # meters: preferred door-capture standoff
MIN_ROOM_SIDE = 1.5  # meters: capture protocol needs this much clearance


@dataclass(frozen=True)
class RoomSpec:
    """Axis-aligned rectangular room, corner at (x, y), extent width x depth."""

    room_id: str
    x: float
    y: float
    width: float
    depth: float

    def __post_init__(self) -> None:
        if not (self.width > 0 and self.depth > 0):
            raise InputError(f"room {self.room_id!r}: extent must be positive")

    def corners(self) -> np.ndarray:
        """CCW corners starting at (x, y); capture k faces corner k."""
        x0, y0 = self.x, self.y
        x1, y1 = self.x + self.width, self.y + self.depth
        return np.array([(x0, y0), (x1, y0), (x1, y1), (x0, y1)], dtype=float)

    @property
    def center(self) -> np.ndarray:
        return np.array([self.x + 0.5 * self.width, self.y + 0.5 * self.depth])


@dataclass(frozen=True)
class DoorSpec:
    """Door on one wall of a room at a fractional offset along that wall."""

    room_id: str
    wall_index: int
    offset: float  # fraction of the wall length, door center
    width: float = DEFAULT_DOOR_WIDTH

    def __post_init__(self) -> None:
        if not 0 <= self.wall_index < 4:
            raise InputError(f"door wall index {self.wall_index} outside 0..3")
        if not 0.0 < self.offset < 1.0:
            raise InputError(f"door offset {self.offset} outside (0, 1)")
        if not self.width > 0:
            raise InputError("door width must be positive")


@dataclass(frozen=True)
class OccluderSpec:
    """Axis-aligned furniture box standing on the floor."""

    x: float
    y: float
    width: float
    depth: float
    height: float

    def __post_init__(self) -> None:
        if not (self.width > 0 and self.depth > 0 and self.height > 0):
            raise InputError("occluder extents must be positive")

    def bounds3(self) -> tuple[np.ndarray, np.ndarray]:
        lo = np.array([self.x, 0.0, self.y])
        hi = np.array([self.x + self.width, self.height, self.y + self.depth])
        return lo, hi


@dataclass(frozen=True)
class NoiseSpec:
    """Gaussian corruption levels; zero everywhere means exact rendering."""

    depth_sigma: float = 0.0  # fraction of depth
    yaw_sigma: float = 0.0  # radians
    translation_sigma: float = 0.0  # meters, plan axes

    def __post_init__(self) -> None:
        if min(self.depth_sigma, self.yaw_sigma, self.translation_sigma) < 0:
            raise InputError("noise sigmas must be non-negative")


@dataclass(frozen=True)
class FloorSpec:
    """Complete scene description: geometry, capture noise, and master seed."""

    rooms: tuple[RoomSpec, ...]
    doors: tuple[DoorSpec, ...] = ()
    occluders: tuple[OccluderSpec, ...] = ()
    camera_height: float = 1.5
    wall_height: float = 2.7
    door_height: float = 2.0
    noise: NoiseSpec = field(default_factory=NoiseSpec)
    seed: int = 0

    def __post_init__(self) -> None:
        object.__setattr__(self, "rooms", tuple(self.rooms))
        object.__setattr__(self, "doors", tuple(self.doors))
        object.__setattr__(self, "occluders", tuple(self.occluders))
        if not self.rooms:
            raise InputError("floor spec needs at least one room")
        ids = [r.room_id for r in self.rooms]
        if len(set(ids)) != len(ids):
            raise InputError("duplicate room ids in floor spec")
        for r in self.rooms:
            if min(r.width, r.depth) < MIN_ROOM_SIDE:
                raise InputError(
                    f"room {r.room_id!r}: sides must be >= {MIN_ROOM_SIDE} m "
                    "for corner captures"
                )
        for a_i in range(len(self.rooms)):
            for b_i in range(a_i + 1, len(self.rooms)):
                a, b = self.rooms[a_i], self.rooms[b_i]
                ox = min(a.x + a.width, b.x + b.width) - max(a.x, b.x)
                oy = min(a.y + a.depth, b.y + b.depth) - max(a.y, b.y)
                if ox > 1e-9 and oy > 1e-9:
                    raise InputError(
                        f"rooms {a.room_id!r} and {b.room_id!r} overlap"
                    )
        if not 0 < self.camera_height < self.wall_height:
            raise InputError("camera height must sit between floor and ceiling")
        if not 0 < self.door_height <= self.wall_height:
            raise InputError("door height must be positive and fit the wall")
        by_id = {r.room_id: r for r in self.rooms}
        for d in self.doors:
            room = by_id.get(d.room_id)
            if room is None:
                raise InputError(f"door references unknown room {d.room_id!r}")
            wall_len = _wall_length(room, d.wall_index)
            center = d.offset * wall_len
            if d.width >= wall_len or center < 0.5 * d.width - 1e-9 or (
                center > wall_len - 0.5 * d.width + 1e-9
            ):
                raise InputError(
                    f"door on room {d.room_id!r} wall {d.wall_index} does not fit"
                )

    def room(self, room_id: str) -> RoomSpec:
        for r in self.rooms:
            if r.room_id == room_id:
                return r
        raise KeyError(room_id)


def _wall_length(room: RoomSpec, wall_index: int) -> float:
    c = room.corners()
    a, b = c[wall_index], c[(wall_index + 1) % 4]
    return float(np.hypot(*(b - a)))


def spec_ground_truth(spec: FloorSpec) -> FloorPlan:
    """Exact floor plan of a spec: rooms, convex boundary, door placements."""
    rooms = tuple(
        RoomPolygon(r.room_id, r.corners())
        for r in sorted(spec.rooms, key=lambda r: r.room_id)
    )
    boundary = BoundaryPolygon(convex_hull(np.vstack([r.vertices for r in rooms])))
    doors = tuple(
        DoorPlacement(d.room_id, d.wall_index, d.offset, d.width)
        for d in spec.doors
    )
    return FloorPlan(rooms, boundary, doors)


def ground_truth_report(gt: FloorPlan) -> dict:
    """Analytic per-room areas, aspect ratios, and corner lists."""
    return {
        "rooms": [
            {
                "id": r.room_id,
                "area": r.area(),
                "aspect_ratio": r.aspect_ratio(),
                "corners": [[float(x), float(y)] for x, y in r.vertices],
            }
            for r in sorted(gt.rooms, key=lambda r: r.room_id)
        ]
    }


# ---------------------------------------------------------------------------
# Rendering


@dataclass(frozen=True)
class _WallRect:
    """Precomputed vertical wall rectangle for ray casting."""

    a: np.ndarray  # (2,) plan start
    ehat: np.ndarray  # (2,) plan unit direction
    length: float
    height: float
    normal3: np.ndarray  # (3,) session-frame plane normal
    origin3: np.ndarray  # (3,) point on the plane


def _scene_walls(spec: FloorSpec) -> list[_WallRect]:
    walls = []
    for room in sorted(spec.rooms, key=lambda r: r.room_id):
        c = room.corners()
        for k in range(4):
            a, b = c[k], c[(k + 1) % 4]
            e = b - a
            length = float(np.hypot(*e))
            ehat = e / length
            normal3 = np.array([-ehat[1], 0.0, ehat[0]])
            origin3 = np.array([a[0], 0.0, a[1]])
            walls.append(_WallRect(a, ehat, length, spec.wall_height, normal3, origin3))
    return walls


def render_capture(
    pose: CapturePose, spec: FloorSpec, intrinsics: CameraIntrinsics
) -> tuple[np.ndarray, np.ndarray]:
    """Exact (unquantized) depth in meters plus per-pixel labels.

    Rays that miss every wall get depth 0 (the invalid sentinel).  Occluder
    hits are labeled OTHER; wall hits are WALL, or EDGE within 3 cm of a
    wall-wall corner line or the wall-floor junction.
    """
    h, w = intrinsics.height, intrinsics.width
    uu, vv = np.meshgrid(np.arange(w, dtype=float), np.arange(h, dtype=float))
    d_cam = np.stack(
        [
            (uu - intrinsics.cx) / intrinsics.f,
            (vv - intrinsics.cy) / intrinsics.f,
            np.ones_like(uu),
        ],
        axis=-1,
    )
    d_sess = d_cam @ pose.rotation_matrix().T
    origin = pose.translation

    best_t = np.full((h, w), np.inf)
    labels = np.zeros((h, w), dtype=np.uint8)
    for wall in _scene_walls(spec):
        denom = d_sess @ wall.normal3
        numer = float(wall.normal3 @ (wall.origin3 - origin))
        with np.errstate(divide="ignore", invalid="ignore"):
            t = numer / denom
        hx = origin[0] + d_sess[..., 0] * t
        hy = origin[1] + d_sess[..., 1] * t
        hz = origin[2] + d_sess[..., 2] * t
        s = (hx - wall.a[0]) * wall.ehat[0] + (hz - wall.a[1]) * wall.ehat[1]
        on_wall = (
            (np.abs(denom) > 1e-12)
            & (t > 1e-9)
            & (hy >= 0.0)
            & (hy <= wall.height)
            & (s >= 0.0)
            & (s <= wall.length)
        )
        is_edge = (
            (s <= JUNCTION_BAND)
            | (s >= wall.length - JUNCTION_BAND)
            | (hy <= JUNCTION_BAND)
        )
        lab = np.where(is_edge, int(Label.EDGE), int(Label.WALL)).astype(np.uint8)
        closer = on_wall & (t < best_t - 1e-12)
        tied = on_wall & (np.abs(t - best_t) <= 1e-12) & (lab > labels)
        best_t = np.where(closer, t, best_t)
        labels = np.where(closer | tied, lab, labels)
    for occ in spec.occluders:
        entry = _box_entry(origin, d_sess, *occ.bounds3())
        closer = np.isfinite(entry) & (entry > 1e-9) & (entry < best_t - 1e-12)
        best_t = np.where(closer, entry, best_t)
        labels = np.where(closer, np.uint8(Label.OTHER), labels)
    depth = np.where(np.isfinite(best_t), best_t, 0.0)
    labels = np.where(depth > 0, labels, np.uint8(Label.OTHER))
    return depth, labels


def _box_entry(
    origin: np.ndarray, d_sess: np.ndarray, lo: np.ndarray, hi: np.ndarray
) -> np.ndarray:
    """Slab-test ray parameter where rays enter an AABB (inf when missing)."""
    entry = np.full(d_sess.shape[:-1], -np.inf)
    exit_ = np.full(d_sess.shape[:-1], np.inf)
    for axis in range(3):
        d = d_sess[..., axis]
        d_safe = np.where(d == 0.0, 1e-300, d)
        t1 = (lo[axis] - origin[axis]) / d_safe
        t2 = (hi[axis] - origin[axis]) / d_safe
        entry = np.maximum(entry, np.minimum(t1, t2))
        exit_ = np.minimum(exit_, np.maximum(t1, t2))
    return np.where(entry <= exit_, entry, np.inf)


def _segment_blocked(p0: np.ndarray, p1: np.ndarray, occ: OccluderSpec) -> bool:
    """True when the open segment p0->p1 (3-D) passes through the box."""
    lo, hi = occ.bounds3()
    d = p1 - p0
    entry, exit_ = -math.inf, math.inf
    for axis in range(3):
        if d[axis] == 0.0:
            if not lo[axis] <= p0[axis] <= hi[axis]:
                return False
            continue
        t1 = (lo[axis] - p0[axis]) / d[axis]
        t2 = (hi[axis] - p0[axis]) / d[axis]
        entry = max(entry, min(t1, t2))
        exit_ = min(exit_, max(t1, t2))
    return entry <= exit_ and exit_ > 1e-6 and entry < 1.0 - 1e-6


# ---------------------------------------------------------------------------
# Capture protocol


def corner_pose(room: RoomSpec, corner_index: int, camera_height: float) -> CapturePose:
    """Stand behind the room center, face the chosen corner, pitch 0."""
    corner = room.corners()[corner_index]
    away = room.center - corner
    pos = room.center + CAMERA_BACKOFF * away / float(np.hypot(*away))
    look = corner - pos
    yaw = math.atan2(look[0], look[1])
    return CapturePose.yaw_only(yaw, tx=pos[0], ty=camera_height, tz=pos[1])


def door_pose(room: RoomSpec, door: DoorSpec, camera_height: float) -> CapturePose:
    """Fronto-parallel view of the door's wall from inside the room."""
    c = room.corners()
    a, b = c[door.wall_index], c[(door.wall_index + 1) % 4]
    e = b - a
    length = float(np.hypot(*e))
    ehat = e / length
    inward = np.array([-ehat[1], ehat[0]])  # CCW ring: interior is left
    center = a + ehat * (door.offset * length)
    clearance = room.width if abs(inward[0]) > 0.5 else room.depth
    dist = min(DOOR_CAMERA_DIST, clearance - 0.3)
    if dist <= 0.3:
        raise InputError(
            f"room {room.room_id!r} too shallow for a door capture on wall "
            f"{door.wall_index}"
        )
    pos = center + inward * dist
    look = -inward
    yaw = math.atan2(look[0], look[1])
    return CapturePose.yaw_only(yaw, tx=pos[0], ty=camera_height, tz=pos[1])


def door_box_for(
    door: DoorSpec,
    room: RoomSpec,
    pose: CapturePose,
    intrinsics: CameraIntrinsics,
    spec: FloorSpec,
    capture_id: str,
) -> DoorBox:
    """Analytic detection box: door extents and wall corners projected to pixels."""
    plan = reduce_pose(pose)
    inv = plan.inverse()

    def u_of(p: np.ndarray) -> float:
        local = inv.apply(p)
        if local[1] <= 1e-9:
            raise InputError("door capture cannot see the wall corner")
        return intrinsics.cx + intrinsics.f * float(local[0]) / float(local[1])

    c = room.corners()
    a, b = c[door.wall_index], c[(door.wall_index + 1) % 4]
    ehat = (b - a) / float(np.hypot(*(b - a)))
    center = a + ehat * (door.offset * float(np.hypot(*(b - a))))
    d0 = center - ehat * (0.5 * door.width)
    d1 = center + ehat * (0.5 * door.width)
    u_left, u_right = sorted((u_of(a), u_of(b)))
    u_min, u_max = sorted((u_of(d0), u_of(d1)))
    wall_depth = float(inv.apply(center)[1])
    v_floor = intrinsics.cy + intrinsics.f * (0.0 - spec.camera_height) / wall_depth
    v_top = intrinsics.cy + intrinsics.f * (spec.door_height - spec.camera_height) / wall_depth
    v_min, v_max = sorted((v_floor, v_top))
    return DoorBox(capture_id, u_min, v_min, u_max, v_max, u_left, u_right)


def _check_corner_visible(
    room: RoomSpec, corner_index: int, pose: CapturePose, spec: FloorSpec
) -> None:
    if not spec.occluders:
        return
    corner = room.corners()[corner_index]
    cam = pose.translation
    heights = (0.05, min(1.0, 0.5 * spec.wall_height), spec.wall_height - 0.05)
    for h in heights:
        target = np.array([corner[0], h, corner[1]])
        if not any(_segment_blocked(cam, target, occ) for occ in spec.occluders):
            return
    raise InputError(
        f"occluded corner: room {room.room_id!r} corner {corner_index} is not "
        "visible from its capture pose"
    )


# ---------------------------------------------------------------------------
# Dataset generation


def generate(
    spec: FloorSpec,
    out_dir: str | Path,
    intrinsics: CameraIntrinsics = DEFAULT_INTRINSICS,
    scale: SceneScale = DEFAULT_SCALE,
) -> tuple[DatasetManifest, FloorPlan]:
    """Render the full dataset into ``out_dir``; returns (manifest, truth).

    Writes one 16-bit depth PNG and one 8-bit mask PNG per capture, plus
    ``manifest.json`` and ``ground_truth.json``.  Deterministic for a fixed
    (spec, intrinsics, scale): every capture draws from its own RNG stream
    seeded by (master seed, room index, capture index).
    """
    from . import planio

    out_dir = Path(out_dir).resolve()
    out_dir.mkdir(parents=True, exist_ok=True)
    truth = spec_ground_truth(spec)
    mask_lut = np.zeros(3, dtype=np.uint8)
    for label, byte in MASK_RASTER_BYTES.items():
        mask_lut[int(label)] = byte

    rooms_sorted = sorted(spec.rooms, key=lambda r: r.room_id)
    room_records = []
    for room_idx, room in enumerate(rooms_sorted):
        plans: list[tuple[CapturePose, DoorSpec | None]] = [
            (corner_pose(room, k, spec.camera_height), None) for k in range(4)
        ]
        for k in range(4):
            _check_corner_visible(room, k, plans[k][0], spec)
        for door in (d for d in spec.doors if d.room_id == room.room_id):
            plans.append((door_pose(room, door, spec.camera_height), door))
        for pose, _ in plans:
            cam = pose.translation
            for occ in spec.occluders:
                lo, hi = occ.bounds3()
                if bool(np.all(cam >= lo) and np.all(cam <= hi)):
                    raise InputError(
                        f"capture pose in room {room.room_id!r} sits inside an occluder"
                    )

        captures = []
        for cap_idx, (pose_true, door) in enumerate(plans):
            rng = np.random.default_rng([spec.seed, room_idx, cap_idx])
            yaw_err = float(rng.normal(0.0, spec.noise.yaw_sigma))
            tx_err, tz_err = rng.normal(0.0, spec.noise.translation_sigma, 2)

            depth_m, labels = render_capture(pose_true, spec, intrinsics)
            gain = 1.0 + spec.noise.depth_sigma * rng.standard_normal(depth_m.shape)
            raw = np.rint(depth_m * gain * scale.s)
            raw = np.clip(raw, 0, np.iinfo(np.uint16).max).astype(np.uint16)
            raw[depth_m <= 0.0] = 0

            cap_id = f"{room.room_id}:{cap_idx}"
            stem = f"r{room_idx:02d}c{cap_idx}"
            depth_path = out_dir / f"{stem}_depth.png"
            edges_path = out_dir / f"{stem}_edges.png"
            Image.fromarray(raw).save(depth_path)
            Image.fromarray(mask_lut[labels], mode="L").save(edges_path)

            true_yaw = math.atan2(pose_true.forward()[0], pose_true.forward()[2])
            stored = CapturePose.yaw_only(
                true_yaw + yaw_err,
                tx=pose_true.tx + float(tx_err),
                ty=pose_true.ty,
                tz=pose_true.tz + float(tz_err),
            )
            boxes = ()
            if door is not None:
                boxes = (
                    door_box_for(door, room, pose_true, intrinsics, spec, cap_id),
                )
            captures.append(
                CaptureRecord(cap_id, depth_path, edges_path, stored, boxes)
            )
        room_records.append(RoomRecord(room.room_id, tuple(captures)))

    manifest = DatasetManifest(
        MANIFEST_VERSION, intrinsics, scale, tuple(room_records), out_dir
    )
    emit_manifest(manifest, out_dir / "manifest.json")
    planio.write_plan(truth, out_dir / "ground_truth.json")
    return manifest, truth
