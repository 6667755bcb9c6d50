"""Dataset loading: manifest parsing, raster decoding, pose reduction.

A dataset is a directory with one JSON manifest plus one 16-bit depth raster
and one 8-bit edge-mask raster per capture.  Raster paths in the manifest are
relative to the manifest file.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from PIL import Image

from .errors import InputError
from .types import (
    MASK_RASTER_VALUES,
    CameraIntrinsics,
    CapturePose,
    DepthMap,
    DoorBox,
    EdgeMask,
    PlanTransform,
    SceneScale,
)

MANIFEST_VERSION = 1
MAX_PITCH_RAD = math.radians(80.0)

_POSE_KEYS = ("qw", "qx", "qy", "qz", "tx", "ty", "tz")
_DOOR_KEYS = ("u_min", "v_min", "u_max", "v_max", "u_left", "u_right")
_INTR_KEYS = ("f", "cx", "cy", "width", "height")


@dataclass(frozen=True)
class CaptureRecord:
    """One capture: raster paths (absolute after parsing), pose, door boxes."""

    capture_id: str
    depth_path: Path
    edges_path: Path
    pose: CapturePose
    doors: tuple[DoorBox, ...] = ()


@dataclass(frozen=True)
class RoomRecord:
    room_id: str
    captures: tuple[CaptureRecord, ...]


@dataclass(frozen=True)
class DatasetManifest:
    version: int
    intrinsics: CameraIntrinsics
    scale: SceneScale
    rooms: tuple[RoomRecord, ...]
    root: Path = field(default_factory=Path)


def _require_keys(obj: dict, keys, context: str) -> None:
    missing = [k for k in keys if k not in obj]
    if missing:
        raise InputError(f"{context}: missing field(s) {missing}")
    extra = [k for k in obj if k not in keys]
    if extra:
        raise InputError(f"{context}: unknown field(s) {extra}")


def parse_manifest(path: str | Path) -> DatasetManifest:
    """Parse and validate a dataset manifest; referenced rasters must exist."""
    path = Path(path)
    try:
        data = json.loads(path.read_text())
    except OSError as exc:
        raise InputError(f"cannot read manifest: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise InputError(f"manifest is not valid structured text: {exc}") from exc
    if not isinstance(data, dict):
        raise InputError("manifest root must be a mapping")
    _require_keys(data, ("version", "intrinsics", "scale_s", "rooms"), "manifest")
    if data["version"] != MANIFEST_VERSION:
        raise InputError(f"unsupported manifest version {data['version']!r}")

    intr_obj = data["intrinsics"]
    _require_keys(intr_obj, _INTR_KEYS, "manifest.intrinsics")
    intrinsics = CameraIntrinsics(
        f=float(intr_obj["f"]),
        cx=float(intr_obj["cx"]),
        cy=float(intr_obj["cy"]),
        width=int(intr_obj["width"]),
        height=int(intr_obj["height"]),
    )
    scale = SceneScale(float(data["scale_s"]))

    root = path.parent
    rooms: list[RoomRecord] = []
    seen_ids: set[str] = set()
    for room_obj in data["rooms"]:
        _require_keys(room_obj, ("id", "captures"), "manifest.rooms[]")
        room_id = str(room_obj["id"])
        if room_id in seen_ids:
            raise InputError(f"duplicate room id {room_id!r}")
        seen_ids.add(room_id)
        captures = []
        if not room_obj["captures"]:
            raise InputError(f"room {room_id!r} has no captures")
        for idx, cap_obj in enumerate(room_obj["captures"]):
            _require_keys(cap_obj, ("depth", "edges", "pose", "doors"), f"room {room_id!r} capture {idx}")
            pose_obj = cap_obj["pose"]
            _require_keys(pose_obj, _POSE_KEYS, f"room {room_id!r} capture {idx} pose")
            pose = CapturePose(*(float(pose_obj[k]) for k in _POSE_KEYS))
            doors = []
            cap_id = f"{room_id}:{idx}"
            for door_obj in cap_obj["doors"]:
                _require_keys(door_obj, _DOOR_KEYS, f"room {room_id!r} capture {idx} door")
                doors.append(DoorBox(cap_id, *(float(door_obj[k]) for k in _DOOR_KEYS)))
            depth_path = root / cap_obj["depth"]
            edges_path = root / cap_obj["edges"]
            for p in (depth_path, edges_path):
                if not p.is_file():
                    raise InputError(f"missing raster file: {p}")
            captures.append(
                CaptureRecord(cap_id, depth_path, edges_path, pose, tuple(doors))
            )
        rooms.append(RoomRecord(room_id, tuple(captures)))
    if not rooms:
        raise InputError("manifest contains no rooms")
    return DatasetManifest(MANIFEST_VERSION, intrinsics, scale, tuple(rooms), root)


def emit_manifest(manifest: DatasetManifest, path: str | Path) -> None:
    """Write a manifest; raster paths are stored relative to the output file."""
    path = Path(path)
    root = path.parent

    def rel(p: Path) -> str:
        return p.relative_to(root).as_posix() if p.is_absolute() else p.as_posix()

    data = {
        "version": manifest.version,
        "intrinsics": {
            "f": manifest.intrinsics.f,
            "cx": manifest.intrinsics.cx,
            "cy": manifest.intrinsics.cy,
            "width": manifest.intrinsics.width,
            "height": manifest.intrinsics.height,
        },
        "scale_s": manifest.scale.s,
        "rooms": [
            {
                "id": room.room_id,
                "captures": [
                    {
                        "depth": rel(cap.depth_path),
                        "edges": rel(cap.edges_path),
                        "pose": {k: getattr(cap.pose, k) for k in _POSE_KEYS},
                        "doors": [
                            {k: getattr(d, k) for k in _DOOR_KEYS} for d in cap.doors
                        ],
                    }
                    for cap in room.captures
                ],
            }
            for room in manifest.rooms
        ],
    }
    path.write_text(json.dumps(data, indent=2, sort_keys=True) + "\n")


def decode_depth(path: str | Path, intrinsics: CameraIntrinsics | None = None) -> DepthMap:
    """Decode a 16-bit grayscale raster; raw 0 stays the invalid sentinel."""
    try:
        im = Image.open(path)
        im.load()
    except OSError as exc:
        raise InputError(f"cannot read depth raster {path}: {exc}") from exc
    if im.mode == "I;16":
        arr = np.asarray(im, dtype=np.uint16)
    elif im.mode == "I":
        wide = np.asarray(im, dtype=np.int64)
        if wide.min() < 0 or wide.max() > 0xFFFF:
            raise InputError(f"depth raster {path} exceeds 16-bit range")
        arr = wide.astype(np.uint16)
    else:
        raise InputError(f"depth raster {path} has unsupported bit depth (mode {im.mode})")
    if intrinsics is not None and arr.shape != (intrinsics.height, intrinsics.width):
        raise InputError(
            f"depth raster {path} is {arr.shape[1]}x{arr.shape[0]}, "
            f"intrinsics expect {intrinsics.width}x{intrinsics.height}"
        )
    return DepthMap(arr)


def decode_edge_mask(path: str | Path, intrinsics: CameraIntrinsics | None = None) -> EdgeMask:
    """Decode an 8-bit mask with values {0, 128, 255} -> {OTHER, WALL, EDGE}."""
    try:
        im = Image.open(path)
        im.load()
    except OSError as exc:
        raise InputError(f"cannot read edge mask {path}: {exc}") from exc
    if im.mode != "L":
        raise InputError(f"edge mask {path} must be 8-bit grayscale (mode {im.mode})")
    raw = np.asarray(im, dtype=np.uint8)
    if intrinsics is not None and raw.shape != (intrinsics.height, intrinsics.width):
        raise InputError(
            f"edge mask {path} is {raw.shape[1]}x{raw.shape[0]}, "
            f"intrinsics expect {intrinsics.width}x{intrinsics.height}"
        )
    lut = np.full(256, 255, dtype=np.int16)
    for byte, label in MASK_RASTER_VALUES.items():
        lut[byte] = int(label)
    labels = lut[raw]
    if (labels == 255).any():
        bad = sorted(int(v) for v in np.unique(raw) if int(v) not in MASK_RASTER_VALUES)
        raise InputError(f"edge mask {path} has unexpected pixel value(s) {bad}")
    return EdgeMask(labels.astype(np.uint8))


def reduce_pose(pose: CapturePose) -> PlanTransform:
    """Reduce a 3-D pose to the 2-D rigid transform used for plan projection.

    Yaw is taken from the horizontal projection of the rotated optical axis,
    so small pitch or roll components do not corrupt it.  Poses pitched past
    80 degrees have no usable horizontal heading and are rejected.
    """
    fwd = pose.forward()
    horiz = math.hypot(fwd[0], fwd[2])
    pitch = math.atan2(fwd[1], horiz)
    if abs(pitch) > MAX_PITCH_RAD:
        raise InputError(
            f"pose unusable for plan reduction: pitch {math.degrees(pitch):.1f} deg"
        )
    yaw = math.atan2(fwd[0], fwd[2])
    return PlanTransform(yaw, pose.tx, pose.tz)
