"""File formats: floor plans, floor specs, and metrics reports.

Everything is JSON with sorted keys, two-space indent, floats rounded to six
decimals, and a trailing newline, so identical inputs produce byte-identical
files.
"""

from __future__ import annotations

import json
import math
from pathlib import Path

import numpy as np

from .doors import DEFAULT_DOOR_WIDTH
from .errors import InputError
from .synth import DoorSpec, FloorSpec, NoiseSpec, OccluderSpec, RoomSpec
from .types import (
    BoundaryPolygon,
    DoorPlacement,
    FloorPlan,
    MetricsReport,
    RoomPolygon,
)


def _r(x: float) -> float:
    """Round for serialization; normalizes -0.0 to 0.0."""
    return round(float(x), 6) + 0.0


def _ring(vertices: np.ndarray) -> list[list[float]]:
    return [[_r(x), _r(y)] for x, y in vertices]


def _dumps(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def plan_to_dict(plan: FloorPlan) -> dict:
    return {
        "rooms": [
            {
                "id": r.room_id,
                "vertices": _ring(r.vertices),
                "area": _r(r.area()),
                "aspect_ratio": _r(r.aspect_ratio()),
            }
            for r in sorted(plan.rooms, key=lambda r: r.room_id)
        ],
        "boundary": _ring(plan.boundary.vertices),
        "doors": [
            {
                "room": d.room_id,
                "wall": d.wall_index,
                "ratio": _r(d.ratio),
                "width": _r(d.width),
                "clamped": d.clamped,
            }
            for d in sorted(
                plan.doors, key=lambda d: (d.room_id, d.wall_index, d.ratio)
            )
        ],
    }


def write_plan(plan: FloorPlan, path: str | Path) -> None:
    Path(path).write_text(_dumps(plan_to_dict(plan)))


def read_plan(path: str | Path) -> FloorPlan:
    path = Path(path)
    try:
        data = json.loads(path.read_text())
    except FileNotFoundError:
        raise InputError(f"plan file not found: {path}")
    except json.JSONDecodeError as e:
        raise InputError(f"plan file {path} is not valid JSON: {e}")
    if not isinstance(data, dict):
        raise InputError(f"plan file {path}: expected a JSON object")
    try:
        rooms = tuple(
            RoomPolygon(r["id"], np.asarray(r["vertices"], dtype=float))
            for r in data["rooms"]
        )
        boundary = BoundaryPolygon(np.asarray(data["boundary"], dtype=float))
        doors = tuple(
            DoorPlacement(
                d["room"], int(d["wall"]), float(d["ratio"]),
                float(d["width"]), bool(d.get("clamped", False)),
            )
            for d in data.get("doors", [])
        )
    except (KeyError, TypeError, ValueError) as e:
        raise InputError(f"plan file {path}: malformed field ({e})")
    return FloorPlan(rooms, boundary, doors)


def write_metrics(report: MetricsReport, path: str | Path | None = None) -> str:
    clean = {
        k: (_r(v) if isinstance(v, float) and math.isfinite(v) else v)
        for k, v in report.as_dict().items()
    }
    text = _dumps(clean)
    if path is not None:
        Path(path).write_text(text)
    return text


_SPEC_KEYS = {
    "rooms", "doors", "occluders", "camera_height", "wall_height",
    "door_height", "noise", "seed",
}
_NOISE_KEYS = {"depth_sigma", "yaw_sigma_deg", "translation_sigma"}


def floor_spec_to_dict(spec: FloorSpec) -> dict:
    return {
        "rooms": [
            {
                "id": r.room_id,
                "x": _r(r.x),
                "y": _r(r.y),
                "width": _r(r.width),
                "depth": _r(r.depth),
            }
            for r in spec.rooms
        ],
        "doors": [
            {
                "room": d.room_id,
                "wall": d.wall_index,
                "offset": _r(d.offset),
                "width": _r(d.width),
            }
            for d in spec.doors
        ],
        "occluders": [
            {
                "x": _r(o.x),
                "y": _r(o.y),
                "width": _r(o.width),
                "depth": _r(o.depth),
                "height": _r(o.height),
            }
            for o in spec.occluders
        ],
        "camera_height": _r(spec.camera_height),
        "wall_height": _r(spec.wall_height),
        "door_height": _r(spec.door_height),
        "noise": {
            "depth_sigma": _r(spec.noise.depth_sigma),
            "yaw_sigma_deg": _r(math.degrees(spec.noise.yaw_sigma)),
            "translation_sigma": _r(spec.noise.translation_sigma),
        },
        "seed": spec.seed,
    }


def write_floor_spec(spec: FloorSpec, path: str | Path) -> None:
    Path(path).write_text(_dumps(floor_spec_to_dict(spec)))


def read_floor_spec(path: str | Path) -> FloorSpec:
    path = Path(path)
    try:
        data = json.loads(path.read_text())
    except FileNotFoundError:
        raise InputError(f"floor spec not found: {path}")
    except json.JSONDecodeError as e:
        raise InputError(f"floor spec {path} is not valid JSON: {e}")
    if not isinstance(data, dict):
        raise InputError(f"floor spec {path}: expected a JSON object")
    unknown = set(data) - _SPEC_KEYS
    if unknown:
        raise InputError(f"floor spec {path}: unknown field(s) {sorted(unknown)}")
    if "rooms" not in data:
        raise InputError(f"floor spec {path}: missing 'rooms'")
    noise_data = data.get("noise", {})
    bad = set(noise_data) - _NOISE_KEYS
    if bad:
        raise InputError(f"floor spec {path}: unknown noise field(s) {sorted(bad)}")
    try:
        rooms = tuple(
            RoomSpec(r["id"], float(r["x"]), float(r["y"]),
                     float(r["width"]), float(r["depth"]))
            for r in data["rooms"]
        )
        doors = tuple(
            DoorSpec(d["room"], int(d["wall"]), float(d["offset"]),
                     float(d.get("width", DEFAULT_DOOR_WIDTH)))
            for d in data.get("doors", [])
        )
        occluders = tuple(
            OccluderSpec(float(o["x"]), float(o["y"]), float(o["width"]),
                         float(o["depth"]), float(o["height"]))
            for o in data.get("occluders", [])
        )
        noise = NoiseSpec(
            depth_sigma=float(noise_data.get("depth_sigma", 0.0)),
            yaw_sigma=math.radians(float(noise_data.get("yaw_sigma_deg", 0.0))),
            translation_sigma=float(noise_data.get("translation_sigma", 0.0)),
        )
        return FloorSpec(
            rooms=rooms,
            doors=doors,
            occluders=occluders,
            camera_height=float(data.get("camera_height", 1.5)),
            wall_height=float(data.get("wall_height", 2.7)),
            door_height=float(data.get("door_height", 2.0)),
            noise=noise,
            seed=int(data.get("seed", 0)),
        )
    except (KeyError, TypeError, ValueError) as e:
        raise InputError(f"floor spec {path}: malformed field ({e})")
