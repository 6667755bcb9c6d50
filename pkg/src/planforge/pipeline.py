"""End-to-end reconstruction: dataset manifest in, floor plan out.

Per capture: decode rasters, back-project edge pixels, flatten to the local
plan frame, trim to the convex-hull band, cluster into two wall arms plus a
corner blob, fit a corner wedge, and move it into the shared session frame.
Per room: intersect the four wedges into an axis-snapped rectangle. Across
rooms: reconcile shared walls, wrap a convex boundary, pull near-boundary
vertices onto it, attach doors, and validate the assembled plan.

Capture work is independent, so it optionally fans out across a thread pool
(numpy releases the GIL for the heavy parts). Results are collected in
submission order and every random draw is seeded per capture, so the output
is identical at any thread count.
"""

from __future__ import annotations

import os
import re
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .assemble import (
    align_to_boundary,
    assemble_room,
    boundary_hull,
    build_floorplan,
    reconcile_shared_walls,
    snap_manhattan,
)
from .backproject import backproject_capture, project_to_plan, subsample
from .doors import place_door_from_box
from .errors import GeometryError, InputError
from .ingest import CaptureRecord, DatasetManifest, decode_depth, decode_edge_mask, reduce_pose
from .regularize import cluster3, extract_boundary, fit_wedge, fit_wedge_lsq, place_wedge
from .types import DoorPlacement, FloorPlan, PlanTransform, RoomPolygon, Wedge

THREADS_ENV = "PLANFORGE_THREADS"

WALL_FIT_MODES = ("lsq", "means")


@dataclass(frozen=True)
class ReconstructOptions:
    """Tuning knobs for :func:`reconstruct`.

    ``hull_band`` is the half-width of the hull shell kept before clustering.
    The wide default keeps the full wall cloud under measurement noise; tighten
    it for clean captures cluttered with interior points.
    """

    seed: int = 0
    snap_dist: float = 0.3
    snap_angle_deg: float = 5.0
    max_points: int = 50_000
    hull_band: float = 0.2
    wall_fit: str = "lsq"
    gap_tol: float = 0.3
    keep_intermediates: bool = False
    threads: int | None = None

    def __post_init__(self) -> None:
        if self.wall_fit not in WALL_FIT_MODES:
            raise InputError(
                f"wall_fit must be one of {WALL_FIT_MODES}, got {self.wall_fit!r}"
            )
        if self.snap_dist < 0:
            raise InputError("snap_dist must be >= 0")
        if self.snap_angle_deg <= 0:
            raise InputError("snap_angle_deg must be positive")
        if self.max_points <= 0:
            raise InputError("max_points must be positive")
        if self.hull_band <= 0:
            raise InputError("hull_band must be positive")
        if self.gap_tol < 0:
            raise InputError("gap_tol must be >= 0")


def _worker_count(options: ReconstructOptions, n_jobs: int) -> int:
    n = options.threads if options.threads else min(8, os.cpu_count() or 1)
    env = os.environ.get(THREADS_ENV)
    if env:
        try:
            n = min(n, int(env))
        except ValueError:
            raise InputError(f"{THREADS_ENV} must be an integer, got {env!r}")
    return max(1, min(n, n_jobs))


def _capture_seed(base_seed: int, room_idx: int, cap_idx: int) -> int:
    ss = np.random.SeedSequence([base_seed, room_idx, cap_idx])
    return int(ss.generate_state(1)[0])


def _safe_name(capture_id: str) -> str:
    return re.sub(r"[^A-Za-z0-9_.-]", "_", capture_id)


@dataclass
class _CaptureDebug:
    capture_id: str
    cloud_rows: int = 0
    wedge: Wedge | None = None
    file_stem: str = ""


def _corner_wedge(
    record: CaptureRecord,
    manifest: DatasetManifest,
    room_idx: int,
    cap_idx: int,
    options: ReconstructOptions,
    debug_dir: Path | None,
) -> tuple[Wedge, _CaptureDebug]:
    cap_id = record.capture_id
    try:
        depth = decode_depth(record.depth_path, manifest.intrinsics)
        mask = decode_edge_mask(record.edges_path, manifest.intrinsics)
    except (InputError, GeometryError) as e:
        raise type(e)(f"decode failed for capture {cap_id!r}: {e}") from e

    debug = _CaptureDebug(cap_id, file_stem=f"r{room_idx:02d}c{cap_idx:02d}_{_safe_name(cap_id)}")
    try:
        cloud = backproject_capture(depth, mask, manifest.intrinsics, manifest.scale, cap_id)
        if debug_dir is not None:
            cloud.dump_xyz(debug_dir / f"{debug.file_stem}_cloud.xyz")
        local = project_to_plan(cloud, PlanTransform.identity())
        local = subsample(local, options.max_points)
        shell = extract_boundary(local, band=options.hull_band)
        debug.cloud_rows = len(shell)
        clusters = cluster3(shell, _capture_seed(options.seed, room_idx, cap_idx))
        if options.wall_fit == "lsq":
            wedge = fit_wedge_lsq(shell, clusters)
        else:
            wedge = fit_wedge(clusters)
        placed = place_wedge(wedge, reduce_pose(record.pose))
    except (InputError, GeometryError) as e:
        raise type(e)(f"corner fit failed for capture {cap_id!r}: {e}") from e
    debug.wedge = placed
    return placed, debug


def _place_doors(
    manifest: DatasetManifest, rooms_by_id: dict[str, RoomPolygon]
) -> tuple[DoorPlacement, ...]:
    placements: list[DoorPlacement] = []
    for room_rec in sorted(manifest.rooms, key=lambda r: r.room_id):
        room = rooms_by_id[room_rec.room_id]
        for record in room_rec.captures:
            for box in record.doors:
                try:
                    placements.append(
                        place_door_from_box(
                            box, reduce_pose(record.pose), room, manifest.intrinsics
                        )
                    )
                except (InputError, GeometryError) as e:
                    raise type(e)(
                        f"door placement failed for capture {record.capture_id!r}: {e}"
                    ) from e
    return tuple(placements)


def _dump_wedges(debugs: list[_CaptureDebug], debug_dir: Path) -> None:
    import json

    rows = {}
    for d in debugs:
        if d.wedge is None:
            continue
        w = d.wedge
        rows[d.capture_id] = {
            "apex": [round(float(v), 6) for v in w.apex],
            "dir1": [round(float(v), 6) for v in w.dir1],
            "dir2": [round(float(v), 6) for v in w.dir2],
            "len1": round(float(w.len1), 6),
            "len2": round(float(w.len2), 6),
            "hull_points": d.cloud_rows,
        }
    text = json.dumps(rows, indent=2, sort_keys=True) + "\n"
    (debug_dir / "wedges.json").write_text(text)


def reconstruct(
    manifest: DatasetManifest,
    options: ReconstructOptions = ReconstructOptions(),
    debug_dir: str | Path | None = None,
) -> FloorPlan:
    """Reconstruct a full floor plan from a parsed dataset manifest."""
    if not manifest.rooms:
        raise InputError("manifest contains no rooms")
    out_dir: Path | None = None
    if options.keep_intermediates and debug_dir is not None:
        out_dir = Path(debug_dir)
        out_dir.mkdir(parents=True, exist_ok=True)

    room_records = sorted(manifest.rooms, key=lambda r: r.room_id)
    jobs: list[tuple[CaptureRecord, int, int]] = []
    for room_idx, room_rec in enumerate(room_records):
        if len(room_rec.captures) < 4:
            raise InputError(
                f"room {room_rec.room_id!r}: expected at least 4 corner captures,"
                f" got {len(room_rec.captures)}"
            )
        for cap_idx, record in enumerate(room_rec.captures[:4]):
            jobs.append((record, room_idx, cap_idx))

    workers = _worker_count(options, len(jobs))
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            futures = [
                pool.submit(_corner_wedge, rec, manifest, ri, ci, options, out_dir)
                for rec, ri, ci in jobs
            ]
            results = [f.result() for f in futures]
    else:
        results = [
            _corner_wedge(rec, manifest, ri, ci, options, out_dir)
            for rec, ri, ci in jobs
        ]

    wedges_by_room: dict[str, list[Wedge]] = {r.room_id: [] for r in room_records}
    debugs: list[_CaptureDebug] = []
    for (wedge, debug), (_, room_idx, _) in zip(results, jobs):
        wedges_by_room[room_records[room_idx].room_id].append(wedge)
        debugs.append(debug)

    snapped: list[RoomPolygon] = []
    for room_rec in room_records:
        room = assemble_room(wedges_by_room[room_rec.room_id], room_rec.room_id)
        snapped.append(snap_manhattan(room, angle_tol_deg=options.snap_angle_deg))

    reconciled = reconcile_shared_walls(snapped, gap_tol=options.gap_tol)
    rough_boundary = boundary_hull(reconciled)
    aligned = [
        align_to_boundary(r, rough_boundary, options.snap_dist, options.snap_angle_deg)
        for r in reconciled
    ]
    # Alignment re-snaps walls to the axis grid, which can nudge a corner a
    # hair off a slanted hull edge, so the reported boundary is rebuilt from
    # the final rooms and contains every vertex by construction.
    boundary = boundary_hull(aligned)
    rooms_by_id = {r.room_id: r for r in aligned}
    doors = _place_doors(manifest, rooms_by_id)

    if out_dir is not None:
        _dump_wedges(debugs, out_dir)

    return build_floorplan(aligned, boundary, doors)
