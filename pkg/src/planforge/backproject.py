"""Pinhole back-projection of depth pixels and projection into the plan.

Camera frame: X right, Y along image-v, Z forward (perpendicular depth).
A pixel (u, v) with raw depth d maps to

    Z = d / s,   X = (u - cx) * Z / f,   Y = (v - cy) * Z / f

with s the raw-units-per-meter scale.  Raw value 0 is the invalid sentinel
and is skipped wherever whole rasters are processed.
"""

from __future__ import annotations

import numpy as np

from .errors import InputError
from .types import (
    CameraIntrinsics,
    DepthMap,
    EdgeMask,
    Label,
    LabeledCloud,
    PlanTransform,
    SceneScale,
)


def backproject_pixel(
    u: float,
    v: float,
    depth_raw: int,
    intrinsics: CameraIntrinsics,
    scale: SceneScale,
) -> np.ndarray:
    """Back-project one pixel to a camera-frame 3-D point in meters."""
    if not (0 <= u < intrinsics.width and 0 <= v < intrinsics.height):
        raise InputError(f"pixel ({u}, {v}) outside the image")
    if depth_raw <= 0:
        raise InputError("invalid depth (raw 0) cannot be back-projected")
    z = depth_raw / scale.s
    x = (u - intrinsics.cx) * z / intrinsics.f
    y = (v - intrinsics.cy) * z / intrinsics.f
    return np.array([x, y, z], dtype=float)


def forward_project(
    point: np.ndarray, intrinsics: CameraIntrinsics
) -> tuple[float, float]:
    """Project a camera-frame point back to pixel coordinates (inverse map)."""
    x, y, z = float(point[0]), float(point[1]), float(point[2])
    if z <= 0:
        raise InputError("cannot project a point at or behind the camera plane")
    return intrinsics.cx + intrinsics.f * x / z, intrinsics.cy + intrinsics.f * y / z


def backproject_capture(
    depth: DepthMap,
    mask: EdgeMask,
    intrinsics: CameraIntrinsics,
    scale: SceneScale,
    capture_id: str = "",
) -> LabeledCloud:
    """Back-project every valid pixel of a capture, carrying mask labels."""
    if depth.values.shape != mask.labels.shape:
        raise InputError(
            f"capture {capture_id or '?'}: depth {depth.values.shape} and "
            f"mask {mask.labels.shape} dimensions differ"
        )
    if depth.values.shape != (intrinsics.height, intrinsics.width):
        raise InputError(
            f"capture {capture_id or '?'}: raster shape {depth.values.shape} does "
            f"not match intrinsics {intrinsics.width}x{intrinsics.height}"
        )
    vv, uu = np.nonzero(depth.values)
    z = depth.values[vv, uu].astype(float) / scale.s
    x = (uu - intrinsics.cx) * z / intrinsics.f
    y = (vv - intrinsics.cy) * z / intrinsics.f
    points = np.column_stack([x, y, z])
    labels = mask.labels[vv, uu]
    return LabeledCloud(points, labels, capture_id)


def project_to_plan(
    cloud: LabeledCloud,
    xform: PlanTransform,
    keep: tuple[Label, ...] = (Label.EDGE,),
) -> np.ndarray:
    """Drop the vertical axis and place kept points into the plan frame.

    Only points whose label is in ``keep`` survive (wall-edge points by
    default; they are the ones that carry layout information).
    """
    sel = np.isin(cloud.labels, [int(l) for l in keep])
    pts3 = cloud.points[sel]
    plan = pts3[:, (0, 2)]
    if len(plan) == 0:
        return plan.reshape(0, 2)
    return plan @ xform.matrix().T + xform.translation


def subsample(points: np.ndarray, max_points: int) -> np.ndarray:
    """Decimate to at most ``max_points`` with a uniform stride (deterministic)."""
    pts = np.asarray(points)
    if max_points <= 0:
        raise InputError("max_points must be positive")
    if len(pts) <= max_points:
        return pts
    stride = int(np.ceil(len(pts) / max_points))
    return pts[::stride]
