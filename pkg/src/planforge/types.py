"""Core value types for the reconstruction pipeline.

Conventions used throughout the package:

* The session frame is gravity-aligned and right-handed with +Y up.  Poses
  map camera coordinates into this frame.
* Plan coordinates are (x, y) in meters, taken from the session (X, Z) pair.
  +y is the forward direction of an identity pose.
* Angles are radians internally; degrees appear only at CLI boundaries.
* Camera pixels follow image convention: u grows right, v grows down, and
  depth is the camera-frame Z coordinate (perpendicular, not ray length).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import IntEnum

import numpy as np

from .errors import GeometryError, InputError

TWO_PI = 2.0 * math.pi


def normalize_angle(a: float) -> float:
    """Wrap an angle to the half-open interval (-pi, pi]."""
    a = math.fmod(a, TWO_PI)
    if a <= -math.pi:
        a += TWO_PI
    elif a > math.pi:
        a -= TWO_PI
    return a


def rot2(theta: float) -> np.ndarray:
    """2x2 matrix applying a plan-frame rotation by ``theta``.

    Plan axes are the session (X, Z) pair, so a positive rotation about the
    session up-axis acts on plan points as [[c, s], [-s, c]].
    """
    c, s = math.cos(theta), math.sin(theta)
    return np.array([[c, s], [-s, c]], dtype=float)


class Label(IntEnum):
    """Per-pixel semantic class of an edge mask."""

    OTHER = 0
    WALL = 1
    EDGE = 2


# Raster byte values of the 8-bit mask format.
MASK_RASTER_VALUES = {0: Label.OTHER, 128: Label.WALL, 255: Label.EDGE}
MASK_RASTER_BYTES = {v: k for k, v in MASK_RASTER_VALUES.items()}


@dataclass(frozen=True)
class CameraIntrinsics:
    """Pinhole intrinsics shared by every capture of a dataset."""

    f: float
    cx: float
    cy: float
    width: int
    height: int

    def __post_init__(self) -> None:
        if not self.f > 0:
            raise InputError(f"focal length must be positive, got {self.f}")
        if not (self.width > 0 and self.height > 0):
            raise InputError("image dimensions must be positive")
        if not (0 <= self.cx < self.width and 0 <= self.cy < self.height):
            raise InputError("principal point must lie inside the image")


@dataclass(frozen=True)
class SceneScale:
    """Raw depth units per meter (raw = meters * s)."""

    s: float

    def __post_init__(self) -> None:
        if not self.s > 0:
            raise InputError(f"depth scale must be positive, got {self.s}")


@dataclass(frozen=True, eq=False)
class DepthMap:
    """16-bit depth raster; raw value 0 marks an invalid pixel."""

    values: np.ndarray  # (H, W) uint16

    def __post_init__(self) -> None:
        v = np.asarray(self.values)
        if v.ndim != 2 or v.size == 0:
            raise InputError("depth raster must be a non-empty 2-D array")
        if v.dtype != np.uint16:
            raise InputError(f"depth raster must be 16-bit, got {v.dtype}")
        object.__setattr__(self, "values", v)

    @property
    def height(self) -> int:
        return self.values.shape[0]

    @property
    def width(self) -> int:
        return self.values.shape[1]


@dataclass(frozen=True, eq=False)
class EdgeMask:
    """Per-pixel labels {OTHER, WALL, EDGE} decoded from an 8-bit raster."""

    labels: np.ndarray  # (H, W) uint8 of Label values

    def __post_init__(self) -> None:
        m = np.asarray(self.labels)
        if m.ndim != 2 or m.size == 0:
            raise InputError("edge mask must be a non-empty 2-D array")
        if m.dtype != np.uint8:
            m = m.astype(np.uint8)
        bad = ~np.isin(m, [int(l) for l in Label])
        if bad.any():
            raise InputError("edge mask contains labels outside {OTHER, WALL, EDGE}")
        object.__setattr__(self, "labels", m)

    @property
    def height(self) -> int:
        return self.labels.shape[0]

    @property
    def width(self) -> int:
        return self.labels.shape[1]


@dataclass(frozen=True)
class CapturePose:
    """Camera-to-session rigid pose: unit quaternion (qw, qx, qy, qz) + translation."""

    qw: float
    qx: float
    qy: float
    qz: float
    tx: float
    ty: float
    tz: float

    def __post_init__(self) -> None:
        n = math.sqrt(self.qw**2 + self.qx**2 + self.qy**2 + self.qz**2)
        if abs(n - 1.0) > 1e-9:
            raise InputError(f"non-unit quaternion (norm {n:.6f})")

    def rotation_matrix(self) -> np.ndarray:
        w, x, y, z = self.qw, self.qx, self.qy, self.qz
        return np.array(
            [
                [1 - 2 * (y * y + z * z), 2 * (x * y - w * z), 2 * (x * z + w * y)],
                [2 * (x * y + w * z), 1 - 2 * (x * x + z * z), 2 * (y * z - w * x)],
                [2 * (x * z - w * y), 2 * (y * z + w * x), 1 - 2 * (x * x + y * y)],
            ],
            dtype=float,
        )

    @property
    def translation(self) -> np.ndarray:
        return np.array([self.tx, self.ty, self.tz], dtype=float)

    def forward(self) -> np.ndarray:
        """Camera optical axis (+Z of the camera frame) in session coordinates."""
        return self.rotation_matrix() @ np.array([0.0, 0.0, 1.0])

    def apply(self, points: np.ndarray) -> np.ndarray:
        """Map (N, 3) camera-frame points into the session frame."""
        pts = np.asarray(points, dtype=float)
        return pts @ self.rotation_matrix().T + self.translation

    def compose(self, inner: "CapturePose") -> "CapturePose":
        """Pose equivalent to applying ``inner`` first, then ``self``."""
        w1, x1, y1, z1 = self.qw, self.qx, self.qy, self.qz
        w2, x2, y2, z2 = inner.qw, inner.qx, inner.qy, inner.qz
        q = (
            w1 * w2 - x1 * x2 - y1 * y2 - z1 * z2,
            w1 * x2 + x1 * w2 + y1 * z2 - z1 * y2,
            w1 * y2 - x1 * z2 + y1 * w2 + z1 * x2,
            w1 * z2 + x1 * y2 - y1 * x2 + z1 * w2,
        )
        n = math.sqrt(sum(c * c for c in q))
        q = tuple(c / n for c in q)
        t = self.rotation_matrix() @ inner.translation + self.translation
        return CapturePose(*q, t[0], t[1], t[2])

    @staticmethod
    def yaw_only(yaw: float, tx: float = 0.0, ty: float = 0.0, tz: float = 0.0) -> "CapturePose":
        """Pure rotation about the session up-axis plus translation."""
        h = 0.5 * yaw
        return CapturePose(math.cos(h), 0.0, math.sin(h), 0.0, tx, ty, tz)


@dataclass(frozen=True)
class PlanTransform:
    """2-D rigid transform placing capture-local plan points into the global plan."""

    yaw: float
    tx: float
    ty: float

    def __post_init__(self) -> None:
        object.__setattr__(self, "yaw", normalize_angle(float(self.yaw)))

    @property
    def translation(self) -> np.ndarray:
        return np.array([self.tx, self.ty], dtype=float)

    def matrix(self) -> np.ndarray:
        return rot2(self.yaw)

    def apply(self, points: np.ndarray) -> np.ndarray:
        pts = np.atleast_2d(np.asarray(points, dtype=float))
        out = pts @ self.matrix().T + self.translation
        return out if np.asarray(points).ndim > 1 else out[0]

    def apply_direction(self, d: np.ndarray) -> np.ndarray:
        return self.matrix() @ np.asarray(d, dtype=float)

    def inverse(self) -> "PlanTransform":
        t = -(rot2(-self.yaw) @ self.translation)
        return PlanTransform(-self.yaw, t[0], t[1])

    def compose(self, inner: "PlanTransform") -> "PlanTransform":
        """Transform equivalent to applying ``inner`` first, then ``self``."""
        t = self.matrix() @ inner.translation + self.translation
        return PlanTransform(self.yaw + inner.yaw, t[0], t[1])

    @staticmethod
    def identity() -> "PlanTransform":
        return PlanTransform(0.0, 0.0, 0.0)


@dataclass(frozen=True, eq=False)
class LabeledCloud:
    """Camera-frame 3-D points with per-point semantic labels."""

    points: np.ndarray  # (N, 3) float64, meters
    labels: np.ndarray  # (N,) uint8 of Label values
    capture_id: str = ""

    def __post_init__(self) -> None:
        pts = np.asarray(self.points, dtype=float).reshape(-1, 3)
        lab = np.asarray(self.labels, dtype=np.uint8).reshape(-1)
        if len(pts) != len(lab):
            raise InputError("cloud points and labels disagree in length")
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "labels", lab)

    def __len__(self) -> int:
        return len(self.points)

    def dump_xyz(self, path) -> None:
        """Write ASCII debug rows: x y z label."""
        with open(path, "w") as fh:
            for (x, y, z), l in zip(self.points, self.labels):
                fh.write(f"{x:.6f} {y:.6f} {z:.6f} {int(l)}\n")


@dataclass(frozen=True, eq=False)
class ClusterResult:
    """Three ordered cluster means; the middle one is the wedge apex."""

    means: np.ndarray  # (3, 2)
    assignments: np.ndarray  # (N,) int in {0, 1, 2}

    def __post_init__(self) -> None:
        m = np.asarray(self.means, dtype=float)
        if m.shape != (3, 2):
            raise GeometryError(f"expected 3 cluster means, got shape {m.shape}")
        a = np.asarray(self.assignments, dtype=int)
        if a.size and (a.min() < 0 or a.max() > 2):
            raise GeometryError("cluster assignments out of range")
        object.__setattr__(self, "means", m)
        object.__setattr__(self, "assignments", a)


@dataclass(frozen=True, eq=False)
class Wedge:
    """Two perpendicular wall segments meeting at a corner apex.

    The wedge is the polyline (apex - dir1*len1) -> apex -> (apex + dir2*len2):
    dir1 points along the first arm toward the apex, dir2 leaves the apex
    along the second arm.
    """

    apex: np.ndarray  # (2,)
    dir1: np.ndarray  # (2,) unit
    dir2: np.ndarray  # (2,) unit
    len1: float
    len2: float

    def __post_init__(self) -> None:
        apex = np.asarray(self.apex, dtype=float).reshape(2)
        d1 = np.asarray(self.dir1, dtype=float).reshape(2)
        d2 = np.asarray(self.dir2, dtype=float).reshape(2)
        for name, d in (("dir1", d1), ("dir2", d2)):
            n = float(np.hypot(*d))
            if abs(n - 1.0) > 1e-9:
                raise GeometryError(f"{name} is not a unit vector (norm {n:.3e})")
        if not (self.len1 > 0 and self.len2 > 0):
            raise GeometryError("wedge arm lengths must be positive")
        object.__setattr__(self, "apex", apex)
        object.__setattr__(self, "dir1", d1)
        object.__setattr__(self, "dir2", d2)

    @property
    def arm1_end(self) -> np.ndarray:
        return self.apex - self.dir1 * self.len1

    @property
    def arm2_end(self) -> np.ndarray:
        return self.apex + self.dir2 * self.len2


@dataclass(frozen=True, eq=False)
class RoomPolygon:
    """Simple polygon of a room, normalized CCW from its lexicographic-min vertex."""

    room_id: str
    vertices: np.ndarray  # (N, 2)

    def __post_init__(self) -> None:
        from .geometry import normalize_ring, polygon_is_simple

        v = np.asarray(self.vertices, dtype=float).reshape(-1, 2)
        if len(v) < 3:
            raise GeometryError(f"room {self.room_id!r}: polygon needs >= 3 vertices")
        v = normalize_ring(v)
        if not polygon_is_simple(v):
            raise GeometryError(f"room {self.room_id!r}: self-intersecting polygon")
        object.__setattr__(self, "vertices", v)

    def area(self) -> float:
        from .geometry import polygon_signed_area

        return abs(polygon_signed_area(self.vertices))

    def aspect_ratio(self) -> float:
        """Long side over short side of the axis-aligned bounding box (>= 1)."""
        ext = self.vertices.max(axis=0) - self.vertices.min(axis=0)
        lo, hi = sorted(ext)
        if lo <= 0:
            raise GeometryError(f"room {self.room_id!r}: degenerate extent")
        return hi / lo

    def walls(self) -> list[tuple[np.ndarray, np.ndarray]]:
        """Wall i runs from vertex i to vertex (i+1) mod N."""
        v = self.vertices
        return [(v[i], v[(i + 1) % len(v)]) for i in range(len(v))]


@dataclass(frozen=True, eq=False)
class BoundaryPolygon:
    """Convex outer boundary of the floor, CCW."""

    vertices: np.ndarray  # (M, 2)

    def __post_init__(self) -> None:
        from .geometry import is_convex_ccw, normalize_ring

        v = np.asarray(self.vertices, dtype=float).reshape(-1, 2)
        if len(v) < 3:
            raise GeometryError("boundary needs >= 3 vertices")
        v = normalize_ring(v)
        if not is_convex_ccw(v):
            raise GeometryError("boundary polygon must be convex")
        object.__setattr__(self, "vertices", v)


@dataclass(frozen=True)
class DoorBox:
    """Detection-style door bounding box in one capture, plus the pixel
    columns of the two corners of the wall carrying the door."""

    capture_id: str
    u_min: float
    v_min: float
    u_max: float
    v_max: float
    u_left: float
    u_right: float

    def __post_init__(self) -> None:
        if not self.u_min < self.u_max:
            raise InputError("door box: u_min must be < u_max")
        if not self.v_min < self.v_max:
            raise InputError("door box: v_min must be < v_max")
        if not self.u_left < self.u_right:
            raise InputError("door box: u_left must be < u_right")

    @property
    def centroid_u(self) -> float:
        return 0.5 * (self.u_min + self.u_max)


@dataclass(frozen=True)
class DoorPlacement:
    """Door position on a plan wall: fraction of the wall length from the
    wall's first vertex to the door center."""

    room_id: str
    wall_index: int
    ratio: float
    width: float
    clamped: bool = False

    def __post_init__(self) -> None:
        if not 0.0 <= self.ratio <= 1.0:
            raise GeometryError(f"door ratio {self.ratio} outside [0, 1]")
        if not self.width > 0:
            raise GeometryError("door width must be positive")


@dataclass(frozen=True, eq=False)
class FloorPlan:
    """Assembled, aligned rooms plus the outer boundary and door placements."""

    rooms: tuple[RoomPolygon, ...]
    boundary: BoundaryPolygon
    doors: tuple[DoorPlacement, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "rooms", tuple(self.rooms))
        object.__setattr__(self, "doors", tuple(self.doors))
        ids = [r.room_id for r in self.rooms]
        if len(set(ids)) != len(ids):
            raise GeometryError("duplicate room ids in floor plan")

    def room(self, room_id: str) -> RoomPolygon:
        for r in self.rooms:
            if r.room_id == room_id:
                return r
        raise KeyError(room_id)


@dataclass(frozen=True)
class MetricsReport:
    """Evaluation summary; fields are None when the metric was not computed."""

    area_mape: float | None = None
    aspect_mape: float | None = None
    corner_error: float | None = None
    ssim: float | None = None
    psnr: float | None = None
    pixel_error: float | None = None

    def as_dict(self) -> dict:
        return {
            "area_mape": self.area_mape,
            "aspect_mape": self.aspect_mape,
            "corner_error": self.corner_error,
            "ssim": self.ssim,
            "psnr": self.psnr,
            "pixel_error": self.pixel_error,
        }
