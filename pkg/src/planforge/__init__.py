"""planforge: indoor floor plans from per-corner depth and edge captures.

Reconstructs axis-aligned room polygons, a convex outer boundary, and door
placements from small sets of posed depth images with wall-edge masks, and
ships a synthetic scene generator plus evaluation metrics for end-to-end
testing.
"""

from .assemble import (
    align_to_boundary,
    assemble_room,
    boundary_hull,
    build_floorplan,
    is_manhattan,
    point_in_boundary,
    point_in_ring,
    reconcile_shared_walls,
    snap_manhattan,
)
from .backproject import (
    backproject_capture,
    backproject_pixel,
    forward_project,
    project_to_plan,
    subsample,
)
from .doors import (
    DEFAULT_DOOR_WIDTH,
    associate_wall,
    door_ratio,
    door_span,
    place_door,
    place_door_from_box,
)
from .errors import GeometryError, InputError, PlanforgeError
from .ingest import (
    CaptureRecord,
    DatasetManifest,
    RoomRecord,
    decode_depth,
    decode_edge_mask,
    emit_manifest,
    parse_manifest,
    reduce_pose,
)
from .metrics import corner_error, evaluate_plan, mape, pixel_error, psnr, ssim
from .pipeline import ReconstructOptions, reconstruct
from .planio import (
    read_floor_spec,
    read_plan,
    write_floor_spec,
    write_metrics,
    write_plan,
)
from .regularize import cluster3, extract_boundary, fit_wedge, fit_wedge_lsq, place_wedge
from .render_svg import render_svg, write_svg
from .synth import (
    DoorSpec,
    FloorSpec,
    NoiseSpec,
    OccluderSpec,
    RoomSpec,
    generate,
    ground_truth_report,
    spec_ground_truth,
)
from .types import (
    BoundaryPolygon,
    CameraIntrinsics,
    CapturePose,
    ClusterResult,
    DepthMap,
    DoorBox,
    DoorPlacement,
    EdgeMask,
    FloorPlan,
    Label,
    LabeledCloud,
    MetricsReport,
    PlanTransform,
    RoomPolygon,
    SceneScale,
    Wedge,
)

__version__ = "0.1.0"

__all__ = [
    "align_to_boundary",
    "assemble_room",
    "associate_wall",
    "backproject_capture",
    "backproject_pixel",
    "boundary_hull",
    "BoundaryPolygon",
    "build_floorplan",
    "CameraIntrinsics",
    "CaptureRecord",
    "CapturePose",
    "cluster3",
    "ClusterResult",
    "corner_error",
    "DatasetManifest",
    "decode_depth",
    "decode_edge_mask",
    "DEFAULT_DOOR_WIDTH",
    "DepthMap",
    "DoorBox",
    "DoorPlacement",
    "DoorSpec",
    "door_ratio",
    "door_span",
    "EdgeMask",
    "emit_manifest",
    "evaluate_plan",
    "extract_boundary",
    "fit_wedge",
    "fit_wedge_lsq",
    "FloorPlan",
    "FloorSpec",
    "forward_project",
    "generate",
    "ground_truth_report",
    "GeometryError",
    "InputError",
    "is_manhattan",
    "Label",
    "LabeledCloud",
    "mape",
    "MetricsReport",
    "NoiseSpec",
    "OccluderSpec",
    "parse_manifest",
    "pixel_error",
    "place_door",
    "place_door_from_box",
    "place_wedge",
    "PlanforgeError",
    "PlanTransform",
    "point_in_boundary",
    "point_in_ring",
    "project_to_plan",
    "psnr",
    "read_floor_spec",
    "read_plan",
    "reconcile_shared_walls",
    "reconstruct",
    "ReconstructOptions",
    "reduce_pose",
    "render_svg",
    "RoomPolygon",
    "RoomRecord",
    "RoomSpec",
    "SceneScale",
    "snap_manhattan",
    "spec_ground_truth",
    "ssim",
    "subsample",
    "Wedge",
    "write_floor_spec",
    "write_metrics",
    "write_plan",
    "write_svg",
]
