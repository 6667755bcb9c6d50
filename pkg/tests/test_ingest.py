import json
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from PIL import Image

from planforge import (
    CapturePose,
    decode_depth,
    decode_edge_mask,
    emit_manifest,
    parse_manifest,
    reduce_pose,
)
from planforge.errors import InputError
from planforge.types import Label


def write_rasters(dirpath, width=8, height=6, depth_value=1000):
    depth = np.full((height, width), depth_value, dtype=np.uint16)
    mask = np.full((height, width), 128, dtype=np.uint8)
    Image.fromarray(depth).save(dirpath / "d.png")
    Image.fromarray(mask, mode="L").save(dirpath / "e.png")


def minimal_manifest_dict(width=8, height=6):
    return {
        "version": 1,
        "intrinsics": {"f": 4.0, "cx": 4.0, "cy": 3.0, "width": width, "height": height},
        "scale_s": 1000.0,
        "rooms": [
            {
                "id": "a",
                "captures": [
                    {
                        "depth": "d.png",
                        "edges": "e.png",
                        "pose": {"qw": 1.0, "qx": 0.0, "qy": 0.0, "qz": 0.0,
                                 "tx": 0.0, "ty": 1.5, "tz": 0.0},
                        "doors": [],
                    }
                ],
            }
        ],
    }


def test_parse_minimal_manifest(tmp_path):
    write_rasters(tmp_path)
    (tmp_path / "m.json").write_text(json.dumps(minimal_manifest_dict()))
    m = parse_manifest(tmp_path / "m.json")
    assert len(m.rooms) == 1
    assert m.rooms[0].room_id == "a"
    assert len(m.rooms[0].captures) == 1
    assert m.rooms[0].captures[0].capture_id == "a:0"


def test_parse_rejects_non_unit_quaternion(tmp_path):
    write_rasters(tmp_path)
    doc = minimal_manifest_dict()
    doc["rooms"][0]["captures"][0]["pose"]["qw"] = 0.8
    (tmp_path / "m.json").write_text(json.dumps(doc))
    with pytest.raises(InputError, match="non-unit quaternion"):
        parse_manifest(tmp_path / "m.json")


def test_parse_rejects_missing_raster(tmp_path):
    write_rasters(tmp_path)
    doc = minimal_manifest_dict()
    doc["rooms"][0]["captures"][0]["depth"] = "nope.png"
    (tmp_path / "m.json").write_text(json.dumps(doc))
    with pytest.raises(InputError, match="nope.png"):
        parse_manifest(tmp_path / "m.json")


def test_parse_rejects_unknown_field(tmp_path):
    write_rasters(tmp_path)
    doc = minimal_manifest_dict()
    doc["rooms"][0]["captures"][0]["wall"] = 2
    (tmp_path / "m.json").write_text(json.dumps(doc))
    with pytest.raises(InputError, match="unknown field"):
        parse_manifest(tmp_path / "m.json")


def test_emit_parse_round_trip(noiseless_dataset):
    original = parse_manifest(noiseless_dataset["dir"] / "manifest.json")
    out = noiseless_dataset["dir"] / "roundtrip.json"
    emit_manifest(original, out)
    again = parse_manifest(out)
    assert again.intrinsics == original.intrinsics
    assert again.scale == original.scale
    assert [r.room_id for r in again.rooms] == [r.room_id for r in original.rooms]
    for ra, rb in zip(again.rooms, original.rooms):
        for ca, cb in zip(ra.captures, rb.captures):
            assert ca.capture_id == cb.capture_id
            assert ca.pose == cb.pose
            assert ca.doors == cb.doors
            assert ca.depth_path.name == cb.depth_path.name


def test_decode_depth_uniform(tmp_path):
    depth = np.full((4, 4), 1000, dtype=np.uint16)
    Image.fromarray(depth).save(tmp_path / "d.png")
    dm = decode_depth(tmp_path / "d.png")
    assert dm.values.shape == (4, 4)
    assert dm.values.dtype == np.uint16
    assert np.all(dm.values == 1000)


def test_decode_depth_rejects_8bit(tmp_path):
    Image.fromarray(np.zeros((4, 4), dtype=np.uint8), mode="L").save(tmp_path / "d8.png")
    with pytest.raises(InputError, match="unsupported bit depth"):
        decode_depth(tmp_path / "d8.png")


def test_decode_depth_rejects_dimension_mismatch(tmp_path, noiseless_manifest):
    depth = np.full((4, 4), 7, dtype=np.uint16)
    Image.fromarray(depth).save(tmp_path / "d.png")
    with pytest.raises(InputError, match="intrinsics expect"):
        decode_depth(tmp_path / "d.png", noiseless_manifest.intrinsics)


def test_decode_edge_mask_all_zero(tmp_path):
    Image.fromarray(np.zeros((4, 4), dtype=np.uint8), mode="L").save(tmp_path / "e.png")
    em = decode_edge_mask(tmp_path / "e.png")
    assert np.all(em.labels == Label.OTHER)


def test_decode_edge_mask_rejects_bad_value(tmp_path):
    arr = np.zeros((4, 4), dtype=np.uint8)
    arr[1, 2] = 17
    Image.fromarray(arr, mode="L").save(tmp_path / "e.png")
    with pytest.raises(InputError, match="unexpected pixel value"):
        decode_edge_mask(tmp_path / "e.png")


def test_decode_depth_preserves_raw_values(tmp_path):
    rng = np.random.default_rng(5)
    arr = rng.integers(0, 65536, size=(9, 7), dtype=np.uint16)
    Image.fromarray(arr).save(tmp_path / "d.png")
    assert np.array_equal(decode_depth(tmp_path / "d.png").values, arr)


def test_reduce_pose_identity():
    xform = reduce_pose(CapturePose(1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0))
    assert xform.yaw == 0.0
    assert xform.tx == 0.0 and xform.ty == 0.0


def test_reduce_pose_quarter_turn():
    pose = CapturePose.yaw_only(math.pi / 2, tx=1.0, ty=0.0, tz=2.0)
    xform = reduce_pose(pose)
    assert xform.yaw == pytest.approx(math.pi / 2)
    assert (xform.tx, xform.ty) == (1.0, 2.0)


def test_reduce_pose_rejects_steep_pitch():
    # pitch 85 degrees up: rotate forward axis about the x axis
    half = 0.5 * math.radians(-85.0)
    pose = CapturePose(math.cos(half), math.sin(half), 0.0, 0.0, 0.0, 0.0, 0.0)
    with pytest.raises(InputError, match="pose unusable"):
        reduce_pose(pose)


def random_pose(rng):
    q = rng.normal(size=4)
    q /= np.linalg.norm(q)
    t = rng.uniform(-5, 5, size=3)
    return CapturePose(*q, *t)


def test_reduce_pose_compose_property():
    """On yaw-only poses the reduction is a homomorphism: reducing a
    composition equals composing the reductions.  (A camera pose with pitch
    or roll breaks this, because projecting the forward axis onto the ground
    plane does not commute with 3-D rotation.)
    """
    rng = np.random.default_rng(11)
    for _ in range(100):
        p = CapturePose.yaw_only(rng.uniform(-math.pi, math.pi),
                                 *rng.uniform(-5, 5, size=3))
        r = CapturePose.yaw_only(rng.uniform(-math.pi, math.pi),
                                 *rng.uniform(-2, 2, size=3))
        lhs = reduce_pose(p.compose(r))
        rhs = reduce_pose(p).compose(reduce_pose(r))
        assert lhs.yaw == pytest.approx(rhs.yaw, abs=1e-9)
        assert lhs.tx == pytest.approx(rhs.tx, abs=1e-9)
        assert lhs.ty == pytest.approx(rhs.ty, abs=1e-9)


def test_reduce_pose_roll_invariant():
    """Rolling the camera about its optical axis must not change the reduction."""
    rng = np.random.default_rng(13)
    for _ in range(50):
        yaw = rng.uniform(-math.pi, math.pi)
        t = rng.uniform(-3, 3, size=3)
        base = CapturePose.yaw_only(yaw, *t)
        half = 0.5 * rng.uniform(-math.pi, math.pi)
        roll = CapturePose(math.cos(half), 0.0, 0.0, math.sin(half), 0.0, 0.0, 0.0)
        rolled = base.compose(roll)
        a, b = reduce_pose(base), reduce_pose(rolled)
        assert a.yaw == pytest.approx(b.yaw, abs=1e-9)
        assert (a.tx, a.ty) == pytest.approx((b.tx, b.ty), abs=1e-12)
