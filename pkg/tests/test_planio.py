import json
import math

import numpy as np
import pytest

from planforge import (
    boundary_hull,
    build_floorplan,
    read_floor_spec,
    read_plan,
    write_floor_spec,
    write_plan,
)
from planforge.errors import InputError
from planforge.planio import write_metrics
from planforge.synth import DoorSpec, FloorSpec, NoiseSpec, OccluderSpec, RoomSpec
from planforge.types import DoorPlacement, MetricsReport, RoomPolygon


def rect_room(room_id, x0, y0, x1, y1):
    return RoomPolygon(room_id, np.array([(x0, y0), (x1, y0), (x1, y1), (x0, y1)]))


def sample_plan():
    rooms = [rect_room("a", 0, 0, 4, 3), rect_room("b", 4, 0, 7, 3)]
    doors = [DoorPlacement("a", 1, 0.5, 0.9, False)]
    return build_floorplan(rooms, boundary_hull(rooms), doors)


class TestPlanFiles:
    def test_round_trip(self, tmp_path):
        path = tmp_path / "plan.json"
        write_plan(sample_plan(), path)
        loaded = read_plan(path)
        assert [r.room_id for r in loaded.rooms] == ["a", "b"]
        assert loaded.rooms[0].area() == pytest.approx(12.0)
        assert len(loaded.doors) == 1
        assert loaded.doors[0].ratio == pytest.approx(0.5)
        assert np.allclose(
            loaded.boundary.vertices, sample_plan().boundary.vertices
        )

    def test_file_is_deterministic(self, tmp_path):
        a, b = tmp_path / "a.json", tmp_path / "b.json"
        write_plan(sample_plan(), a)
        write_plan(sample_plan(), b)
        assert a.read_bytes() == b.read_bytes()

    def test_file_shape(self, tmp_path):
        path = tmp_path / "plan.json"
        write_plan(sample_plan(), path)
        text = path.read_text()
        assert text.endswith("\n")
        data = json.loads(text)
        assert set(data) == {"rooms", "boundary", "doors"}
        assert [r["id"] for r in data["rooms"]] == ["a", "b"]
        assert data["rooms"][0]["area"] == 12.0
        assert data["doors"][0]["room"] == "a"

    def test_negative_zero_never_written(self, tmp_path):
        rooms = [rect_room("a", -1e-12, 0, 4, 3)]
        plan = build_floorplan(rooms, boundary_hull(rooms))
        path = tmp_path / "plan.json"
        write_plan(plan, path)
        assert "-0.0" not in path.read_text()

    def test_coordinates_round_to_micrometers(self, tmp_path):
        rooms = [rect_room("a", 0.1234567891, 0, 4, 3)]
        plan = build_floorplan(rooms, boundary_hull(rooms))
        path = tmp_path / "plan.json"
        write_plan(plan, path)
        assert "0.123457" in path.read_text()
        assert "0.1234567" not in path.read_text()

    def test_missing_file_rejected(self, tmp_path):
        with pytest.raises(InputError, match="plan"):
            read_plan(tmp_path / "nope.json")

    def test_malformed_json_rejected(self, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text("{not json")
        with pytest.raises(InputError):
            read_plan(path)

    def test_missing_rooms_key_rejected(self, tmp_path):
        path = tmp_path / "empty.json"
        path.write_text("{}")
        with pytest.raises(InputError):
            read_plan(path)


class TestMetricsFiles:
    def test_text_and_file_agree(self, tmp_path):
        report = MetricsReport(area_mape=1.5, aspect_mape=0.5, corner_error=0.1)
        path = tmp_path / "metrics.json"
        text = write_metrics(report, path)
        assert path.read_text() == text
        data = json.loads(text)
        assert data["area_mape"] == 1.5
        assert data["ssim"] is None

    def test_no_path_returns_text_only(self):
        text = write_metrics(MetricsReport(area_mape=0.0))
        assert json.loads(text)["area_mape"] == 0.0


class TestFloorSpecFiles:
    SPEC = FloorSpec(
        rooms=(RoomSpec("a", 0, 0, 4, 3), RoomSpec("b", 4, 0, 3, 3)),
        doors=(DoorSpec("a", 1, 0.5, 0.9),),
        occluders=(OccluderSpec(0.5, 0.4, 0.8, 0.5, 1.8),),
        noise=NoiseSpec(
            depth_sigma=0.02,
            yaw_sigma=math.radians(1.0),
            translation_sigma=0.02,
        ),
        seed=7,
    )

    def test_round_trip(self, tmp_path):
        path = tmp_path / "spec.json"
        write_floor_spec(self.SPEC, path)
        loaded = read_floor_spec(path)
        assert loaded.rooms == self.SPEC.rooms
        assert loaded.doors == self.SPEC.doors
        assert loaded.occluders == self.SPEC.occluders
        assert loaded.seed == 7
        assert loaded.noise.yaw_sigma == pytest.approx(math.radians(1.0))

    def test_yaw_sigma_stored_in_degrees(self, tmp_path):
        path = tmp_path / "spec.json"
        write_floor_spec(self.SPEC, path)
        data = json.loads(path.read_text())
        assert data["noise"]["yaw_sigma_deg"] == pytest.approx(1.0)

    def test_unknown_top_level_key_rejected(self, tmp_path):
        path = tmp_path / "spec.json"
        write_floor_spec(self.SPEC, path)
        data = json.loads(path.read_text())
        data["walls"] = []
        path.write_text(json.dumps(data))
        with pytest.raises(InputError, match="unknown"):
            read_floor_spec(path)

    def test_bundled_demo_spec_loads(self):
        from pathlib import Path

        spec = read_floor_spec(
            Path(__file__).resolve().parents[1] / "scripts" / "two_room_spec.json"
        )
        assert {r.room_id for r in spec.rooms} == {"a", "b"}
        assert spec.noise == NoiseSpec()
