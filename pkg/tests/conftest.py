import math

import hypothesis
import pytest

from planforge import DoorSpec, FloorSpec, NoiseSpec, RoomSpec, generate, parse_manifest

hypothesis.settings.register_profile(
    "ci", deadline=None, max_examples=100, derandomize=True
)
hypothesis.settings.load_profile("ci")


def two_room_spec(seed: int = 0, noise: NoiseSpec = NoiseSpec()) -> FloorSpec:
    """4x3 and 3x3 adjacent rooms sharing the x=4 wall, one door on it."""
    return FloorSpec(
        rooms=(
            RoomSpec("a", 0.0, 0.0, 4.0, 3.0),
            RoomSpec("b", 4.0, 0.0, 3.0, 3.0),
        ),
        doors=(DoorSpec("a", 1, 0.5, 0.9),),
        noise=noise,
        seed=seed,
    )


NOISY = NoiseSpec(depth_sigma=0.02, yaw_sigma=math.radians(1.0), translation_sigma=0.02)

# one line per acceptance check, echoed after the run by the summary hook
ACCEPTANCE_RESULTS: list[str] = []


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if ACCEPTANCE_RESULTS:
        terminalreporter.section("acceptance")
        for line in ACCEPTANCE_RESULTS:
            terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def noiseless_dataset(tmp_path_factory):
    """Rendered noiseless two-room dataset, shared across test modules."""
    out = tmp_path_factory.mktemp("noiseless") / "ds"
    manifest, truth = generate(two_room_spec(), out)
    return {"dir": out, "manifest": manifest, "truth": truth}


@pytest.fixture(scope="session")
def noiseless_manifest(noiseless_dataset):
    return parse_manifest(noiseless_dataset["dir"] / "manifest.json")
