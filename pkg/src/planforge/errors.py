"""Exception hierarchy shared across the package.

Two failure families matter to callers: bad input data (manifests, rasters,
scene specs) and geometric failures inside the reconstruction pipeline.  The
CLI maps them to distinct exit codes.
"""


class PlanforgeError(Exception):
    """Base class for all package errors."""


class InputError(PlanforgeError):
    """Malformed or inconsistent input data (exit code 1 in the CLI)."""


class GeometryError(PlanforgeError):
    """Pipeline or geometry failure on well-formed input (exit code 2)."""
