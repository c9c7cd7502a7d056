"""3D positions, distances and angle-off-boresight math.

Right-handed metric frame: the ground station sits at the origin, the x-axis
points toward the victim receiver, z points up.  All coordinates are in
meters.  Everything here is a pure function on immutable values, so it is
safe to call from concurrent sweeps without coordination.
"""

import math
from dataclasses import dataclass

_UNIT_NORM_TOL = 1e-12


@dataclass(frozen=True)
class Position:
    """A point in the experiment frame (meters)."""

    x: float
    y: float
    z: float

    def __post_init__(self):
        for name in ("x", "y", "z"):
            v = getattr(self, name)
            if not math.isfinite(v):
                raise ValueError(f"Position.{name} must be finite, got {v!r}")

    def as_tuple(self) -> tuple[float, float, float]:
        return (self.x, self.y, self.z)


@dataclass(frozen=True)
class Direction:
    """A unit 3-vector (Euclidean norm 1 within 1e-12)."""

    x: float
    y: float
    z: float

    def __post_init__(self):
        n = math.sqrt(self.x * self.x + self.y * self.y + self.z * self.z)
        if abs(n - 1.0) > _UNIT_NORM_TOL:
            raise ValueError(f"Direction must be unit length, norm={n!r}")

    @classmethod
    def from_vector(cls, x: float, y: float, z: float) -> "Direction":
        """Normalize an arbitrary non-zero vector into a Direction."""
        n = math.sqrt(x * x + y * y + z * z)
        if n == 0.0 or not math.isfinite(n):
            raise ValueError("cannot normalize a zero or non-finite vector")
        return cls(x / n, y / n, z / n)

    @classmethod
    def between(cls, origin: Position, target: Position) -> "Direction":
        """Unit vector from `origin` toward `target`."""
        return cls.from_vector(target.x - origin.x, target.y - origin.y, target.z - origin.z)

    def as_tuple(self) -> tuple[float, float, float]:
        return (self.x, self.y, self.z)


def distance(a: Position, b: Position) -> float:
    """Euclidean distance between two positions in meters."""
    return math.dist(a.as_tuple(), b.as_tuple())


def boresight_offset(node_pos: Position, pointing_target: Position, target_pos: Position) -> float:
    """Angle in degrees between a node's boresight and the ray to a target.

    The boresight is the ray node_pos -> pointing_target; the result is the
    angle of node_pos -> target_pos off that ray, in [0, 180].  Symmetric in
    (pointing_target, target_pos) and invariant under rigid transforms of all
    three points.

    Raises ValueError when either ray is degenerate (coincident points).
    """
    v1 = (pointing_target.x - node_pos.x, pointing_target.y - node_pos.y, pointing_target.z - node_pos.z)
    v2 = (target_pos.x - node_pos.x, target_pos.y - node_pos.y, target_pos.z - node_pos.z)
    n1 = math.sqrt(v1[0] ** 2 + v1[1] ** 2 + v1[2] ** 2)
    n2 = math.sqrt(v2[0] ** 2 + v2[1] ** 2 + v2[2] ** 2)
    if n1 == 0.0:
        raise ValueError("pointing_target coincides with node_pos; boresight undefined")
    if n2 == 0.0:
        raise ValueError("target_pos coincides with node_pos; target ray undefined")
    cosang = (v1[0] * v2[0] + v1[1] * v2[1] + v1[2] * v2[2]) / (n1 * n2)
    # guard acos against rounding just outside [-1, 1]
    cosang = min(1.0, max(-1.0, cosang))
    return math.degrees(math.acos(cosang))


def elevation_angle(origin: Position, target: Position) -> float:
    """Elevation in degrees of the ray origin -> target above the horizontal plane."""
    d = distance(origin, target)
    if d == 0.0:
        raise ValueError("elevation undefined for coincident points")
    s = (target.z - origin.z) / d
    s = min(1.0, max(-1.0, s))
    return math.degrees(math.asin(s))
