"""The adaptive display law: road bending, scene motion, frame assembly.

The road bends by displacing every control point of the virtual
centerline laterally by x = g(a) * y², where y is the forward distance
from the camera and a is the yaw rate. The coefficient

    g(a) = sign(a) * k * sigmoid(z(|a|)),   g(0) = 0

saturates through a logistic curve so that sub-threshold yaw (below
a_min, imperceptible to a passenger) and sensor-spike-range yaw (above
a_max) both produce nearly flat response. z is the affine map sending
|a| = a_min to -5 and |a| = a_max to +5:

    z(a) = (10*|a| - 5*(a_max + a_min)) / (a_max - a_min)

Note: an alternative reading of z that divides only the second term
(z = 10*|a| - 5*(a_max+a_min)/(a_max-a_min)) does not map the
[a_min, a_max] band onto (-5, 5); it is kept behind corrected=False
for comparison only.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

from .kinematics import MotionState

CAMERA_MODES = ("first_person", "third_person")

# Default centerline sampling: 0..100 m every 5 m. Past 100 m the
# quadratic displacement at g near k exceeds any sensible viewport.
DEFAULT_BASE_POINTS: tuple[float, ...] = tuple(float(y) for y in range(0, 101, 5))


@dataclass(frozen=True)
class BendParams:
    """Display-law constants: k=0.3, a_min=2.6 °/s, a_max=10 °/s defaults."""

    k: float = 0.3
    a_min: float = 2.6
    a_max: float = 10.0
    brake_threshold: float = -0.5  # m/s²; a_long below this lights the brake lamp
    camera_mode: str = "third_person"

    def __post_init__(self) -> None:
        if not 0 < self.a_min < self.a_max:
            raise ValueError(f"need 0 < a_min < a_max, got a_min={self.a_min}, a_max={self.a_max}")
        if not self.k > 0:
            raise ValueError(f"k must be positive, got {self.k}")
        if not self.brake_threshold < 0:
            raise ValueError(f"brake_threshold must be negative, got {self.brake_threshold}")
        if self.camera_mode not in CAMERA_MODES:
            raise ValueError(f"camera_mode must be one of {CAMERA_MODES}, got {self.camera_mode!r}")


@dataclass(frozen=True)
class RoadControlPoint:
    """Centerline sample: y meters ahead of the camera, x meters lateral."""

    y: float
    x: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.y) and self.y >= 0):
            raise ValueError(f"y must be finite and >= 0, got {self.y}")


@dataclass(frozen=True)
class FrameGeometry:
    """Complete display state for one tick."""

    t: float
    scene_speed: float
    scene_accel: float
    bend_g: float
    control_points: tuple[RoadControlPoint, ...]
    prompt_on: bool
    brake_light: bool
    camera_mode: str

    def __post_init__(self) -> None:
        ys = [p.y for p in self.control_points]
        if any(b <= a for a, b in zip(ys, ys[1:])):
            raise ValueError("control_points must be strictly increasing in y")


_SIGMOID_CEIL = 1.0 - 2.0**-53  # largest double below 1


def _sigmoid(z: float) -> float:
    # For z beyond ~36.7 the quotient would round to exactly 1.0 even
    # though sigma(z) < 1 always; cap it one ulp below so the |g| < k
    # bound stays strict for any finite yaw rate.
    if z >= 0:
        return min(1.0 / (1.0 + math.exp(-z)), _SIGMOID_CEIL)
    e = math.exp(z)
    return e / (1.0 + e)


def z_norm(a_abs: float, params: BendParams, *, corrected: bool = True) -> float:
    """Map |a| affinely so a_min -> -5 and a_max -> +5."""
    if corrected:
        return (10.0 * a_abs - 5.0 * (params.a_max + params.a_min)) / (params.a_max - params.a_min)
    return 10.0 * a_abs - 5.0 * (params.a_max + params.a_min) / (params.a_max - params.a_min)


def bend_coefficient(a_steer: float, params: BendParams) -> float:
    """Signed saturating bend coefficient g(a); zero exactly at a = 0."""
    if a_steer == 0:
        return 0.0
    magnitude = params.k * _sigmoid(z_norm(abs(a_steer), params))
    return magnitude if a_steer > 0 else -magnitude


def lateral_deviation(a_steer: float, y: float, params: BendParams) -> float:
    """Lateral displacement g(a) * y² of the road point y meters ahead."""
    if y < 0:
        raise ValueError(f"forward distance y must be >= 0, got {y}")
    return bend_coefficient(a_steer, params) * y * y


def bend_road(
    base_points: Sequence[float], a_steer: float, params: BendParams
) -> tuple[RoadControlPoint, ...]:
    """Displace every centerline point laterally by the quadratic law."""
    for a, b in zip(base_points, base_points[1:]):
        if b <= a:
            raise ValueError("base_points must be strictly increasing")
    if base_points and base_points[0] < 0:
        raise ValueError("base_points must be non-negative")
    g = bend_coefficient(a_steer, params)
    return tuple(RoadControlPoint(y=float(y), x=g * y * y) for y in base_points)


def scene_motion(state: MotionState) -> tuple[float, float]:
    """Scene speed/accel driving the optic flow; 1 scene unit = 1 meter."""
    return state.v, state.a_long


def make_frame(
    state: MotionState,
    prompt_on: bool,
    base_points: Sequence[float] = DEFAULT_BASE_POINTS,
    params: BendParams = BendParams(),
) -> FrameGeometry:
    """Assemble the full per-tick display state from one motion state."""
    speed, accel = scene_motion(state)
    return FrameGeometry(
        t=state.t,
        scene_speed=speed,
        scene_accel=accel,
        bend_g=bend_coefficient(state.a_steer, params),
        control_points=bend_road(base_points, state.a_steer, params),
        prompt_on=prompt_on,
        brake_light=accel < params.brake_threshold,
        camera_mode=params.camera_mode,
    )
