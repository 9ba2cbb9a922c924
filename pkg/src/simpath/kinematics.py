"""Derive the display-law inputs (v, a_long, a_steer) from a uniform series."""

from __future__ import annotations

from dataclasses import dataclass
import math

import numpy as np

from .errors import InsufficientDataError
from .telemetry import UniformSeries

MIN_RATE_HZ = 10.0
DEFAULT_ALPHA = 0.3  # ~60 ms time constant at 50 Hz


@dataclass(frozen=True)
class MotionState:
    """Kinematic state at one instant.

    a_steer is the yaw rate from gyro-z in °/s, signed with + meaning a
    rightward turn; a_long is the longitudinal acceleration in m/s².
    """

    t: float
    v: float
    a_long: float
    a_steer: float

    def __post_init__(self) -> None:
        if self.v < 0:
            raise ValueError(f"speed must be non-negative, got {self.v}")
        for name in ("t", "v", "a_long", "a_steer"):
            if not math.isfinite(getattr(self, name)):
                raise ValueError(f"{name} must be finite")


def derive_motion(series: UniformSeries) -> list[MotionState]:
    """One MotionState per sample: v from GPS, a_steer from gyro-z,
    a_long from the finite difference of v (centered inside, one-sided
    at the endpoints)."""
    if len(series) == 0:
        raise InsufficientDataError("cannot derive motion from an empty series")
    if series.rate_hz < MIN_RATE_HZ:
        raise ValueError(f"series rate {series.rate_hz} Hz below minimum {MIN_RATE_HZ} Hz")
    if not series.gps_valid:
        raise InsufficientDataError("gps channel invalid; speed unavailable")
    if not series.gyro_valid:
        raise InsufficientDataError("gyro channel invalid; yaw rate unavailable")

    v = series.speed
    if len(series) == 1:
        a_long = np.zeros(1)
    else:
        a_long = np.gradient(v, 1.0 / series.rate_hz)
    t = series.t
    gz = series.gyro[:, 2]
    return [
        MotionState(t=float(t[i]), v=float(v[i]), a_long=float(a_long[i]), a_steer=float(gz[i]))
        for i in range(len(series))
    ]


def smooth(states: list[MotionState], alpha: float = DEFAULT_ALPHA) -> list[MotionState]:
    """Exponential moving average over v, a_long and a_steer.

    The first element passes through unchanged and alpha=1 is the
    identity; alpha outside (0, 1] is rejected.
    """
    if not 0 < alpha <= 1:
        raise ValueError(f"alpha must be in (0, 1], got {alpha}")
    if not states:
        raise ValueError("smooth requires a non-empty state sequence")
    if alpha == 1.0:
        return list(states)

    out: list[MotionState] = [states[0]]
    v, a_long, a_steer = states[0].v, states[0].a_long, states[0].a_steer
    keep = 1.0 - alpha
    for s in states[1:]:
        v = alpha * s.v + keep * v
        a_long = alpha * s.a_long + keep * a_long
        a_steer = alpha * s.a_steer + keep * a_steer
        out.append(MotionState(t=s.t, v=v, a_long=a_long, a_steer=a_steer))
    return out
