"""Deterministic synthetic ride log for demos and end-to-end tests.

60 s at 50 Hz: 20 s straight at 11.1 m/s (~40 km/h), a 20 s right turn
at 6.3 °/s, braking at -2 m/s² to a stop, then stationary. Two
single-sample gyro spikes are injected to exercise the despike stage.
GPS coordinates integrate the nominal (spike-free) path.
"""

from __future__ import annotations

import math
from pathlib import Path
from typing import Iterator

RATE_HZ = 50.0
DURATION_S = 60.0
CRUISE_V = 11.1  # m/s
TURN_RATE = 6.3  # °/s
TURN_START = 20.0
TURN_END = 40.0
BRAKE_ACCEL = -2.0  # m/s²
SPIKES = {500: 80.0, 1500: -70.0}  # sample index -> gyro-z spike value

_ORIGIN_LAT = 34.2
_ORIGIN_LON = 108.9
_M_PER_DEG = 111_320.0


def _nominal(t: float) -> tuple[float, float, float]:
    """(v, a_long, yaw_rate) of the scripted maneuver at time t."""
    if t < TURN_START:
        return CRUISE_V, 0.0, 0.0
    if t < TURN_END:
        return CRUISE_V, 0.0, TURN_RATE
    v = CRUISE_V + BRAKE_ACCEL * (t - TURN_END)
    if v <= 0:
        return 0.0, 0.0, 0.0
    return v, BRAKE_ACCEL, 0.0


def synthetic_ride_lines() -> Iterator[str]:
    """Ride-log JSON Lines for the scripted 60 s maneuver."""
    n = int(DURATION_S * RATE_HZ) + 1
    dt = 1.0 / RATE_HZ
    x = y = 0.0
    heading = 0.0
    for i in range(n):
        t = i / RATE_HZ
        v, a_long, yaw = _nominal(t)
        heading += yaw * dt
        rad = math.radians(heading)
        x += v * dt * math.sin(rad)
        y += v * dt * math.cos(rad)

        gz = SPIKES.get(i, yaw)
        ay = v * math.radians(yaw)  # centripetal component during the turn
        lat = _ORIGIN_LAT + y / _M_PER_DEG
        lon = _ORIGIN_LON + x / (_M_PER_DEG * math.cos(math.radians(_ORIGIN_LAT)))
        yield (
            "{"
            + f'"t":{t!r},"ax":{a_long!r},"ay":{ay!r},"az":9.81,'
            + f'"gx":0.0,"gy":0.0,"gz":{gz!r},'
            + f'"lat":{lat!r},"lon":{lon!r},"v":{v!r}'
            + "}"
        )


def write_synthetic_ride(path: str | Path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w") as fh:
        for line in synthetic_ride_lines():
            fh.write(line)
            fh.write("\n")
    return path
