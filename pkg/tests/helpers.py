"""Shared builders for test inputs."""

from __future__ import annotations

import json

import numpy as np

from simpath.telemetry import RawSample, UniformSeries


def make_sample(t: float, **overrides) -> RawSample:
    base = dict(
        t=t,
        accel=(0.0, 0.0, 9.81),
        gyro=(0.0, 0.0, 0.0),
        gps_lat=34.2,
        gps_lon=108.9,
        gps_speed=0.0,
    )
    base.update(overrides)
    return RawSample(**base)


def make_series(
    rate_hz: float = 50.0,
    t0: float = 0.0,
    n: int = 100,
    accel_x=None,
    gyro_z=None,
    speed=None,
) -> UniformSeries:
    """Uniform series with the named channels set (scalars broadcast)."""

    def broadcast(value) -> np.ndarray:
        arr = np.asarray(0.0 if value is None else value, dtype=float)
        return np.full(n, float(arr)) if arr.ndim == 0 else arr

    accel = np.zeros((n, 3))
    accel[:, 0] = broadcast(accel_x)
    gyro = np.zeros((n, 3))
    gyro[:, 2] = broadcast(gyro_z)
    return UniformSeries(
        rate_hz=rate_hz,
        t0=t0,
        accel=accel,
        gyro=gyro,
        lat=np.full(n, 34.2),
        lon=np.full(n, 108.9),
        speed=broadcast(speed),
    )


def log_line(t: float, **kw) -> str:
    rec = {"t": t, "ax": 0.0, "ay": 0.0, "az": 9.81, "gx": 0.0, "gy": 0.0, "gz": 0.0,
           "lat": 34.2, "lon": 108.9, "v": 0.0}
    rec.update(kw)
    return json.dumps(rec)
