"""Ride-log ingestion: parse, resample onto a uniform grid, despike.

Ride logs are JSON Lines, one object per sample, with keys
``t, ax, ay, az, gx, gy, gz, lat, lon, v``. Acceleration is m/s² in
vehicle axes (X forward, Y lateral, Z vertical), gyro is °/s, ``v`` is
GPS speed in m/s. A sample may omit a whole sensor group (accel, gyro
or gps); the group is then flagged invalid and never read downstream.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Iterable

import numpy as np
from scipy import ndimage

from .errors import DataGapError, InsufficientDataError, OrderingError, ParseError

ACCEL_KEYS = ("ax", "ay", "az")
GYRO_KEYS = ("gx", "gy", "gz")
GPS_KEYS = ("lat", "lon", "v")

DEFAULT_RATE_HZ = 50.0
MAX_RATE_HZ = 1000.0
MAX_GAP_S = 2.0


@dataclass(frozen=True)
class RawSample:
    """One timestamped sensor reading in vehicle axes."""

    t: float
    accel: tuple[float, float, float] = (0.0, 0.0, 0.0)
    gyro: tuple[float, float, float] = (0.0, 0.0, 0.0)
    gps_lat: float = 0.0
    gps_lon: float = 0.0
    gps_speed: float = 0.0
    accel_valid: bool = True
    gyro_valid: bool = True
    gps_valid: bool = True


@dataclass(frozen=True, eq=False)
class UniformSeries:
    """Sample series on an exact uniform grid, stored columnwise.

    Timestamps are derived as ``t0 + i / rate_hz`` so the grid cannot
    drift or drop slots. Group validity is series-wide: a group is valid
    only if it could be interpolated from valid input samples.
    """

    rate_hz: float
    t0: float
    accel: np.ndarray  # (n, 3) m/s²
    gyro: np.ndarray  # (n, 3) °/s
    lat: np.ndarray  # (n,) degrees
    lon: np.ndarray  # (n,) degrees
    speed: np.ndarray  # (n,) m/s
    accel_valid: bool = True
    gyro_valid: bool = True
    gps_valid: bool = True

    def __post_init__(self) -> None:
        n = len(self.speed)
        if self.accel.shape != (n, 3) or self.gyro.shape != (n, 3):
            raise ValueError("accel/gyro must be (n, 3) arrays matching the scalar channels")
        if self.lat.shape != (n,) or self.lon.shape != (n,):
            raise ValueError("lat/lon must match the speed channel length")

    def __len__(self) -> int:
        return len(self.speed)

    @property
    def t(self) -> np.ndarray:
        return self.t0 + np.arange(len(self)) / self.rate_hz

    @property
    def duration_s(self) -> float:
        return len(self) / self.rate_hz

    def sample(self, i: int) -> RawSample:
        return RawSample(
            t=self.t0 + i / self.rate_hz,
            accel=tuple(float(x) for x in self.accel[i]),
            gyro=tuple(float(x) for x in self.gyro[i]),
            gps_lat=float(self.lat[i]),
            gps_lon=float(self.lon[i]),
            gps_speed=float(self.speed[i]),
            accel_valid=self.accel_valid,
            gyro_valid=self.gyro_valid,
            gps_valid=self.gps_valid,
        )

    def samples(self) -> list[RawSample]:
        return [self.sample(i) for i in range(len(self))]


def _read_group(obj: dict, keys: tuple[str, ...]) -> tuple[tuple[float, ...], bool]:
    values = []
    for key in keys:
        raw = obj.get(key)
        if not isinstance(raw, (int, float)) or isinstance(raw, bool) or not math.isfinite(raw):
            return tuple(0.0 for _ in keys), False
        values.append(float(raw))
    return tuple(values), True


def parse_log(lines: Iterable[str]) -> list[RawSample]:
    """Parse a ride-log stream into samples, enforcing strictly increasing t.

    Unknown keys are ignored; a missing sensor group flags that group
    invalid. Raises ParseError (with line number) on malformed records
    and OrderingError on non-monotonic timestamps.
    """
    samples: list[RawSample] = []
    prev_t = -math.inf
    for line_no, line in enumerate(lines, start=1):
        text = line.strip()
        if not text:
            continue
        try:
            obj = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ParseError(line_no, f"invalid JSON: {exc.msg}") from exc
        if not isinstance(obj, dict):
            raise ParseError(line_no, "record is not a JSON object")

        t = obj.get("t")
        if not isinstance(t, (int, float)) or isinstance(t, bool) or not math.isfinite(t):
            raise ParseError(line_no, "missing or non-finite 't'")
        t = float(t)
        if t < 0:
            raise ParseError(line_no, f"negative timestamp {t}")
        if t <= prev_t:
            raise OrderingError(line_no, f"timestamp {t} not after previous {prev_t}")
        prev_t = t

        accel, accel_ok = _read_group(obj, ACCEL_KEYS)
        gyro, gyro_ok = _read_group(obj, GYRO_KEYS)
        gps, gps_ok = _read_group(obj, GPS_KEYS)
        samples.append(
            RawSample(
                t=t,
                accel=accel,
                gyro=gyro,
                gps_lat=gps[0],
                gps_lon=gps[1],
                gps_speed=gps[2],
                accel_valid=accel_ok,
                gyro_valid=gyro_ok,
                gps_valid=gps_ok,
            )
        )
    return samples


def _interp_channel(grid: np.ndarray, xp: np.ndarray, fp: np.ndarray) -> np.ndarray:
    """Linear interpolation that returns input values bit-exactly at grid hits."""
    idx = np.searchsorted(xp, grid, side="right") - 1
    idx = np.clip(idx, 0, len(xp) - 2)
    x0 = xp[idx]
    x1 = xp[idx + 1]
    frac = np.clip((grid - x0) / (x1 - x0), 0.0, 1.0)
    out = fp[idx] + frac * (fp[idx + 1] - fp[idx])
    exact_lo = grid == x0
    out[exact_lo] = fp[idx[exact_lo]]
    exact_hi = grid == x1
    out[exact_hi] = fp[idx[exact_hi] + 1]
    return out


def resample(
    samples: list[RawSample],
    rate_hz: float = DEFAULT_RATE_HZ,
    max_gap_s: float = MAX_GAP_S,
) -> UniformSeries:
    """Linearly interpolate each channel onto a uniform grid over [t_first, t_last].

    Each sensor group is interpolated from its valid samples only; a
    group with fewer than two valid samples comes out flagged invalid.
    Valid samples further apart than max_gap_s raise DataGapError
    rather than silently fabricating motion across the hole.
    """
    if not 0 < rate_hz <= MAX_RATE_HZ:
        raise ValueError(f"rate_hz must be in (0, {MAX_RATE_HZ}], got {rate_hz}")
    if len(samples) < 2:
        raise InsufficientDataError(f"resample needs at least 2 samples, got {len(samples)}")

    t = np.array([s.t for s in samples])
    t0 = float(t[0])
    span = float(t[-1]) - t0
    n_out = int(math.floor(span * rate_hz + 1e-9)) + 1
    grid = t0 + np.arange(n_out) / rate_hz

    def interp_group(
        mask: np.ndarray, columns: list[np.ndarray], label: str
    ) -> tuple[list[np.ndarray], bool]:
        if mask.sum() < 2:
            return [np.zeros(n_out) for _ in columns], False
        vt = t[mask]
        gaps = np.diff(vt)
        if gaps.max() > max_gap_s:
            at = float(vt[int(np.argmax(gaps))])
            raise DataGapError(
                f"{label} gap of {gaps.max():.3f} s at t={at:.3f} exceeds {max_gap_s} s"
            )
        return [_interp_channel(grid, vt, col[mask]) for col in columns], True

    accel_mask = np.array([s.accel_valid for s in samples])
    gyro_mask = np.array([s.gyro_valid for s in samples])
    gps_mask = np.array([s.gps_valid for s in samples])

    accel_cols, accel_ok = interp_group(
        accel_mask, [np.array([s.accel[i] for s in samples]) for i in range(3)], "accel"
    )
    gyro_cols, gyro_ok = interp_group(
        gyro_mask, [np.array([s.gyro[i] for s in samples]) for i in range(3)], "gyro"
    )
    gps_cols, gps_ok = interp_group(
        gps_mask,
        [
            np.array([s.gps_lat for s in samples]),
            np.array([s.gps_lon for s in samples]),
            np.array([s.gps_speed for s in samples]),
        ],
        "gps",
    )

    return UniformSeries(
        rate_hz=rate_hz,
        t0=t0,
        accel=np.column_stack(accel_cols),
        gyro=np.column_stack(gyro_cols),
        lat=gps_cols[0],
        lon=gps_cols[1],
        speed=gps_cols[2],
        accel_valid=accel_ok,
        gyro_valid=gyro_ok,
        gps_valid=gps_ok,
    )


def despike(series: UniformSeries, window: int = 5, clamp: float = 50.0) -> UniformSeries:
    """Median-filter and clamp the inertial channels; GPS and timestamps untouched.

    window is the centered median width (odd, >= 1; edges replicate),
    clamp bounds each accel/gyro channel to [-clamp, +clamp]. Pass
    math.inf to disable clamping.
    """
    if window < 1 or window % 2 == 0:
        raise ValueError(f"window must be a positive odd integer, got {window}")
    if not clamp > 0:
        raise ValueError(f"clamp must be positive, got {clamp}")

    def clean(channels: np.ndarray) -> np.ndarray:
        out = np.empty_like(channels)
        for i in range(channels.shape[1]):
            col = channels[:, i]
            if window > 1:
                col = ndimage.median_filter(col, size=window, mode="nearest")
            out[:, i] = np.clip(col, -clamp, clamp)
        return out

    return UniformSeries(
        rate_hz=series.rate_hz,
        t0=series.t0,
        accel=clean(series.accel),
        gyro=clean(series.gyro),
        lat=series.lat,
        lon=series.lon,
        speed=series.speed,
        accel_valid=series.accel_valid,
        gyro_valid=series.gyro_valid,
        gps_valid=series.gps_valid,
    )
