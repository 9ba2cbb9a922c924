"""Offline motion-sickness metrics and the statistics behind them.

Covers the simplified SSQ-Likert score (eye + stomach + head, scaled
by 3.74), per-axis motion sickness dose values with an optional
nausea-band frequency weighting, one-way ANOVA and Pearson correlation
kernels, and the geospatial binning of score-modification events.

The weighting filter approximates the standard's nausea-band curve as
a second-order Butterworth band-pass (high-pass 0.08 Hz, low-pass
0.63 Hz) gain-normalized to 1.0 at 0.16 Hz. The unweighted dose path
is exact: sqrt(sum(a_i^2) * dt).
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Iterable, NamedTuple, Sequence

import numpy as np
from scipy import signal

from .errors import InsufficientDataError, ParseError
from .telemetry import UniformSeries

LIKERT_MIN = 0
LIKERT_MAX = 7
MS_SCALE = 3.74

AXES = ("X", "Y", "Z")

WEIGHT_HP_HZ = 0.08
WEIGHT_LP_HZ = 0.63
WEIGHT_REF_HZ = 0.16

DEFAULT_CELL_SIZE_M = 25.0
_EARTH_M_PER_DEG = 111_320.0


@dataclass(frozen=True)
class MSReport:
    """One passenger discomfort report (Likert 0-7 per component)."""

    t: float
    lat: float
    lon: float
    eye: int
    head: int
    stomach: int
    participant: str = ""
    gap_exceeded: bool = False  # flagged by the endpoint when >30 s since previous report

    @property
    def has_position(self) -> bool:
        return math.isfinite(self.lat) and math.isfinite(self.lon)


@dataclass(frozen=True)
class MSDVResult:
    """Motion sickness dose value for one vehicle axis, m/s^1.5."""

    axis: str
    value: float
    duration: float


class AnovaResult(NamedTuple):
    F: float
    df_between: int
    df_within: int


@dataclass
class HeatmapGrid:
    """Counts of MS-modification events binned onto a lat/lon grid."""

    cell_size_m: float
    origin_lat: float
    origin_lon: float
    lat_step_deg: float
    lon_step_deg: float
    cells: dict[tuple[int, int], int] = field(default_factory=dict)
    skipped: int = 0  # reports lacking a usable position

    def to_document(self) -> dict:
        return {
            "cell_size": self.cell_size_m,
            "origin": {"lat": self.origin_lat, "lon": self.origin_lon},
            "lat_step_deg": self.lat_step_deg,
            "lon_step_deg": self.lon_step_deg,
            "cells": [
                {"row": row, "col": col, "count": count}
                for (row, col), count in sorted(self.cells.items())
            ],
            "skipped": self.skipped,
        }


def ms_score(report: MSReport) -> float:
    """Simplified SSQ-Likert score: (eye + stomach + head) * 3.74."""
    for name in ("eye", "head", "stomach"):
        value = getattr(report, name)
        if not LIKERT_MIN <= value <= LIKERT_MAX:
            raise ValueError(
                f"{name} component {value} outside Likert range [{LIKERT_MIN}, {LIKERT_MAX}]"
            )
    return (report.eye + report.stomach + report.head) * MS_SCALE


def _weighting_sos(rate_hz: float) -> np.ndarray:
    hp = signal.butter(2, WEIGHT_HP_HZ, "highpass", fs=rate_hz, output="sos")
    lp = signal.butter(2, WEIGHT_LP_HZ, "lowpass", fs=rate_hz, output="sos")
    return np.vstack([hp, lp])


def weighting_gain(freq_hz: float, rate_hz: float) -> float:
    """Magnitude response of the nausea-band weighting, 1.0 at 0.16 Hz."""
    sos = _weighting_sos(rate_hz)
    _, h = signal.sosfreqz(sos, worN=[freq_hz, WEIGHT_REF_HZ], fs=rate_hz)
    return float(abs(h[0]) / abs(h[1]))


def apply_weighting(values: np.ndarray, rate_hz: float) -> np.ndarray:
    """Run a channel through the nausea-band weighting filter."""
    sos = _weighting_sos(rate_hz)
    _, h = signal.sosfreqz(sos, worN=[WEIGHT_REF_HZ], fs=rate_hz)
    return signal.sosfilt(sos, values) / abs(h[0])


def dose_value(values: np.ndarray, rate_hz: float, weighting: bool = False) -> float:
    """sqrt of the rectangle-rule integral of the squared (optionally
    weighted) acceleration channel."""
    values = np.asarray(values, dtype=float)
    if values.size == 0:
        raise InsufficientDataError("dose value needs a non-empty channel")
    if weighting:
        values = apply_weighting(values, rate_hz)
    return math.sqrt(float(np.sum(values * values)) * (1.0 / rate_hz))


def msdv(series: UniformSeries, axis: str, weighting: bool = False) -> MSDVResult:
    """Dose value for one accelerometer axis of a uniform series."""
    if axis not in AXES:
        raise ValueError(f"axis must be one of {AXES}, got {axis!r}")
    if len(series) == 0:
        raise InsufficientDataError("msdv needs a non-empty series")
    if not series.accel_valid:
        raise InsufficientDataError("accel channel invalid; msdv unavailable")
    channel = series.accel[:, AXES.index(axis)]
    return MSDVResult(
        axis=axis,
        value=dose_value(channel, series.rate_hz, weighting=weighting),
        duration=series.duration_s,
    )


def anova_oneway(groups: Sequence[Sequence[float]]) -> AnovaResult:
    """One-way F statistic MSB/MSW with df (k-1, N-k).

    Zero within-group variance with non-zero between-group variance
    reports F = inf; fully degenerate input (any group smaller than 2,
    or fewer than 2 groups) is rejected.
    """
    if len(groups) < 2:
        raise ValueError(f"anova needs at least 2 groups, got {len(groups)}")
    arrays = [np.asarray(g, dtype=float) for g in groups]
    if any(a.size < 2 for a in arrays):
        raise ValueError("every group needs at least 2 values")

    n_total = sum(a.size for a in arrays)
    grand = sum(float(a.sum()) for a in arrays) / n_total
    ssb = sum(a.size * (float(a.mean()) - grand) ** 2 for a in arrays)
    ssw = sum(float(((a - a.mean()) ** 2).sum()) for a in arrays)
    df_between = len(arrays) - 1
    df_within = n_total - len(arrays)

    msb = ssb / df_between
    msw = ssw / df_within
    if msw == 0.0:
        f = 0.0 if msb == 0.0 else math.inf
    else:
        f = msb / msw
    return AnovaResult(F=f, df_between=df_between, df_within=df_within)


def pearson(x: Sequence[float], y: Sequence[float]) -> float:
    """Sample Pearson correlation coefficient, clamped to [-1, 1]."""
    xa = np.asarray(x, dtype=float)
    ya = np.asarray(y, dtype=float)
    if xa.size != ya.size:
        raise ValueError(f"length mismatch: {xa.size} vs {ya.size}")
    if xa.size < 3:
        raise ValueError(f"pearson needs at least 3 pairs, got {xa.size}")
    dx = xa - xa.mean()
    dy = ya - ya.mean()
    sxx = float((dx * dx).sum())
    syy = float((dy * dy).sum())
    if sxx == 0.0 or syy == 0.0:
        raise ValueError("correlation undefined for zero-variance input")
    # single sqrt keeps exactly-linear data at exactly +/-1
    r = float((dx * dy).sum()) / math.sqrt(sxx * syy)
    return max(-1.0, min(1.0, r))


def heatmap(
    reports: Sequence[MSReport], cell_size_m: float = DEFAULT_CELL_SIZE_M
) -> HeatmapGrid:
    """Bin MS-modification events (score changes per participant) to a grid.

    The first report of a participant is the baseline; only reports
    whose score differs from that participant's previous report count.
    Modification events without a position are tallied in ``skipped``.
    """
    if not cell_size_m > 0:
        raise ValueError(f"cell size must be positive, got {cell_size_m}")

    events: list[MSReport] = []
    last_score: dict[str, float] = {}
    for report in sorted(reports, key=lambda r: r.t):
        score = ms_score(report)
        prev = last_score.get(report.participant)
        last_score[report.participant] = score
        if prev is not None and score != prev:
            events.append(report)

    positioned = [e for e in events if e.has_position]
    skipped = len(events) - len(positioned)
    mean_lat = float(np.mean([e.lat for e in positioned])) if positioned else 0.0
    lat_step = cell_size_m / _EARTH_M_PER_DEG
    lon_step = cell_size_m / (_EARTH_M_PER_DEG * math.cos(math.radians(mean_lat)))
    origin_lat = min((e.lat for e in positioned), default=0.0)
    origin_lon = min((e.lon for e in positioned), default=0.0)

    grid = HeatmapGrid(
        cell_size_m=cell_size_m,
        origin_lat=origin_lat,
        origin_lon=origin_lon,
        lat_step_deg=lat_step,
        lon_step_deg=lon_step,
        skipped=skipped,
    )
    for event in positioned:
        row = int(math.floor((event.lat - origin_lat) / lat_step))
        col = int(math.floor((event.lon - origin_lon) / lon_step))
        grid.cells[(row, col)] = grid.cells.get((row, col), 0) + 1
    return grid


def load_reports(lines: Iterable[str]) -> list[MSReport]:
    """Parse an MS-report JSON Lines stream: {t, lat, lon, eye, head, stomach, participant}."""
    reports: list[MSReport] = []
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
        try:
            report = MSReport(
                t=float(obj["t"]),
                lat=float(obj.get("lat", math.nan)),
                lon=float(obj.get("lon", math.nan)),
                eye=int(obj["eye"]),
                head=int(obj["head"]),
                stomach=int(obj["stomach"]),
                participant=str(obj.get("participant", "")),
                gap_exceeded=bool(obj.get("gap_exceeded", False)),
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise ParseError(line_no, f"malformed report: {exc}") from exc
        if report.t < 0:
            raise ParseError(line_no, f"negative timestamp {report.t}")
        for name in ("eye", "head", "stomach"):
            value = getattr(report, name)
            if not LIKERT_MIN <= value <= LIKERT_MAX:
                raise ParseError(line_no, f"{name}={value} outside [{LIKERT_MIN}, {LIKERT_MAX}]")
        reports.append(report)
    return reports
