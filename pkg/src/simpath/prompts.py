"""Anticipatory-symbol scheduler for turn and deceleration zones.

The symbol arms 3 s before a zone's entry, flashes as a square wave
(1 s on, 1 s off, starting visible, phase-locked to the arming
instant), holds steadily visible from the zone's end for 1 s of
cooldown, then extinguishes. The whole active episode therefore spans
exactly [entry_t - 3, end_t + 1).
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Optional

from .errors import MonotonicityError, RouteConfigError

ZONE_KINDS = ("turn", "deceleration")

LEAD_S = 3.0  # symbol arms this long before zone entry
FLASH_HALF_PERIOD_S = 1.0
COOLDOWN_S = 1.0  # steady-on tail after the maneuver concludes
MERGE_GAP_S = 4.0  # zones closer than this would overlap active episodes

_EARTH_M_PER_DEG = 111_320.0


@dataclass(frozen=True)
class ManeuverZone:
    """Route annotation for a turn or deceleration stretch.

    Replay zones carry entry_t directly; live zones carry an entry
    geofence (lat, lon, radius_m) instead, with end_t still a session
    timestamp.
    """

    kind: str
    end_t: float
    entry_t: float | None = None
    lat: float | None = None
    lon: float | None = None
    radius_m: float | None = None

    def __post_init__(self) -> None:
        if self.kind not in ZONE_KINDS:
            raise RouteConfigError(f"zone kind must be one of {ZONE_KINDS}, got {self.kind!r}")
        geo = (self.lat, self.lon, self.radius_m)
        if self.entry_t is not None:
            if any(v is not None for v in geo):
                raise RouteConfigError("zone must use either entry_t or a geofence, not both")
            if not self.end_t > self.entry_t:
                raise RouteConfigError(
                    f"zone end_t {self.end_t} must exceed entry_t {self.entry_t}"
                )
        else:
            if any(v is None for v in geo):
                raise RouteConfigError("geofenced zone needs lat, lon and radius_m")
            if not self.radius_m > 0:
                raise RouteConfigError(f"geofence radius must be positive, got {self.radius_m}")

    @property
    def geofenced(self) -> bool:
        return self.entry_t is None


@dataclass(frozen=True)
class PromptState:
    """Scheduler state; symbol_visible only in flashing/cooldown phases."""

    phase: str = "idle"  # idle | flashing | cooldown
    symbol_visible: bool = False
    armed_t: float | None = None  # flash phase reference
    active_end_t: float | None = None
    last_t: float = -math.inf


def initial_prompt_state() -> PromptState:
    return PromptState()


def _geo_distance_m(lat1: float, lon1: float, lat2: float, lon2: float) -> float:
    # Equirectangular approximation; geofences are tens of meters wide.
    dy = (lat2 - lat1) * _EARTH_M_PER_DEG
    dx = (lon2 - lon1) * _EARTH_M_PER_DEG * math.cos(math.radians(0.5 * (lat1 + lat2)))
    return math.hypot(dx, dy)


def locate_zone(
    t: float,
    zones: list[ManeuverZone],
    *,
    lat: float | None = None,
    lon: float | None = None,
    speed: float | None = None,
) -> Optional[tuple[ManeuverZone, float]]:
    """Nearest upcoming or active zone with signed time to entry.

    Zones whose end_t has passed are ignored; returns None once all
    zones are behind the vehicle. Geofenced zones estimate time to
    entry as (distance - radius) / speed, re-evaluated every call.
    """
    best: tuple[ManeuverZone, float] | None = None
    for zone in zones:
        if t >= zone.end_t:
            continue
        if zone.geofenced:
            if lat is None or lon is None:
                continue
            gap_m = _geo_distance_m(lat, lon, zone.lat, zone.lon) - zone.radius_m
            if gap_m <= 0:
                tte = 0.0
            elif speed is None or speed <= 0:
                tte = math.inf
            else:
                tte = gap_m / speed
        else:
            tte = zone.entry_t - t
        if best is None or tte < best[1]:
            best = (zone, tte)
    return best


def step_scheduler(
    state: PromptState,
    t: float,
    zone_info: Optional[tuple[ManeuverZone, float]],
) -> PromptState:
    """Advance the symbol state machine to time t.

    t must be non-decreasing across calls on the same state chain;
    regression raises MonotonicityError. Deterministic: equal inputs
    give equal outputs.
    """
    if t < state.last_t:
        raise MonotonicityError(f"clock stepped backwards: {t} < {state.last_t}")

    phase = state.phase
    armed_t = state.armed_t
    end_t = state.active_end_t

    if phase != "idle":
        if t >= end_t + COOLDOWN_S:
            phase, armed_t, end_t = "idle", None, None
        elif t >= end_t:
            return PromptState("cooldown", True, armed_t, end_t, t)
        else:
            on = int(math.floor((t - armed_t) / FLASH_HALF_PERIOD_S)) % 2 == 0
            return PromptState("flashing", on, armed_t, end_t, t)

    if zone_info is not None:
        zone, tte = zone_info
        if tte <= LEAD_S and t < zone.end_t:
            # Phase-lock flashing to the scheduled arming instant so the
            # toggle boundaries do not depend on the tick grid.
            armed_t = t if zone.geofenced else zone.entry_t - LEAD_S
            on = int(math.floor((t - armed_t) / FLASH_HALF_PERIOD_S)) % 2 == 0
            return PromptState("flashing", on, armed_t, zone.end_t, t)

    return PromptState("idle", False, None, None, t)


def _merge_close_zones(zones: list[ManeuverZone]) -> list[ManeuverZone]:
    timed = sorted((z for z in zones if not z.geofenced), key=lambda z: z.entry_t)
    merged: list[ManeuverZone] = []
    for zone in timed:
        if merged:
            prev = merged[-1]
            if zone.entry_t < prev.end_t:
                raise RouteConfigError(
                    f"zones overlap: [{prev.entry_t}, {prev.end_t}] and "
                    f"[{zone.entry_t}, {zone.end_t}]"
                )
            if zone.entry_t - prev.end_t < MERGE_GAP_S:
                merged[-1] = replace(prev, end_t=max(prev.end_t, zone.end_t))
                continue
        merged.append(zone)
    return merged + [z for z in zones if z.geofenced]


def load_route(source: str | Path | dict) -> list[ManeuverZone]:
    """Load and validate a route file: {"zones": [{kind, entry_t | (lat, lon, radius_m), end_t}]}.

    Overlapping timed zones are a configuration error; timed zones
    separated by less than 4 s merge into one to avoid flash restarts.
    """
    if isinstance(source, (str, Path)):
        doc = json.loads(Path(source).read_text())
    else:
        doc = source
    if not isinstance(doc, dict) or not isinstance(doc.get("zones"), list):
        raise RouteConfigError("route document must contain a 'zones' list")

    zones = []
    for i, entry in enumerate(doc["zones"]):
        if not isinstance(entry, dict):
            raise RouteConfigError(f"zone {i} is not an object")
        try:
            zones.append(
                ManeuverZone(
                    kind=entry.get("kind", ""),
                    end_t=float(entry["end_t"]),
                    entry_t=None if entry.get("entry_t") is None else float(entry["entry_t"]),
                    lat=None if entry.get("lat") is None else float(entry["lat"]),
                    lon=None if entry.get("lon") is None else float(entry["lon"]),
                    radius_m=None if entry.get("radius_m") is None else float(entry["radius_m"]),
                )
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise RouteConfigError(f"zone {i} malformed: {exc}") from exc
    return _merge_close_zones(zones)
