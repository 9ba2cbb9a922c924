"""Session orchestration: batch replay, the steerable vehicle model,
and append-only JSON Lines persistence with an integrity footer.

A session file holds one header line, the frame/control/ms record
streams, and a footer carrying the SHA-256 of everything above it.
Replay is fully deterministic: the same ride log, route and config
produce byte-identical session files.
"""

from __future__ import annotations

import dataclasses
import hashlib
import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Iterator

from .analysis import MSReport
from .config import PipelineConfig
from .errors import IntegrityError, ParseError
from .geometry import FrameGeometry, RoadControlPoint, make_frame
from .kinematics import MotionState, derive_motion, smooth
from .prompts import ManeuverZone, initial_prompt_state, load_route, locate_zone, step_scheduler
from .telemetry import (
    ACCEL_KEYS,
    GPS_KEYS,
    GYRO_KEYS,
    RawSample,
    despike,
    parse_log,
    resample,
)

SESSION_FORMAT = "simpath-session/1"
SESSION_FILENAME = "session.jsonl"
TELEMETRY_FILENAME = "telemetry.jsonl"
REPORT_GAP_S = 30.0  # expected self-report cadence


@dataclass(frozen=True)
class FramePacket:
    """Wire/persistence form of one FrameGeometry, sequence-numbered."""

    seq: int
    t: float
    scene_speed: float
    scene_accel: float
    bend_g: float
    control_points: tuple[RoadControlPoint, ...]
    prompt_on: bool
    brake_light: bool
    camera_mode: str

    @classmethod
    def from_geometry(cls, seq: int, geom: FrameGeometry) -> "FramePacket":
        return cls(
            seq=seq,
            t=geom.t,
            scene_speed=geom.scene_speed,
            scene_accel=geom.scene_accel,
            bend_g=geom.bend_g,
            control_points=geom.control_points,
            prompt_on=geom.prompt_on,
            brake_light=geom.brake_light,
            camera_mode=geom.camera_mode,
        )

    def to_wire(self) -> dict:
        return {
            "type": "frame",
            "seq": self.seq,
            "t": self.t,
            "scene_speed": self.scene_speed,
            "scene_accel": self.scene_accel,
            "bend_g": self.bend_g,
            "control_points": [{"y": p.y, "x": p.x} for p in self.control_points],
            "prompt_on": self.prompt_on,
            "brake_light": self.brake_light,
            "camera_mode": self.camera_mode,
        }

    @classmethod
    def from_wire(cls, obj: dict) -> "FramePacket":
        return cls(
            seq=int(obj["seq"]),
            t=float(obj["t"]),
            scene_speed=float(obj["scene_speed"]),
            scene_accel=float(obj["scene_accel"]),
            bend_g=float(obj["bend_g"]),
            control_points=tuple(
                RoadControlPoint(y=float(p["y"]), x=float(p["x"]))
                for p in obj["control_points"]
            ),
            prompt_on=bool(obj["prompt_on"]),
            brake_light=bool(obj["brake_light"]),
            camera_mode=str(obj["camera_mode"]),
        )


@dataclass(frozen=True)
class ControlInput:
    """Driver command as received by the session clock."""

    t: float
    throttle: float  # m/s² demanded
    steer: float  # °/s demanded


@dataclass(frozen=True)
class VehicleState:
    """Planar vehicle pose for the human-steered mode.

    heading is degrees clockwise from the +y axis, so positive steer
    rate turns rightward, matching the a_steer sign convention.
    """

    x: float = 0.0
    y: float = 0.0
    heading: float = 0.0
    v: float = 0.0

    def __post_init__(self) -> None:
        if self.v < 0:
            raise ValueError(f"speed must be non-negative, got {self.v}")


@dataclass
class SessionLog:
    header: dict
    frames: list[FramePacket] = field(default_factory=list)
    reports: list[MSReport] = field(default_factory=list)
    controls: list[ControlInput] = field(default_factory=list)


def sim_step(
    state: VehicleState,
    throttle_accel: float,
    steer_rate: float,
    dt: float,
    t: float = 0.0,
) -> tuple[VehicleState, MotionState]:
    """Advance the toy vehicle one tick and emit the matching MotionState.

    Heading integrates the steer rate, speed integrates the throttle
    (clamped at zero: no reverse), and the position advances v*dt along
    the updated heading.
    """
    if not 0 < dt <= 0.1:
        raise ValueError(f"dt must be in (0, 0.1], got {dt}")
    heading = state.heading + steer_rate * dt
    v = max(0.0, state.v + throttle_accel * dt)
    rad = math.radians(heading)
    new = VehicleState(
        x=state.x + v * dt * math.sin(rad),
        y=state.y + v * dt * math.cos(rad),
        heading=heading,
        v=v,
    )
    return new, MotionState(t=t, v=v, a_long=throttle_accel, a_steer=steer_rate)


def _route_hash(zones: list[ManeuverZone]) -> str | None:
    if not zones:
        return None
    payload = json.dumps(
        [dataclasses.asdict(z) for z in zones], sort_keys=True, separators=(",", ":")
    )
    return hashlib.sha256(payload.encode()).hexdigest()


def _resolve_ride(ride: str | Path | Iterable[str] | list[RawSample]) -> list[RawSample]:
    if isinstance(ride, (str, Path)):
        with open(ride) as fh:
            return parse_log(fh)
    if isinstance(ride, list) and ride and isinstance(ride[0], RawSample):
        return ride
    return parse_log(ride)


def _resolve_route(route: str | Path | dict | list[ManeuverZone] | None) -> list[ManeuverZone]:
    if route is None:
        return []
    if isinstance(route, list):
        return route
    return load_route(route)


def replay(
    ride: str | Path | Iterable[str] | list[RawSample],
    route: str | Path | dict | list[ManeuverZone] | None = None,
    config: PipelineConfig | None = None,
) -> SessionLog:
    """Run a recorded ride through the whole pipeline at the frame cadence.

    telemetry -> resample -> despike -> derive motion -> smooth, then
    one scheduler step and one FrameGeometry per frame tick. Frames are
    timed t0 + k/frame_rate; each takes the latest available sample.
    """
    cfg = config or PipelineConfig()
    samples = _resolve_ride(ride)
    zones = _resolve_route(route)

    series = despike(
        resample(samples, cfg.resample_rate_hz),
        window=cfg.despike_window,
        clamp=cfg.despike_clamp,
    )
    states = smooth(derive_motion(series), cfg.smoothing_alpha)

    span = (len(series) - 1) / series.rate_hz
    n_frames = int(math.floor(span * cfg.frame_rate_hz + 1e-9)) + 1

    frames: list[FramePacket] = []
    prompt = initial_prompt_state()
    for k in range(n_frames):
        tf = series.t0 + k / cfg.frame_rate_hz
        idx = min(int(math.floor((tf - series.t0) * series.rate_hz + 1e-9)), len(series) - 1)
        state = states[idx]
        info = locate_zone(
            tf, zones, lat=float(series.lat[idx]), lon=float(series.lon[idx]), speed=state.v
        )
        prompt = step_scheduler(prompt, tf, info)
        geom = make_frame(
            dataclasses.replace(state, t=tf),
            prompt_on=prompt.symbol_visible,
            base_points=cfg.base_points,
            params=cfg.bend,
        )
        frames.append(FramePacket.from_geometry(k, geom))

    header = {
        "format": SESSION_FORMAT,
        "mode": "replay",
        "config": cfg.to_document(),
        "route_hash": _route_hash(zones),
        "started_at": None,
    }
    return SessionLog(header=header, frames=frames)


# ── persistence ──────────────────────────────────────────────────────


def _canonical(obj: dict) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), allow_nan=False)


def _report_record(report: MSReport) -> dict:
    rec = {
        "type": "ms",
        "t": report.t,
        "eye": report.eye,
        "head": report.head,
        "stomach": report.stomach,
        "participant": report.participant,
        "gap_exceeded": report.gap_exceeded,
    }
    if report.has_position:
        rec["lat"] = report.lat
        rec["lon"] = report.lon
    return rec


def session_lines(session: SessionLog) -> Iterator[str]:
    """Canonical line encoding: header, streams, integrity footer."""
    digest = hashlib.sha256()

    def emit(obj: dict) -> str:
        line = _canonical(obj)
        digest.update(line.encode())
        digest.update(b"\n")
        return line

    yield emit({"type": "header", **session.header})
    for frame in session.frames:
        yield emit(frame.to_wire())
    for control in session.controls:
        yield emit({"type": "control", "t": control.t, "throttle": control.throttle,
                    "steer": control.steer})
    for report in session.reports:
        yield emit(_report_record(report))
    yield _canonical({"type": "footer", "sha256": digest.hexdigest()})


def session_hash(session: SessionLog) -> str:
    """SHA-256 of the full canonical session encoding."""
    digest = hashlib.sha256()
    for line in session_lines(session):
        digest.update(line.encode())
        digest.update(b"\n")
    return digest.hexdigest()


def export_session(session: SessionLog, out_dir: str | Path) -> Path:
    """Write <out_dir>/session.jsonl; returns the file path."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    path = out / SESSION_FILENAME
    try:
        with open(path, "w") as fh:
            for line in session_lines(session):
                fh.write(line)
                fh.write("\n")
    except OSError as exc:
        raise OSError(f"failed writing session to {path}: {exc}") from exc
    return path


def serialize_samples(samples: Iterable[RawSample]) -> Iterator[str]:
    """Ride-log JSON Lines for a sample sequence; inverse of parse_log."""
    for s in samples:
        rec: dict = {"t": s.t}
        if s.accel_valid:
            rec.update(zip(ACCEL_KEYS, s.accel))
        if s.gyro_valid:
            rec.update(zip(GYRO_KEYS, s.gyro))
        if s.gps_valid:
            rec.update(zip(GPS_KEYS, (s.gps_lat, s.gps_lon, s.gps_speed)))
        yield json.dumps(rec, allow_nan=False)


def import_session(source: str | Path) -> SessionLog:
    """Read a session file (or its directory) back, verifying integrity.

    Detects sequence gaps in the frame stream, out-of-order records and
    footer hash mismatches; any of these raises IntegrityError.
    """
    path = Path(source)
    if path.is_dir():
        path = path / SESSION_FILENAME
    lines = path.read_text().splitlines()
    if not lines:
        raise IntegrityError(f"{path}: empty session file")

    digest = hashlib.sha256()
    header: dict | None = None
    frames: list[FramePacket] = []
    reports: list[MSReport] = []
    controls: list[ControlInput] = []
    footer: dict | None = None

    for line_no, line in enumerate(lines, start=1):
        try:
            obj = json.loads(line)
        except json.JSONDecodeError as exc:
            raise ParseError(line_no, f"invalid JSON: {exc.msg}") from exc
        kind = obj.get("type")
        if kind == "footer":
            footer = obj
            if line_no != len(lines):
                raise IntegrityError(f"{path}: footer at line {line_no} is not last")
            continue
        digest.update(line.encode())
        digest.update(b"\n")
        try:
            if kind == "header":
                if line_no != 1:
                    raise IntegrityError(f"{path}: header at line {line_no} is not first")
                header = {k: v for k, v in obj.items() if k != "type"}
            elif kind == "frame":
                frames.append(FramePacket.from_wire(obj))
            elif kind == "control":
                controls.append(
                    ControlInput(t=float(obj["t"]), throttle=float(obj["throttle"]),
                                 steer=float(obj["steer"]))
                )
            elif kind == "ms":
                reports.append(
                    MSReport(
                        t=float(obj["t"]),
                        lat=float(obj.get("lat", math.nan)),
                        lon=float(obj.get("lon", math.nan)),
                        eye=int(obj["eye"]),
                        head=int(obj["head"]),
                        stomach=int(obj["stomach"]),
                        participant=str(obj.get("participant", "")),
                        gap_exceeded=bool(obj.get("gap_exceeded", False)),
                    )
                )
            else:
                raise ParseError(line_no, f"unknown record type {kind!r}")
        except (KeyError, TypeError, ValueError) as exc:
            raise ParseError(line_no, f"malformed {kind} record: {exc}") from exc

    if header is None:
        raise IntegrityError(f"{path}: missing header")
    if footer is None:
        raise IntegrityError(f"{path}: missing footer")
    if footer.get("sha256") != digest.hexdigest():
        raise IntegrityError(f"{path}: footer hash mismatch; file was modified")

    for i, frame in enumerate(frames):
        if frame.seq != i:
            raise IntegrityError(f"{path}: frame seq gap: expected {i}, found {frame.seq}")
    for name, ts in (("frame", [f.t for f in frames]),
                     ("control", [c.t for c in controls]),
                     ("ms", [r.t for r in reports])):
        if any(b < a for a, b in zip(ts, ts[1:])):
            raise IntegrityError(f"{path}: {name} stream is not time-ordered")

    return SessionLog(header=header, frames=frames, reports=reports, controls=controls)
