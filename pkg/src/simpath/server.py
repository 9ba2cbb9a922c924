"""Live session endpoint: newline-delimited JSON over TCP.

One pipeline owner advances the simulation clock at the frame rate and
broadcasts FramePackets to every connected client. The first client to
connect is the driver; its control messages steer the toy vehicle
(missing ticks hold the last input). Any client may submit MS reports.
Slow consumers are disconnected rather than allowed to stall the
clock. The session is persisted on stop.
"""

from __future__ import annotations

import json
import math
import queue
import socket
import threading
import time
from pathlib import Path

from .analysis import LIKERT_MAX, LIKERT_MIN, MSReport
from .config import PipelineConfig
from .kinematics import MotionState
from .prompts import ManeuverZone, initial_prompt_state, locate_zone, step_scheduler
from .geometry import make_frame
from .session import (
    REPORT_GAP_S,
    SESSION_FORMAT,
    ControlInput,
    FramePacket,
    SessionLog,
    VehicleState,
    export_session,
    sim_step,
)

_SEND_QUEUE_SIZE = 256


class _Client:
    def __init__(self, conn: socket.socket, name: str, is_driver: bool) -> None:
        self.conn = conn
        self.name = name
        self.is_driver = is_driver
        self.outbox: queue.Queue[bytes | None] = queue.Queue(maxsize=_SEND_QUEUE_SIZE)
        self.alive = True


class SessionServer:
    """Owns the simulation clock and the client fan-out."""

    def __init__(
        self,
        config: PipelineConfig | None = None,
        zones: list[ManeuverZone] | None = None,
        port: int = 0,
        host: str = "127.0.0.1",
        out_dir: str | Path | None = None,
    ) -> None:
        self._config = config or PipelineConfig()
        self._zones = zones or []
        self._host = host
        self._requested_port = port
        self._out_dir = Path(out_dir) if out_dir is not None else None

        self._sock: socket.socket | None = None
        self._clients: list[_Client] = []
        self._clients_lock = threading.Lock()
        self._running = False
        self._threads: list[threading.Thread] = []

        self._vehicle = VehicleState()
        self._last_control = (0.0, 0.0)  # throttle, steer; held between messages
        self._control_lock = threading.Lock()
        self._smoothed: MotionState | None = None
        self._prompt = initial_prompt_state()
        self._seq = 0
        self._session = SessionLog(
            header={
                "format": SESSION_FORMAT,
                "mode": "live",
                "config": self._config.to_document(),
                "route_hash": None,
                "started_at": None,
            }
        )
        self._session_lock = threading.Lock()
        self._last_report_t: dict[str, float] = {}
        self._started_mono = 0.0

    @property
    def port(self) -> int:
        if self._sock is None:
            raise RuntimeError("server not started")
        return self._sock.getsockname()[1]

    def start(self) -> None:
        if self._running:
            return
        self._sock = socket.socket(socket.AF_INET, socket.SOCK_STREAM)
        self._sock.setsockopt(socket.SOL_SOCKET, socket.SO_REUSEADDR, 1)
        self._sock.bind((self._host, self._requested_port))
        self._sock.listen(8)
        self._sock.settimeout(0.2)
        self._running = True
        self._started_mono = time.monotonic()
        self._session.header["started_at"] = time.time()

        accept = threading.Thread(target=self._accept_loop, name="simpath-accept", daemon=True)
        tick = threading.Thread(target=self._tick_loop, name="simpath-clock", daemon=True)
        self._threads = [accept, tick]
        accept.start()
        tick.start()

    def stop(self) -> Path | None:
        """Stop ticking, drop clients, persist the session if out_dir is set."""
        if not self._running:
            return None
        self._running = False
        for thread in self._threads:
            thread.join(timeout=2.0)
        with self._clients_lock:
            for client in self._clients:
                self._drop_client(client)
            self._clients.clear()
        if self._sock is not None:
            self._sock.close()
            self._sock = None
        if self._out_dir is not None:
            return export_session(self._session, self._out_dir)
        return None

    # ── clock ─────────────────────────────────────────────────────

    def _session_time(self) -> float:
        return time.monotonic() - self._started_mono

    def _tick_loop(self) -> None:
        period = 1.0 / self._config.frame_rate_hz
        alpha = self._config.smoothing_alpha
        next_tick = time.monotonic() + period
        while self._running:
            now = time.monotonic()
            if now < next_tick:
                time.sleep(min(period, next_tick - now))
                continue
            next_tick += period
            t = self._session_time()

            with self._control_lock:
                throttle, steer = self._last_control
            self._vehicle, motion = sim_step(self._vehicle, throttle, steer, dt=period, t=t)

            if self._smoothed is None or alpha == 1.0:
                self._smoothed = motion
            else:
                keep = 1.0 - alpha
                self._smoothed = MotionState(
                    t=t,
                    v=alpha * motion.v + keep * self._smoothed.v,
                    a_long=alpha * motion.a_long + keep * self._smoothed.a_long,
                    a_steer=alpha * motion.a_steer + keep * self._smoothed.a_steer,
                )

            info = locate_zone(t, self._zones)
            self._prompt = step_scheduler(self._prompt, t, info)
            geom = make_frame(
                self._smoothed,
                prompt_on=self._prompt.symbol_visible,
                base_points=self._config.base_points,
                params=self._config.bend,
            )
            packet = FramePacket.from_geometry(self._seq, geom)
            self._seq += 1
            with self._session_lock:
                self._session.frames.append(packet)
            self._broadcast(json.dumps(packet.to_wire()).encode() + b"\n")

    def _broadcast(self, payload: bytes) -> None:
        with self._clients_lock:
            stale = []
            for client in self._clients:
                try:
                    client.outbox.put_nowait(payload)
                except queue.Full:
                    stale.append(client)  # slow viewer: drop, never block the clock
            for client in stale:
                self._drop_client(client)
                self._clients.remove(client)

    # ── client handling ───────────────────────────────────────────

    def _accept_loop(self) -> None:
        count = 0
        while self._running and self._sock is not None:
            try:
                conn, _ = self._sock.accept()
            except socket.timeout:
                continue
            except OSError:
                break
            count += 1
            name = "driver" if count == 1 else f"viewer-{count}"
            client = _Client(conn, name, is_driver=(count == 1))
            with self._clients_lock:
                self._clients.append(client)
            threading.Thread(
                target=self._writer_loop, args=(client,), name=f"tx-{name}", daemon=True
            ).start()
            threading.Thread(
                target=self._reader_loop, args=(client,), name=f"rx-{name}", daemon=True
            ).start()

    def _drop_client(self, client: _Client) -> None:
        client.alive = False
        try:
            client.outbox.put_nowait(None)
        except queue.Full:
            pass
        try:
            client.conn.shutdown(socket.SHUT_RDWR)
        except OSError:
            pass
        client.conn.close()

    def _writer_loop(self, client: _Client) -> None:
        while client.alive:
            payload = client.outbox.get()
            if payload is None:
                return
            try:
                client.conn.sendall(payload)
            except OSError:
                client.alive = False
                return

    def _reader_loop(self, client: _Client) -> None:
        buf = b""
        fh = client.conn
        while client.alive and self._running:
            try:
                chunk = fh.recv(4096)
            except OSError:
                break
            if not chunk:
                break
            buf += chunk
            while b"\n" in buf:
                line, buf = buf.split(b"\n", 1)
                if line.strip():
                    self._handle_message(client, line)

    def _reject(self, client: _Client, reason: str) -> None:
        # malformed input never kills the connection
        try:
            client.outbox.put_nowait(
                json.dumps({"type": "error", "reason": reason}).encode() + b"\n"
            )
        except queue.Full:
            pass

    def _handle_message(self, client: _Client, line: bytes) -> None:
        try:
            obj = json.loads(line)
        except json.JSONDecodeError:
            self._reject(client, "invalid JSON")
            return
        if not isinstance(obj, dict):
            self._reject(client, "message must be an object")
            return
        kind = obj.get("type")
        if kind == "control":
            self._handle_control(client, obj)
        elif kind == "ms":
            self._handle_ms(client, obj)
        else:
            self._reject(client, f"unknown message type {kind!r}")

    def _handle_control(self, client: _Client, obj: dict) -> None:
        if not client.is_driver:
            self._reject(client, "only the driver may send control input")
            return
        try:
            throttle = float(obj["throttle"])
            steer = float(obj["steer"])
        except (KeyError, TypeError, ValueError):
            self._reject(client, "control needs numeric throttle and steer")
            return
        if not (math.isfinite(throttle) and math.isfinite(steer)):
            self._reject(client, "control values must be finite")
            return
        t = self._session_time()
        with self._control_lock:
            self._last_control = (throttle, steer)
        with self._session_lock:
            self._session.controls.append(ControlInput(t=t, throttle=throttle, steer=steer))

    def _handle_ms(self, client: _Client, obj: dict) -> None:
        try:
            eye = int(obj["eye"])
            head = int(obj["head"])
            stomach = int(obj["stomach"])
        except (KeyError, TypeError, ValueError):
            self._reject(client, "ms needs integer eye, head and stomach")
            return
        if not all(LIKERT_MIN <= v <= LIKERT_MAX for v in (eye, head, stomach)):
            self._reject(client, f"ms components must be in [{LIKERT_MIN}, {LIKERT_MAX}]")
            return
        t = self._session_time()  # server receive time is authoritative
        prev = self._last_report_t.get(client.name)
        late = prev is not None and t - prev > REPORT_GAP_S
        self._last_report_t[client.name] = t
        report = MSReport(
            t=t, lat=math.nan, lon=math.nan, eye=eye, head=head, stomach=stomach,
            participant=client.name, gap_exceeded=late,
        )
        with self._session_lock:
            self._session.reports.append(report)


def serve(
    config: PipelineConfig | None = None,
    zones: list[ManeuverZone] | None = None,
    port: int = 0,
    host: str = "127.0.0.1",
    out_dir: str | Path | None = None,
) -> SessionServer:
    """Start a live session endpoint; returns the running server."""
    server = SessionServer(config=config, zones=zones, port=port, host=host, out_dir=out_dir)
    server.start()
    return server
