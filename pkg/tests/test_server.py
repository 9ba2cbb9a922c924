from __future__ import annotations

import json
import socket
import time

import pytest

from simpath.config import PipelineConfig
from simpath.prompts import ManeuverZone
from simpath.server import serve
from simpath.session import import_session

CFG = PipelineConfig(frame_rate_hz=50.0, resample_rate_hz=50.0)


class Client:
    def __init__(self, port: int):
        self.sock = socket.create_connection(("127.0.0.1", port), timeout=5.0)
        self.sock.settimeout(5.0)
        self.fh = self.sock.makefile("r", encoding="utf-8")

    def send(self, obj: dict) -> None:
        self.sock.sendall((json.dumps(obj) + "\n").encode())

    def send_raw(self, payload: str) -> None:
        self.sock.sendall(payload.encode())

    def next_message(self, kind: str | None = None) -> dict:
        deadline = time.monotonic() + 5.0
        while time.monotonic() < deadline:
            obj = json.loads(self.fh.readline())
            if kind is None or obj.get("type") == kind:
                return obj
        raise TimeoutError(f"no {kind} message")

    def frames(self, n: int) -> list[dict]:
        return [self.next_message("frame") for _ in range(n)]

    def close(self) -> None:
        self.sock.close()


@pytest.fixture
def server(tmp_path):
    srv = serve(config=CFG, out_dir=tmp_path / "live")
    yield srv
    srv.stop()


def test_broadcast_identical_packets_to_all_viewers(server):
    driver = Client(server.port)
    viewer = Client(server.port)
    try:
        a = {f["seq"]: f for f in driver.frames(20)}
        b = {f["seq"]: f for f in viewer.frames(20)}
        shared = sorted(set(a) & set(b))
        assert len(shared) >= 10
        for seq in shared:
            assert a[seq] == b[seq]
        # gapless per receiver
        seqs = sorted(a)
        assert seqs == list(range(seqs[0], seqs[0] + len(seqs)))
    finally:
        driver.close()
        viewer.close()


def test_driver_input_held_between_messages(server):
    driver = Client(server.port)
    try:
        driver.send({"type": "control", "throttle": 2.0, "steer": 0.0})
        driver.frames(10)  # let the input take effect
        early = driver.next_message("frame")
        driver.frames(20)  # no further input: previous command held
        late = driver.next_message("frame")
        assert late["scene_speed"] > early["scene_speed"] > 0.0
    finally:
        driver.close()


def test_viewer_control_rejected(server):
    driver = Client(server.port)
    viewer = Client(server.port)
    try:
        viewer.send({"type": "control", "throttle": 2.0, "steer": 0.0})
        err = viewer.next_message("error")
        assert "driver" in err["reason"]
        # vehicle stays put
        viewer.frames(10)
        assert viewer.next_message("frame")["scene_speed"] == 0.0
    finally:
        driver.close()
        viewer.close()


def test_ms_report_persisted_with_receive_time(server, tmp_path):
    driver = Client(server.port)
    driver.frames(2)
    driver.send({"type": "ms", "eye": 1, "head": 1, "stomach": 1})
    driver.frames(10)  # give the reader thread time to ingest
    driver.close()
    path = server.stop()
    log = import_session(path)
    assert len(log.reports) == 1
    report = log.reports[0]
    assert (report.eye, report.head, report.stomach) == (1, 1, 1)
    assert report.participant == "driver"
    assert report.t > 0.0
    assert not report.gap_exceeded


def test_malformed_message_keeps_connection(server):
    driver = Client(server.port)
    try:
        driver.send_raw("this is not json\n")
        assert driver.next_message("error")["reason"] == "invalid JSON"
        driver.send({"type": "ms", "eye": 9, "head": 0, "stomach": 0})
        assert "ms components" in driver.next_message("error")["reason"]
        driver.send({"type": "nonsense"})
        assert "unknown" in driver.next_message("error")["reason"]
        # connection is still serving frames
        assert driver.next_message("frame")["seq"] >= 0
    finally:
        driver.close()


def test_persisted_live_session_passes_integrity(server):
    driver = Client(server.port)
    driver.send({"type": "control", "throttle": 1.0, "steer": 2.0})
    driver.frames(15)
    driver.close()
    path = server.stop()
    log = import_session(path)
    assert log.header["mode"] == "live"
    assert len(log.frames) >= 15
    assert [f.seq for f in log.frames] == list(range(len(log.frames)))
    assert len(log.controls) == 1


def test_zone_prompt_fires_live(tmp_path):
    zones = [ManeuverZone(kind="turn", entry_t=0.5, end_t=1.0)]
    srv = serve(config=CFG, zones=zones, out_dir=tmp_path / "live2")
    client = Client(srv.port)
    try:
        frames = client.frames(60)  # ~1.2 s
        assert any(f["prompt_on"] for f in frames)
    finally:
        client.close()
        srv.stop()


def test_port_busy_is_a_startup_error():
    srv = serve(config=CFG)
    try:
        with pytest.raises(OSError):
            serve(config=CFG, port=srv.port)
    finally:
        srv.stop()


def test_report_gap_flagged(server, monkeypatch):
    import simpath.server as server_mod

    monkeypatch.setattr(server_mod, "REPORT_GAP_S", 0.05)
    driver = Client(server.port)
    driver.send({"type": "ms", "eye": 1, "head": 0, "stomach": 0})
    driver.frames(10)  # > 0.05 s at 50 Hz
    driver.send({"type": "ms", "eye": 2, "head": 0, "stomach": 0})
    driver.frames(5)
    driver.close()
    path = server.stop()
    log = import_session(path)
    assert [r.gap_exceeded for r in log.reports] == [False, True]
