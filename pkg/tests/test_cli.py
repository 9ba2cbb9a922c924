from __future__ import annotations

import json
from pathlib import Path

import pytest

from simpath.cli import main
from simpath.session import import_session

RIDE = Path(__file__).resolve().parent.parent / "data" / "synthetic_ride.jsonl"
ROUTE = Path(__file__).resolve().parent.parent / "data" / "synthetic_route.json"


@pytest.fixture
def session_dir(tmp_path):
    out = tmp_path / "session"
    code = main(["replay", "--ride", str(RIDE), "--out", str(out)])
    assert code == 0
    return out


def test_replay_writes_session_and_telemetry(session_dir, capsys):
    assert (session_dir / "session.jsonl").exists()
    assert (session_dir / "telemetry.jsonl").exists()
    log = import_session(session_dir)
    assert len(log.frames) == 1801


def test_replay_with_bundled_route(tmp_path):
    # the ride's turn and braking zones touch, so they merge into one
    # prompt episode [20, 45.5] -> symbol active over [17, 46.5)
    out = tmp_path / "session"
    assert main(["replay", "--ride", str(RIDE), "--route", str(ROUTE),
                 "--out", str(out)]) == 0
    log = import_session(out)
    on = [f.t for f in log.frames if f.prompt_on]
    assert min(on) == pytest.approx(17.0, abs=0.04)
    assert max(on) < 46.5
    idle = [f for f in log.frames if f.t < 16.9 or f.t > 46.5]
    assert all(not f.prompt_on for f in idle)


def test_replay_with_route_and_params(tmp_path):
    route = tmp_path / "route.json"
    route.write_text(json.dumps({"zones": [{"kind": "turn", "entry_t": 20.0, "end_t": 40.0}]}))
    params = tmp_path / "params.json"
    params.write_text(json.dumps({"frame_rate_hz": 25}))
    out = tmp_path / "session"
    assert main(["replay", "--ride", str(RIDE), "--route", str(route),
                 "--params", str(params), "--out", str(out)]) == 0
    log = import_session(out)
    assert log.header["config"]["frame_rate_hz"] == 25.0
    assert any(f.prompt_on for f in log.frames)


def test_analyze_msdv(session_dir, capsys):
    assert main(["analyze", "msdv", "--session", str(session_dir)]) == 0
    off = capsys.readouterr().out
    assert "X" in off and "Y" in off and "Z" in off
    assert main(["analyze", "msdv", "--session", str(session_dir), "--weighting", "on"]) == 0
    on = capsys.readouterr().out
    assert "weighting=on" in on


def test_analyze_heatmap(session_dir, tmp_path, capsys):
    out_file = tmp_path / "heat.json"
    assert main(["analyze", "heatmap", "--session", str(session_dir),
                 "--out", str(out_file)]) == 0
    doc = json.loads(out_file.read_text())
    assert doc["cell_size"] == 25.0
    assert doc["cells"] == []  # replay sessions carry no MS reports


def test_analyze_stats(session_dir, capsys):
    assert main(["analyze", "stats", "--session", str(session_dir)]) == 0
    assert "no MS reports" in capsys.readouterr().out


@pytest.fixture
def reported_session(tmp_path):
    import math

    from simpath.analysis import MSReport
    from simpath.session import export_session, replay

    log = replay(str(RIDE))

    def rep(t, participant, eye):
        return MSReport(t=t, lat=34.2, lon=108.9, eye=eye, head=0, stomach=0,
                        participant=participant)

    log.reports = [
        rep(5.0, "driver", 0), rep(35.0, "driver", 2), rep(55.0, "driver", 3),
        rep(6.0, "viewer-2", 1), rep(36.0, "viewer-2", 2),
        MSReport(t=58.0, lat=math.nan, lon=math.nan, eye=4, head=0, stomach=0,
                 participant="viewer-2"),
    ]
    log.reports.sort(key=lambda r: r.t)
    out = tmp_path / "reported"
    export_session(log, out)
    return out


def test_analyze_stats_with_reports(reported_session, capsys):
    assert main(["analyze", "stats", "--session", str(reported_session)]) == 0
    out = capsys.readouterr().out
    assert "driver: n=3" in out
    assert "viewer-2: n=3" in out
    assert "anova across participants: F(1,4)" in out
    assert "pearson(t, ms): r=" in out


def test_analyze_heatmap_with_reports(reported_session, capsys):
    assert main(["analyze", "heatmap", "--session", str(reported_session)]) == 0
    doc = json.loads(capsys.readouterr().out)
    # driver changed twice at a fixed position; viewer-2 changed once
    # there and once without a position
    assert sum(c["count"] for c in doc["cells"]) == 3
    assert doc["skipped"] == 1


def test_error_surfaces_as_exit_code(tmp_path, capsys):
    assert main(["replay", "--ride", str(tmp_path / "missing.jsonl"),
                 "--out", str(tmp_path / "o")]) == 1
    assert "error:" in capsys.readouterr().err
