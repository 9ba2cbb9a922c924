"""Command-line entry point: replay, analyze, serve."""

from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path

from . import analysis, session, telemetry
from .config import load_config
from .errors import SimPathError
from .prompts import load_route
from .server import serve

TELEMETRY_FILE = session.TELEMETRY_FILENAME


def _cmd_replay(args: argparse.Namespace) -> int:
    cfg = load_config(args.params)
    with open(args.ride) as fh:
        samples = telemetry.parse_log(fh)
    series = telemetry.despike(
        telemetry.resample(samples, cfg.resample_rate_hz),
        window=cfg.despike_window,
        clamp=cfg.despike_clamp,
    )
    log = session.replay(samples, args.route, cfg)

    out = Path(args.out)
    path = session.export_session(log, out)
    with open(out / TELEMETRY_FILE, "w") as fh:
        for line in session.serialize_samples(series.samples()):
            fh.write(line)
            fh.write("\n")

    print(f"replayed {len(log.frames)} frames over {series.duration_s:.1f} s")
    print(f"session hash {session.session_hash(log)}")
    print(f"wrote {path} and {out / TELEMETRY_FILE}")
    return 0


def _load_session_dir(path: str) -> tuple[session.SessionLog, Path]:
    directory = Path(path)
    return session.import_session(directory), directory


def _cmd_analyze_msdv(args: argparse.Namespace) -> int:
    log, directory = _load_session_dir(args.session)
    telemetry_path = directory / TELEMETRY_FILE
    if not telemetry_path.exists():
        print(f"error: {telemetry_path} not found (produced by `simpath replay`)", file=sys.stderr)
        return 2
    rate = float(log.header["config"]["resample_rate_hz"])
    with open(telemetry_path) as fh:
        series = telemetry.resample(telemetry.parse_log(fh), rate)
    weighting = args.weighting == "on"
    print(f"axis  msdv[m/s^1.5]  duration[s]  weighting={args.weighting}")
    for axis in analysis.AXES:
        result = analysis.msdv(series, axis, weighting=weighting)
        print(f"{result.axis:<4}  {result.value:13.4f}  {result.duration:11.1f}")
    return 0


def _cmd_analyze_heatmap(args: argparse.Namespace) -> int:
    log, _ = _load_session_dir(args.session)
    grid = analysis.heatmap(log.reports, cell_size_m=args.cell_size)
    doc = json.dumps(grid.to_document(), indent=2)
    if args.out:
        Path(args.out).write_text(doc + "\n")
        print(f"wrote {args.out} ({len(grid.cells)} cells, {grid.skipped} skipped)")
    else:
        print(doc)
    return 0


def _cmd_analyze_stats(args: argparse.Namespace) -> int:
    log, _ = _load_session_dir(args.session)
    if not log.reports:
        print("no MS reports in session")
        return 0

    by_participant: dict[str, list[float]] = {}
    for report in log.reports:
        by_participant.setdefault(report.participant, []).append(analysis.ms_score(report))

    for name, scores in sorted(by_participant.items()):
        mean = sum(scores) / len(scores)
        print(f"{name}: n={len(scores)} mean_ms={mean:.2f}")

    groups = [s for s in by_participant.values() if len(s) >= 2]
    if len(groups) >= 2:
        result = analysis.anova_oneway(groups)
        print(f"anova across participants: F({result.df_between},{result.df_within})"
              f"={result.F:.3f}")
    else:
        print("anova skipped: need >=2 participants with >=2 reports each")

    times = [r.t for r in log.reports]
    scores = [analysis.ms_score(r) for r in log.reports]
    try:
        r = analysis.pearson(times, scores)
        print(f"pearson(t, ms): r={r:.3f}")
    except ValueError as exc:
        print(f"pearson skipped: {exc}")
    return 0


def _cmd_serve(args: argparse.Namespace) -> int:
    cfg = load_config(args.params)
    zones = load_route(args.route) if args.route else []
    server = serve(config=cfg, zones=zones, port=args.port, host=args.host, out_dir=args.out)
    print(f"serving on {args.host}:{server.port} at {cfg.frame_rate_hz:.0f} Hz "
          f"({len(zones)} zones); Ctrl-C to stop")
    try:
        while True:
            time.sleep(0.5)
    except KeyboardInterrupt:
        pass
    path = server.stop()
    if path is not None:
        print(f"session persisted to {path}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="simpath")
    sub = parser.add_subparsers(dest="command", required=True)

    p_replay = sub.add_parser("replay", help="run a ride log through the pipeline")
    p_replay.add_argument("--ride", required=True, help="ride log (JSON Lines)")
    p_replay.add_argument("--route", default=None, help="route file with maneuver zones")
    p_replay.add_argument("--params", default=None, help="pipeline config JSON")
    p_replay.add_argument("--out", required=True, help="output session directory")
    p_replay.set_defaults(func=_cmd_replay)

    p_analyze = sub.add_parser("analyze", help="offline metrics on a recorded session")
    a_sub = p_analyze.add_subparsers(dest="metric", required=True)

    p_msdv = a_sub.add_parser("msdv", help="motion sickness dose value per axis")
    p_msdv.add_argument("--session", required=True)
    p_msdv.add_argument("--weighting", choices=("on", "off"), default="off")
    p_msdv.set_defaults(func=_cmd_analyze_msdv)

    p_heat = a_sub.add_parser("heatmap", help="MS-modification heatmap grid")
    p_heat.add_argument("--session", required=True)
    p_heat.add_argument("--cell-size", type=float, default=analysis.DEFAULT_CELL_SIZE_M)
    p_heat.add_argument("--out", default=None)
    p_heat.set_defaults(func=_cmd_analyze_heatmap)

    p_stats = a_sub.add_parser("stats", help="group statistics over MS reports")
    p_stats.add_argument("--session", required=True)
    p_stats.set_defaults(func=_cmd_analyze_stats)

    p_serve = sub.add_parser("serve", help="live cockpit endpoint")
    p_serve.add_argument("--port", type=int, default=7677)
    p_serve.add_argument("--host", default="127.0.0.1")
    p_serve.add_argument("--route", default=None)
    p_serve.add_argument("--params", default=None)
    p_serve.add_argument("--out", default=None, help="persist the session here on exit")
    p_serve.set_defaults(func=_cmd_serve)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (SimPathError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
