from __future__ import annotations

import json
import math

import numpy as np
import pytest

from helpers import log_line, make_sample, make_series
from simpath.errors import DataGapError, InsufficientDataError, OrderingError, ParseError
from simpath.telemetry import RawSample, despike, parse_log, resample


# ── oracles ──────────────────────────────────────────────────────────


def lerp_oracle(ts: list[float], vs: list[float], x: float) -> float:
    """Piecewise-linear interpolation, written independently of the implementation."""
    for (t0, v0), (t1, v1) in zip(zip(ts, vs), zip(ts[1:], vs[1:])):
        if t0 <= x <= t1:
            return v0 + (v1 - v0) * (x - t0) / (t1 - t0)
    raise AssertionError(f"{x} outside sample range")


def median_filter_oracle(values: list[float], window: int) -> list[float]:
    """Brute-force centered median with edge replication."""
    half = window // 2
    n = len(values)
    out = []
    for i in range(n):
        neighborhood = [values[min(max(i + k, 0), n - 1)] for k in range(-half, half + 1)]
        out.append(sorted(neighborhood)[len(neighborhood) // 2])
    return out


# ── parse_log ────────────────────────────────────────────────────────


def test_parse_single_record_maps_fields():
    line = '{"t":0.0,"ax":0,"ay":0,"az":9.81,"gx":0,"gy":0,"gz":0,"lat":34.2,"lon":108.9,"v":0}'
    (sample,) = parse_log([line])
    assert sample == RawSample(
        t=0.0, accel=(0.0, 0.0, 9.81), gyro=(0.0, 0.0, 0.0),
        gps_lat=34.2, gps_lon=108.9, gps_speed=0.0,
    )
    assert sample.accel_valid and sample.gyro_valid and sample.gps_valid


def test_parse_empty_input():
    assert parse_log([]) == []


def test_parse_rejects_out_of_order_timestamps():
    lines = [log_line(1.0), log_line(0.5)]
    with pytest.raises(OrderingError) as err:
        parse_log(lines)
    assert err.value.line_no == 2


def test_parse_rejects_duplicate_timestamps():
    with pytest.raises(OrderingError):
        parse_log([log_line(1.0), log_line(1.0)])


def test_parse_malformed_record_carries_line_number():
    with pytest.raises(ParseError) as err:
        parse_log([log_line(0.0), "{not json"])
    assert err.value.line_no == 2


@pytest.mark.parametrize("bad_t", [-1.0, float("nan"), float("inf"), None, "0.0"])
def test_parse_rejects_bad_timestamps(bad_t):
    rec = json.loads(log_line(0.0))
    rec["t"] = bad_t
    with pytest.raises(ParseError):
        parse_log([json.dumps(rec)])


def test_parse_ignores_unknown_fields():
    rec = json.loads(log_line(0.0))
    rec["battery"] = 11.9
    (sample,) = parse_log([json.dumps(rec)])
    assert sample.t == 0.0


def test_parse_missing_group_flags_invalid():
    rec = json.loads(log_line(0.0))
    del rec["lat"]
    (sample,) = parse_log([json.dumps(rec)])
    assert not sample.gps_valid
    assert sample.accel_valid and sample.gyro_valid


def test_parse_skips_blank_lines():
    assert len(parse_log([log_line(0.0), "", log_line(1.0)])) == 2


# ── resample ─────────────────────────────────────────────────────────


def test_resample_two_point_ramp():
    samples = [make_sample(0.0, gps_speed=0.0), make_sample(1.0, gps_speed=10.0)]
    series = resample(samples, 2.0)
    assert np.array_equal(series.t, [0.0, 0.5, 1.0])
    assert np.array_equal(series.speed, [0.0, 5.0, 10.0])


def test_resample_constant_channel_stays_constant():
    samples = [make_sample(t, gps_speed=7.0) for t in (0.0, 0.3, 1.1, 1.8)]
    series = resample(samples, 10.0)
    assert np.all(series.speed == 7.0)


def test_resample_matches_lerp_oracle():
    ts, vs = [0.0, 1.0, 2.0], [0.0, 10.0, 0.0]
    samples = [make_sample(t, gps_speed=v) for t, v in zip(ts, vs)]
    series = resample(samples, 4.0)
    assert series.speed[1] == pytest.approx(lerp_oracle(ts, vs, 0.25), abs=1e-12)
    assert lerp_oracle(ts, vs, 0.25) == 2.5
    for t, v in zip(series.t, series.speed):
        assert v == pytest.approx(lerp_oracle(ts, vs, float(t)), abs=1e-12)


def test_resample_idempotent_on_uniform_series():
    samples = [make_sample(0.1 + i * 0.25, gps_speed=float(i % 5)) for i in range(20)]
    first = resample(samples, 50.0)
    second = resample(first.samples(), 50.0)
    assert first.t0 == second.t0 and first.rate_hz == second.rate_hz
    for name in ("accel", "gyro", "lat", "lon", "speed"):
        assert np.array_equal(getattr(first, name), getattr(second, name))


def test_resample_needs_two_samples():
    with pytest.raises(InsufficientDataError):
        resample([make_sample(0.0)], 50.0)


def test_resample_rejects_bad_rate():
    samples = [make_sample(0.0), make_sample(1.0)]
    with pytest.raises(ValueError):
        resample(samples, 0.0)
    with pytest.raises(ValueError):
        resample(samples, 1001.0)


def test_resample_rejects_long_gaps():
    samples = [make_sample(0.0), make_sample(0.5), make_sample(3.0)]
    with pytest.raises(DataGapError):
        resample(samples, 10.0)


def test_resample_invalid_group_not_interpolated():
    samples = [
        make_sample(0.0, gyro=(0.0, 0.0, 0.0), gyro_valid=False),
        make_sample(1.0, gyro=(0.0, 0.0, 5.0), gyro_valid=False),
    ]
    series = resample(samples, 10.0)
    assert not series.gyro_valid
    assert np.all(series.gyro == 0.0)
    assert series.gps_valid


# ── despike ──────────────────────────────────────────────────────────


def test_despike_kills_single_spike():
    series = make_series(n=5, gyro_z=[0.0, 0.0, 9.0, 0.0, 0.0])
    expected = median_filter_oracle([0.0, 0.0, 9.0, 0.0, 0.0], 3)
    assert expected == [0.0, 0.0, 0.0, 0.0, 0.0]
    cleaned = despike(series, window=3, clamp=100.0)
    assert np.array_equal(cleaned.gyro[:, 2], expected)


def test_despike_window_one_with_infinite_clamp_is_identity():
    series = make_series(n=8, gyro_z=[0.0, 3.0, -7.0, 100.0, 2.0, 2.0, -1.0, 0.5])
    cleaned = despike(series, window=1, clamp=math.inf)
    assert np.array_equal(cleaned.gyro, series.gyro)
    assert np.array_equal(cleaned.accel, series.accel)


def test_despike_constant_channel_unchanged():
    series = make_series(n=10, gyro_z=5.0)
    cleaned = despike(series, window=5, clamp=100.0)
    assert np.all(cleaned.gyro[:, 2] == 5.0)


def test_despike_matches_oracle_on_random_channel(rng):
    values = list(rng.normal(0, 10, size=50))
    series = make_series(n=50, gyro_z=values)
    for window in (3, 5, 9):
        cleaned = despike(series, window=window, clamp=math.inf)
        assert np.allclose(cleaned.gyro[:, 2], median_filter_oracle(values, window), atol=0)


def test_despike_never_increases_max_abs(rng):
    for _ in range(20):
        values = rng.normal(0, 20, size=40)
        series = make_series(n=40, gyro_z=values)
        cleaned = despike(series, window=5, clamp=15.0)
        assert np.abs(cleaned.gyro[:, 2]).max() <= min(np.abs(values).max(), 15.0) + 0.0


def test_despike_clamps():
    series = make_series(n=6, accel_x=[0.0, 60.0, 60.0, 60.0, -80.0, -80.0])
    cleaned = despike(series, window=1, clamp=50.0)
    assert cleaned.accel[:, 0].max() == 50.0
    assert cleaned.accel[:, 0].min() == -50.0


def test_despike_leaves_gps_and_grid_alone():
    series = make_series(n=10, speed=3.0)
    cleaned = despike(series, window=3, clamp=1.0)
    assert np.array_equal(cleaned.speed, series.speed)
    assert cleaned.t0 == series.t0 and cleaned.rate_hz == series.rate_hz


def test_despike_rejects_even_window():
    series = make_series(n=10)
    with pytest.raises(ValueError):
        despike(series, window=4, clamp=10.0)


def test_despike_rejects_nonpositive_clamp():
    series = make_series(n=10)
    with pytest.raises(ValueError):
        despike(series, window=3, clamp=0.0)
