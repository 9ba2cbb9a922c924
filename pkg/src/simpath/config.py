"""Pipeline configuration: display-law params plus processing rates."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

from .geometry import DEFAULT_BASE_POINTS, BendParams
from .kinematics import DEFAULT_ALPHA
from .telemetry import DEFAULT_RATE_HZ

DEFAULT_FRAME_RATE_HZ = 30.0  # display cadence anchor (camera fps in the field setup)

_BEND_KEYS = {"k", "a_min", "a_max", "brake_threshold", "camera_mode"}
_CONFIG_KEYS = {
    "bend",
    "smoothing_alpha",
    "frame_rate_hz",
    "resample_rate_hz",
    "despike_window",
    "despike_clamp",
    "base_points",
}


@dataclass(frozen=True)
class PipelineConfig:
    bend: BendParams = field(default_factory=BendParams)
    smoothing_alpha: float = DEFAULT_ALPHA
    frame_rate_hz: float = DEFAULT_FRAME_RATE_HZ
    resample_rate_hz: float = DEFAULT_RATE_HZ
    despike_window: int = 5
    despike_clamp: float = 50.0
    base_points: tuple[float, ...] = DEFAULT_BASE_POINTS

    def __post_init__(self) -> None:
        if not 0 < self.frame_rate_hz <= self.resample_rate_hz:
            raise ValueError(
                f"frame rate {self.frame_rate_hz} Hz must be positive and not exceed "
                f"the resample rate {self.resample_rate_hz} Hz"
            )

    def to_document(self) -> dict:
        return {
            "bend": {
                "k": self.bend.k,
                "a_min": self.bend.a_min,
                "a_max": self.bend.a_max,
                "brake_threshold": self.bend.brake_threshold,
                "camera_mode": self.bend.camera_mode,
            },
            "smoothing_alpha": self.smoothing_alpha,
            "frame_rate_hz": self.frame_rate_hz,
            "resample_rate_hz": self.resample_rate_hz,
            "despike_window": self.despike_window,
            "despike_clamp": self.despike_clamp,
            "base_points": list(self.base_points),
        }


def load_config(source: str | Path | dict | None = None) -> PipelineConfig:
    """Build a PipelineConfig from a JSON file or dict; unknown keys are rejected."""
    if source is None:
        return PipelineConfig()
    if isinstance(source, (str, Path)):
        doc = json.loads(Path(source).read_text())
    else:
        doc = source
    if not isinstance(doc, dict):
        raise ValueError("config document must be a JSON object")

    unknown = set(doc) - _CONFIG_KEYS
    if unknown:
        raise ValueError(f"unknown config keys: {sorted(unknown)}")

    bend_doc = doc.get("bend", {})
    unknown_bend = set(bend_doc) - _BEND_KEYS
    if unknown_bend:
        raise ValueError(f"unknown bend keys: {sorted(unknown_bend)}")

    defaults = PipelineConfig()
    return PipelineConfig(
        bend=BendParams(**{**defaults.to_document()["bend"], **bend_doc}),
        smoothing_alpha=float(doc.get("smoothing_alpha", defaults.smoothing_alpha)),
        frame_rate_hz=float(doc.get("frame_rate_hz", defaults.frame_rate_hz)),
        resample_rate_hz=float(doc.get("resample_rate_hz", defaults.resample_rate_hz)),
        despike_window=int(doc.get("despike_window", defaults.despike_window)),
        despike_clamp=float(doc.get("despike_clamp", defaults.despike_clamp)),
        base_points=tuple(float(y) for y in doc.get("base_points", defaults.base_points)),
    )
