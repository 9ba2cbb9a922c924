"""simpath: adaptive road-bending display engine for vehicle telemetry,
plus the motion-sickness analysis suite that goes with it."""

from .analysis import (
    AnovaResult,
    HeatmapGrid,
    MSDVResult,
    MSReport,
    anova_oneway,
    heatmap,
    ms_score,
    msdv,
    pearson,
)
from .config import PipelineConfig, load_config
from .errors import SimPathError
from .geometry import (
    DEFAULT_BASE_POINTS,
    BendParams,
    FrameGeometry,
    RoadControlPoint,
    bend_coefficient,
    bend_road,
    lateral_deviation,
    make_frame,
    scene_motion,
    z_norm,
)
from .kinematics import MotionState, derive_motion, smooth
from .prompts import (
    ManeuverZone,
    PromptState,
    initial_prompt_state,
    load_route,
    locate_zone,
    step_scheduler,
)
from .server import SessionServer, serve
from .session import (
    ControlInput,
    FramePacket,
    SessionLog,
    VehicleState,
    export_session,
    import_session,
    replay,
    serialize_samples,
    session_hash,
    sim_step,
)
from .telemetry import RawSample, UniformSeries, despike, parse_log, resample

__version__ = "0.1.0"

__all__ = [
    "AnovaResult",
    "BendParams",
    "ControlInput",
    "DEFAULT_BASE_POINTS",
    "FrameGeometry",
    "FramePacket",
    "HeatmapGrid",
    "MSDVResult",
    "MSReport",
    "ManeuverZone",
    "MotionState",
    "PipelineConfig",
    "PromptState",
    "RawSample",
    "RoadControlPoint",
    "SessionLog",
    "SessionServer",
    "SimPathError",
    "UniformSeries",
    "VehicleState",
    "anova_oneway",
    "bend_coefficient",
    "bend_road",
    "derive_motion",
    "despike",
    "export_session",
    "heatmap",
    "import_session",
    "initial_prompt_state",
    "lateral_deviation",
    "load_config",
    "load_route",
    "locate_zone",
    "make_frame",
    "ms_score",
    "msdv",
    "parse_log",
    "pearson",
    "replay",
    "resample",
    "scene_motion",
    "serialize_samples",
    "serve",
    "session_hash",
    "sim_step",
    "smooth",
    "step_scheduler",
    "z_norm",
]
