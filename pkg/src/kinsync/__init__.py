"""Kinematics-driven alignment and synchronization of recorded trial videos."""

from .errors import KinsyncError, ParseError, RenderError
from .series import MultivariateTimeSeries
from .dtw import WarpingPath, cost_matrix, dtw, dtw_cost
from .dba import (
    AverageSeries,
    CompactAlignment,
    compact_alignment,
    dba,
    dba_iterate,
    initialize_average,
)
from .nlts import DilationMap, apply_dilation, dilation_maps, nlts
from .kinio import (
    DEFAULT_CHANNELS,
    ChannelSelection,
    MetaRecord,
    SkillClass,
    TrialRecord,
    load_kinematics,
    load_meta,
)
from .sync import (
    FrameSchedule,
    multi_schedules,
    pairwise_schedules,
    read_schedule,
    render,
    write_schedule,
)
from .analyze import CubicFit, ScorePair, emit_fit_report, polyfit3, score_pairs

__all__ = [
    "AverageSeries",
    "ChannelSelection",
    "CompactAlignment",
    "CubicFit",
    "DEFAULT_CHANNELS",
    "DilationMap",
    "FrameSchedule",
    "KinsyncError",
    "MetaRecord",
    "MultivariateTimeSeries",
    "ParseError",
    "RenderError",
    "ScorePair",
    "SkillClass",
    "TrialRecord",
    "WarpingPath",
    "apply_dilation",
    "compact_alignment",
    "cost_matrix",
    "dba",
    "dba_iterate",
    "dilation_maps",
    "dtw",
    "dtw_cost",
    "emit_fit_report",
    "initialize_average",
    "load_kinematics",
    "load_meta",
    "multi_schedules",
    "nlts",
    "pairwise_schedules",
    "polyfit3",
    "read_schedule",
    "render",
    "score_pairs",
    "write_schedule",
]

__version__ = "0.1.0"
