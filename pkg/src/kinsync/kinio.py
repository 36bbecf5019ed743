"""Readers for kinematic recordings and trial metadata.

Kinematic files are whitespace-separated text, one row per sample. The
robot-captured corpus this targets stores 76 variables per row at 30 Hz;
by default only the six tool-tip position columns of the two patient-side
manipulators are loaded (x, y, z of each, columns 38-40 and 57-59), but any
column selection works. Metadata files carry one trial per line with a
trial id, a skill letter and an OSATS-style score at configurable field
positions.
"""

from __future__ import annotations

import enum
import math
import warnings
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import ParseError
from .series import MultivariateTimeSeries

__all__ = [
    "DEFAULT_CHANNELS",
    "ChannelSelection",
    "MetaRecord",
    "SkillClass",
    "TrialRecord",
    "load_kinematics",
    "load_meta",
]


@dataclass(frozen=True)
class ChannelSelection:
    """Which file columns to load, in the order they should appear."""

    column_indices: tuple

    def __post_init__(self):
        indices = tuple(int(i) for i in self.column_indices)
        if not indices:
            raise ValueError("channel selection cannot be empty")
        if any(i < 0 for i in indices):
            raise ValueError(f"channel indices must be >= 0, got {indices}")
        if len(set(indices)) != len(indices):
            raise ValueError(f"channel indices must be distinct, got {indices}")
        object.__setattr__(self, "column_indices", indices)

    def __len__(self):
        return len(self.column_indices)


# tool-tip positions of the two patient-side manipulators (x, y, z each)
DEFAULT_CHANNELS = ChannelSelection((38, 39, 40, 57, 58, 59))


class SkillClass(enum.Enum):
    NOVICE = "Novice"
    INTERMEDIATE = "Intermediate"
    EXPERT = "Expert"
    UNKNOWN = "Unknown"

    @classmethod
    def from_letter(cls, letter: str) -> "SkillClass":
        """Map the single-letter coding N/I/E; anything else warns -> UNKNOWN."""
        known = {"N": cls.NOVICE, "I": cls.INTERMEDIATE, "E": cls.EXPERT}
        skill = known.get(letter.strip().upper())
        if skill is None:
            warnings.warn(
                f"unknown skill letter {letter!r}, recording as Unknown",
                stacklevel=2,
            )
            return cls.UNKNOWN
        return skill


class MetaRecord(NamedTuple):
    trial_id: str
    skill: SkillClass
    score: int


@dataclass(frozen=True, eq=False)
class TrialRecord:
    """One recorded trial: kinematics plus whatever metadata is known."""

    id: str
    series: MultivariateTimeSeries
    video_path: str | None = None
    subject: str = ""
    skill_class: SkillClass = SkillClass.UNKNOWN
    osats_score: int | None = None

    def __post_init__(self):
        if not self.id:
            raise ValueError("trial id cannot be empty")
        if self.osats_score is not None and self.osats_score < 0:
            raise ValueError(f"osats_score must be >= 0, got {self.osats_score}")


def load_kinematics(
    path,
    channels: ChannelSelection = DEFAULT_CHANNELS,
    sample_rate_hz: float = 30.0,
    normalize: bool = False,
) -> MultivariateTimeSeries:
    """Load selected columns of a whitespace-separated kinematics file.

    Parameters
    ----------
    path : str or Path
        Text file, one sample per line. Trailing blank lines are ignored;
        a blank line inside the data block is an error.
    channels : ChannelSelection
        Columns to keep, in order. Only selected columns are parsed as
        numbers; every row must still have the same total column count.
    sample_rate_hz : float
        Recording rate stored on the returned series (30 Hz native).
    normalize : bool
        When true, z-normalize each selected channel over the trial
        (constant channels become all zeros).

    Raises
    ------
    ParseError
        Naming the file and 1-based line of the first malformed row.
    """
    if not isinstance(channels, ChannelSelection):
        channels = ChannelSelection(tuple(channels))
    columns = channels.column_indices
    with open(path, "r", encoding="utf-8") as handle:
        lines = handle.readlines()
    while lines and not lines[-1].strip():
        lines.pop()
    if not lines:
        raise ParseError(path, "no kinematic rows found")
    values = np.empty((len(lines), len(columns)), dtype=np.float64)
    width = None
    for lineno, line in enumerate(lines, 1):
        tokens = line.split()
        if not tokens:
            raise ParseError(path, "blank line inside the data block", lineno=lineno)
        if width is None:
            width = len(tokens)
            worst = max(columns)
            if worst >= width:
                raise ParseError(
                    path,
                    f"channel {worst} requested but rows have {width} columns",
                    lineno=lineno,
                )
        elif len(tokens) != width:
            raise ParseError(
                path,
                f"expected {width} columns, found {len(tokens)}",
                lineno=lineno,
            )
        for out_col, col in enumerate(columns):
            token = tokens[col]
            try:
                number = float(token)
            except ValueError:
                raise ParseError(
                    path, f"bad number {token!r} in column {col}", lineno=lineno
                ) from None
            if not math.isfinite(number):
                raise ParseError(
                    path,
                    f"value {token!r} in column {col} is not finite",
                    lineno=lineno,
                )
            values[lineno - 1, out_col] = number
    if normalize:
        mean = values.mean(axis=0)
        std = values.std(axis=0)
        std[std == 0] = 1.0
        values = (values - mean) / std
    return MultivariateTimeSeries(values, sample_rate_hz)


def load_meta(path, id_field: int = 0, skill_field: int = 1, score_field: int = 2):
    """Parse a metadata file into a list of MetaRecord, one per non-empty line.

    Fields are whitespace-separated; the three field positions are 0-based
    and configurable because different corpora order their columns
    differently. Scores must be non-negative integers.
    """
    needed = max(id_field, skill_field, score_field)
    records = []
    with open(path, "r", encoding="utf-8") as handle:
        for lineno, line in enumerate(handle, 1):
            tokens = line.split()
            if not tokens:
                continue
            if len(tokens) <= needed:
                raise ParseError(
                    path,
                    f"need at least {needed + 1} fields, found {len(tokens)}",
                    lineno=lineno,
                )
            score_token = tokens[score_field]
            try:
                score = int(score_token)
            except ValueError:
                raise ParseError(
                    path,
                    f"score must be an integer, got {score_token!r}",
                    lineno=lineno,
                ) from None
            if score < 0:
                raise ParseError(
                    path, f"score must be >= 0, got {score}", lineno=lineno
                )
            records.append(
                MetaRecord(
                    trial_id=tokens[id_field],
                    skill=SkillClass.from_letter(tokens[skill_field]),
                    score=score,
                )
            )
    return records
