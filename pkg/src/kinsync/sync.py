"""Frame schedules: turning alignments into playable synchronized videos.

A schedule says, for every output frame, which source video frame to show
and whether it is a held (duplicated) frame. Schedules serialize to a small
text format that round-trips byte for byte:

    trial_id=<id>
    fps=<frames per second>
    <output>,<source>,<dup>      one line per output frame, dup is 0 or 1

Rendering shells out to an ffmpeg-style encoder; see :func:`render`.
"""

from __future__ import annotations

import os
import shutil
import subprocess
import tempfile
from dataclasses import dataclass

import numpy as np

from .dtw import dtw
from .errors import ParseError, RenderError
from .kinio import TrialRecord
from .nlts import nlts

__all__ = [
    "FrameSchedule",
    "multi_schedules",
    "pairwise_schedules",
    "read_schedule",
    "render",
    "write_schedule",
]


@dataclass(frozen=True, eq=False)
class FrameSchedule:
    """Playback recipe for one video.

    Output frame k shows ``source_frames[k]`` (0-based). Source frames never
    decrease, the first is 0, and ``duplicated[k]`` is set exactly when entry
    k repeats the previous entry's source frame.
    """

    trial_id: str
    fps: float
    source_frames: np.ndarray
    duplicated: np.ndarray

    def __post_init__(self):
        if not self.trial_id:
            raise ValueError("trial_id cannot be empty")
        fps = float(self.fps)
        if not fps > 0:
            raise ValueError(f"fps must be positive, got {self.fps!r}")
        sources = np.array(self.source_frames, dtype=np.int64, copy=True)
        dup = np.array(self.duplicated, dtype=bool, copy=True)
        if sources.ndim != 1 or dup.shape != sources.shape or sources.size == 0:
            raise ValueError("source_frames and duplicated must be equal-length 1-D")
        if sources[0] != 0:
            raise ValueError(f"first source frame must be 0, got {sources[0]}")
        if (np.diff(sources) < 0).any():
            raise ValueError("source frames must never decrease")
        expected = np.zeros(sources.shape, dtype=bool)
        expected[1:] = sources[1:] == sources[:-1]
        if not np.array_equal(dup, expected):
            raise ValueError("duplicated flags disagree with source frame repeats")
        sources.setflags(write=False)
        dup.setflags(write=False)
        object.__setattr__(self, "fps", fps)
        object.__setattr__(self, "source_frames", sources)
        object.__setattr__(self, "duplicated", dup)

    def __len__(self):
        return int(self.source_frames.size)


def _schedule_from_sources(trial: TrialRecord, sources: np.ndarray) -> FrameSchedule:
    dup = np.zeros(sources.shape, dtype=bool)
    dup[1:] = sources[1:] == sources[:-1]
    return FrameSchedule(
        trial_id=trial.id,
        fps=trial.series.sample_rate_hz,
        source_frames=sources,
        duplicated=dup,
    )


def pairwise_schedules(a: TrialRecord, b: TrialRecord, window=None):
    """Schedules synchronizing two trials against each other.

    Both schedules follow the optimal alignment path, so they have the same
    length and every source frame of both videos appears at least once.
    """
    path = dtw(a.series, b.series, window=window)
    return (
        _schedule_from_sources(a, path.steps[:, 0]),
        _schedule_from_sources(b, path.steps[:, 1]),
    )


def multi_schedules(trials, max_iterations: int = 10, rel_tolerance: float = 1e-6):
    """Schedules synchronizing any number of trials onto a shared time base.

    Every schedule has the length of the longest trial. Unlike the pairwise
    case a schedule may skip source frames where a trial locally outpaces
    the group average; first and last frames always survive.
    """
    trials = list(trials)
    if len(trials) < 2:
        raise ValueError(f"need at least 2 trials to synchronize, got {len(trials)}")
    seen = set()
    for trial in trials:
        if trial.id in seen:
            raise ValueError(f"duplicate trial id {trial.id!r}")
        seen.add(trial.id)
    _, maps = nlts(
        [t.series for t in trials],
        max_iterations=max_iterations,
        rel_tolerance=rel_tolerance,
    )
    return [
        FrameSchedule(
            trial_id=trial.id,
            fps=trial.series.sample_rate_hz,
            source_frames=dilation.source_index,
            duplicated=dilation.is_duplicate,
        )
        for trial, dilation in zip(trials, maps)
    ]


def write_schedule(schedule: FrameSchedule, path) -> None:
    """Serialize a schedule; identical schedules produce identical bytes."""
    lines = [f"trial_id={schedule.trial_id}", f"fps={schedule.fps!r}"]
    for k in range(len(schedule)):
        dup = 1 if schedule.duplicated[k] else 0
        lines.append(f"{k},{schedule.source_frames[k]},{dup}")
    with open(path, "w", encoding="utf-8", newline="\n") as handle:
        handle.write("\n".join(lines))
        handle.write("\n")


def read_schedule(path) -> FrameSchedule:
    """Parse a schedule file, failing loudly with file and line on bad input."""
    with open(path, "r", encoding="utf-8") as handle:
        lines = handle.read().split("\n")
    while lines and not lines[-1].strip():
        lines.pop()
    if not lines:
        raise ParseError(path, "empty schedule file")
    if not lines[0].startswith("trial_id="):
        raise ParseError(path, "first line must be trial_id=<id>", lineno=1)
    trial_id = lines[0].split("=", 1)[1]
    if not trial_id:
        raise ParseError(path, "trial_id cannot be empty", lineno=1)
    if len(lines) < 2 or not lines[1].startswith("fps="):
        raise ParseError(path, "second line must be fps=<rate>", lineno=2)
    if len(lines) < 3:
        raise ParseError(path, "schedule has no entries", lineno=3)
    try:
        fps = float(lines[1].split("=", 1)[1])
    except ValueError:
        raise ParseError(path, f"bad fps value {lines[1]!r}", lineno=2) from None
    if not fps > 0:
        raise ParseError(path, f"fps must be positive, got {fps}", lineno=2)
    sources = np.empty(len(lines) - 2, dtype=np.int64)
    duplicated = np.empty(len(lines) - 2, dtype=bool)
    for k, line in enumerate(lines[2:]):
        lineno = k + 3
        parts = line.split(",")
        if len(parts) != 3:
            raise ParseError(
                path, "entries need output,source,dup", lineno=lineno
            )
        try:
            output, source, dup = (int(p) for p in parts)
        except ValueError:
            raise ParseError(
                path, f"entry fields must be integers, got {line!r}", lineno=lineno
            ) from None
        if output != k:
            raise ParseError(
                path,
                f"output frames must count 0,1,2,... without gaps; "
                f"expected {k}, got {output}",
                lineno=lineno,
            )
        if dup not in (0, 1):
            raise ParseError(path, f"dup flag must be 0 or 1, got {dup}", lineno=lineno)
        if k == 0:
            if source != 0:
                raise ParseError(
                    path, f"first source frame must be 0, got {source}", lineno=lineno
                )
        else:
            if source < sources[k - 1]:
                raise ParseError(
                    path,
                    f"source frames must never decrease ({sources[k - 1]} -> {source})",
                    lineno=lineno,
                )
        if bool(dup) != (k > 0 and source == sources[k - 1]):
            raise ParseError(
                path, "dup flag disagrees with the source frame repeat", lineno=lineno
            )
        sources[k] = source
        duplicated[k] = bool(dup)
    return FrameSchedule(
        trial_id=trial_id, fps=fps, source_frames=sources, duplicated=duplicated
    )


def _run_encoder(command):
    result = subprocess.run(command, capture_output=True, text=True)
    if result.returncode != 0:
        detail = result.stderr.strip() or result.stdout.strip() or "no output"
        raise RenderError(
            f"{os.path.basename(command[0])} failed ({result.returncode}): {detail[-2000:]}"
        )


def render(
    schedule: FrameSchedule,
    video_path,
    out_path,
    grayscale_held: bool = False,
    encoder: str = "ffmpeg",
):
    """Re-time a source video so it plays back following the schedule.

    The encoder must accept ffmpeg's argument conventions; pass an explicit
    executable path to use something other than the ``ffmpeg`` on PATH.
    Three invocations are made:

    1. ``<enc> -v error -y -i <video> -vsync 0 <tmp>/color/%08d.png``
    2. the same with ``-vf hue=s=0`` into ``gray/`` (only when
       ``grayscale_held`` and the schedule holds any frame)
    3. ``<enc> -v error -y -framerate <fps> -i <tmp>/seq/%08d.png
       -frames:v <len> -pix_fmt yuv420p <out>``

    where ``seq/`` links frame files in schedule order, taking held frames
    from ``gray/`` when requested. The output therefore has exactly one
    frame per schedule entry; nothing is re-timed by the encoder itself.
    """
    executable = shutil.which(str(encoder))
    if executable is None:
        raise RenderError(
            f"video encoder {encoder!r} not found; install ffmpeg or pass the "
            "path of an ffmpeg-compatible executable"
        )
    video_path = str(video_path)
    out_path = str(out_path)
    if not os.path.exists(video_path):
        raise RenderError(f"video not found: {video_path}")
    with tempfile.TemporaryDirectory(prefix="kinsync-render-") as tmp:
        color_dir = os.path.join(tmp, "color")
        os.mkdir(color_dir)
        _run_encoder(
            [
                executable, "-v", "error", "-y", "-i", video_path,
                "-vsync", "0", os.path.join(color_dir, "%08d.png"),
            ]
        )
        available = len(os.listdir(color_dir))
        needed = int(schedule.source_frames[-1]) + 1
        if available < needed:
            raise RenderError(
                f"video {video_path} decodes to {available} frames but the "
                f"schedule needs {needed}"
            )
        gray_dir = None
        if grayscale_held and bool(schedule.duplicated.any()):
            gray_dir = os.path.join(tmp, "gray")
            os.mkdir(gray_dir)
            _run_encoder(
                [
                    executable, "-v", "error", "-y", "-i", video_path,
                    "-vsync", "0", "-vf", "hue=s=0",
                    os.path.join(gray_dir, "%08d.png"),
                ]
            )
        seq_dir = os.path.join(tmp, "seq")
        os.mkdir(seq_dir)
        for k in range(len(schedule)):
            held = bool(schedule.duplicated[k])
            source_dir = gray_dir if (gray_dir is not None and held) else color_dir
            target = os.path.join(source_dir, "%08d.png" % (schedule.source_frames[k] + 1))
            link = os.path.join(seq_dir, "%08d.png" % (k + 1))
            try:
                os.symlink(target, link)
            except OSError:
                shutil.copyfile(target, link)
        _run_encoder(
            [
                executable, "-v", "error", "-y",
                "-framerate", repr(schedule.fps),
                "-i", os.path.join(seq_dir, "%08d.png"),
                "-frames:v", str(len(schedule)),
                "-pix_fmt", "yuv420p",
                out_path,
            ]
        )
    return out_path
