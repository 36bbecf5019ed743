"""Command line interface.

Four commands: align-pair, align-multi, render, analyze. Options resolve in
three layers: a command line flag beats the same key in the --config file,
which beats the built-in default. Config files are plain key=value lines
('#' starts a comment); keys use underscores, e.g. ``max_iters=20``.

Exit status is 0 only when every requested output was written. On failure,
outputs already written by the failing run are removed again.
"""

from __future__ import annotations

import argparse
import os
import re
import sys
from dataclasses import dataclass, fields, replace
from pathlib import Path

import numpy as np

from .analyze import emit_fit_report, polyfit3, score_pairs
from .errors import KinsyncError, ParseError
from .kinio import DEFAULT_CHANNELS, ChannelSelection, TrialRecord, load_kinematics, load_meta
from .sync import multi_schedules, pairwise_schedules, read_schedule, render, write_schedule

__all__ = ["RunConfig", "main"]


class _UsageError(Exception):
    pass


@dataclass(frozen=True)
class RunConfig:
    """Fully resolved options for one command invocation."""

    channels: ChannelSelection = DEFAULT_CHANNELS
    fps: float = 30.0
    normalize: bool = False
    window: int | None = None
    max_iters: int = 10
    tol: float = 1e-6
    encoder: str = "ffmpeg"
    grayscale_held: bool = False
    all_pairs: bool = False
    length_normalize: bool = False
    meta_id_field: int = 0
    meta_skill_field: int = 1
    meta_score_field: int = 2


def _parse_bool(text: str) -> bool:
    lowered = text.strip().lower()
    if lowered in ("1", "true", "yes", "on"):
        return True
    if lowered in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"not a boolean: {text!r}")


def _parse_channels(text: str) -> ChannelSelection:
    try:
        indices = tuple(int(tok) for tok in text.split(",") if tok.strip() != "")
    except ValueError:
        raise ValueError(f"channels must be comma-separated integers, got {text!r}") from None
    return ChannelSelection(indices)


def _parse_window(text: str):
    return None if text.strip() == "" else int(text)


_CONFIG_PARSERS = {
    "channels": _parse_channels,
    "fps": float,
    "normalize": _parse_bool,
    "window": _parse_window,
    "max_iters": int,
    "tol": float,
    "encoder": str,
    "grayscale_held": _parse_bool,
    "all_pairs": _parse_bool,
    "length_normalize": _parse_bool,
    "meta_id_field": int,
    "meta_skill_field": int,
    "meta_score_field": int,
}


def load_config(path) -> dict:
    """Parse a key=value config file into typed values."""
    values = {}
    with open(path, "r", encoding="utf-8") as handle:
        for lineno, line in enumerate(handle, 1):
            stripped = line.strip()
            if not stripped or stripped.startswith("#"):
                continue
            if "=" not in stripped:
                raise ParseError(path, f"expected key=value, got {stripped!r}", lineno=lineno)
            key, _, value = stripped.partition("=")
            key = key.strip()
            parser = _CONFIG_PARSERS.get(key)
            if parser is None:
                raise ParseError(path, f"unknown config key {key!r}", lineno=lineno)
            try:
                values[key] = parser(value.strip())
            except ValueError as err:
                raise ParseError(path, f"bad value for {key}: {err}", lineno=lineno) from None
    return values


def resolve_config(args) -> RunConfig:
    """Combine defaults, config file and command line flags (flags win)."""
    config = RunConfig()
    path = getattr(args, "config", None)
    if path:
        config = replace(config, **load_config(path))
    overrides = {}
    for field in fields(RunConfig):
        value = getattr(args, field.name, None)
        if value is not None:
            overrides[field.name] = value
    if getattr(args, "channels", None) is not None:
        overrides["channels"] = _parse_channels(args.channels)
    return replace(config, **overrides)


def _load_trial(path, config: RunConfig) -> TrialRecord:
    series = load_kinematics(
        path,
        channels=config.channels,
        sample_rate_hz=config.fps,
        normalize=config.normalize,
    )
    trial_id = Path(path).stem
    found = re.search(r"_([A-Za-z])\d+$", trial_id)
    return TrialRecord(
        id=trial_id, series=series, subject=found.group(1) if found else ""
    )


def _check_unique_ids(trials):
    seen = set()
    for trial in trials:
        if trial.id in seen:
            raise ValueError(
                f"duplicate trial id {trial.id!r}; input file names must be distinct"
            )
        seen.add(trial.id)


def _remove_outputs(paths):
    for path in paths:
        try:
            os.remove(path)
        except OSError:
            pass


def _write_schedules(schedules, out_dir):
    written = []
    for schedule in schedules:
        path = os.path.join(out_dir, f"{schedule.trial_id}.sched")
        write_schedule(schedule, path)
        written.append(path)
    return written


def _render_videos(schedules, videos, out_dir, config: RunConfig, written):
    for schedule, video in zip(schedules, videos):
        suffix = os.path.splitext(str(video))[1] or ".mp4"
        path = os.path.join(out_dir, f"{schedule.trial_id}.synced{suffix}")
        render(
            schedule,
            video,
            path,
            grayscale_held=config.grayscale_held,
            encoder=config.encoder,
        )
        written.append(path)


def cmd_align_pair(args) -> int:
    config = resolve_config(args)
    if len(args.kin) != 2:
        raise _UsageError("align-pair needs exactly two --kin files")
    videos = args.render or []
    if videos and len(videos) != 2:
        raise _UsageError("--render must be given once per --kin file")
    trials = [_load_trial(path, config) for path in args.kin]
    _check_unique_ids(trials)
    schedules = pairwise_schedules(trials[0], trials[1], window=config.window)
    os.makedirs(args.out, exist_ok=True)
    written = []
    try:
        written += _write_schedules(schedules, args.out)
        if videos:
            _render_videos(schedules, videos, args.out, config, written)
    except Exception:
        _remove_outputs(written)
        raise
    return 0


def cmd_align_multi(args) -> int:
    config = resolve_config(args)
    if len(args.kin) < 2:
        raise _UsageError("align-multi needs at least two --kin files")
    videos = args.render or []
    if videos and len(videos) != len(args.kin):
        raise _UsageError("--render must be given once per --kin file")
    trials = [_load_trial(path, config) for path in args.kin]
    _check_unique_ids(trials)
    schedules = multi_schedules(
        trials, max_iterations=config.max_iters, rel_tolerance=config.tol
    )
    os.makedirs(args.out, exist_ok=True)
    written = []
    try:
        written += _write_schedules(schedules, args.out)
        if videos:
            _render_videos(schedules, videos, args.out, config, written)
    except Exception:
        _remove_outputs(written)
        raise
    return 0


def cmd_render(args) -> int:
    config = resolve_config(args)
    schedule = read_schedule(args.schedule)
    try:
        render(
            schedule,
            args.video,
            args.out,
            grayscale_held=config.grayscale_held,
            encoder=config.encoder,
        )
    except Exception:
        _remove_outputs([args.out])
        raise
    return 0


def cmd_analyze(args) -> int:
    config = resolve_config(args)
    if len(args.kin) < 2:
        raise _UsageError("analyze needs at least two --kin files")
    records = load_meta(
        args.meta,
        id_field=config.meta_id_field,
        skill_field=config.meta_skill_field,
        score_field=config.meta_score_field,
    )
    by_id = {record.trial_id: record for record in records}
    trials = []
    for path in args.kin:
        trial = _load_trial(path, config)
        record = by_id.get(trial.id)
        if record is not None:
            trial = TrialRecord(
                id=trial.id,
                series=trial.series,
                subject=trial.subject,
                skill_class=record.skill,
                osats_score=record.score,
            )
        trials.append(trial)
    _check_unique_ids(trials)
    pairs = score_pairs(
        trials,
        within_task=not config.all_pairs,
        length_normalize=config.length_normalize,
        window=config.window,
    )
    if not pairs:
        raise ValueError("no trial pairs to analyze (check ids and task grouping)")
    points = np.array([[p.osats_diff, p.dtw_cost] for p in pairs])
    fit = polyfit3(points)
    try:
        emit_fit_report(pairs, fit, args.out)
    except Exception:
        _remove_outputs([args.out])
        raise
    return 0


def _add_common(parser, include_channels=True):
    parser.add_argument("--config", metavar="FILE", help="key=value defaults file")
    if include_channels:
        parser.add_argument("--channels", metavar="LIST", help="comma-separated kinematic columns to load")
        parser.add_argument("--fps", type=float, help="sample/frame rate of the recordings")
        parser.add_argument("--normalize", action="store_true", default=None, help="z-normalize each loaded channel")
        parser.add_argument("--window", type=int, help="half-width of the alignment search band")


def _add_render_options(parser):
    parser.add_argument("--grayscale-held", action="store_true", default=None, dest="grayscale_held", help="desaturate held (duplicated) frames")
    parser.add_argument("--encoder", help="ffmpeg-compatible encoder executable")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="kinsync",
        description="Align and synchronize recorded trials from their kinematics.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    pair = sub.add_parser("align-pair", help="synchronize two trials against each other")
    pair.add_argument("--kin", action="append", required=True, metavar="FILE", help="kinematics file (give twice)")
    pair.add_argument("--out", required=True, metavar="DIR", help="directory for schedule files")
    pair.add_argument("--render", action="append", metavar="VIDEO", help="also render, one video per --kin")
    _add_common(pair)
    _add_render_options(pair)
    pair.set_defaults(func=cmd_align_pair)

    multi = sub.add_parser("align-multi", help="synchronize any number of trials together")
    multi.add_argument("--kin", action="append", required=True, metavar="FILE", help="kinematics file (repeat per trial)")
    multi.add_argument("--out", required=True, metavar="DIR", help="directory for schedule files")
    multi.add_argument("--render", action="append", metavar="VIDEO", help="also render, one video per --kin")
    multi.add_argument("--max-iters", type=int, dest="max_iters", help="averaging iteration cap")
    multi.add_argument("--tol", type=float, help="relative cost decrease that counts as converged")
    _add_common(multi)
    _add_render_options(multi)
    multi.set_defaults(func=cmd_align_multi)

    rend = sub.add_parser("render", help="render one schedule against its video")
    rend.add_argument("--schedule", required=True, metavar="FILE")
    rend.add_argument("--video", required=True, metavar="FILE")
    rend.add_argument("--out", required=True, metavar="FILE")
    _add_common(rend, include_channels=False)
    _add_render_options(rend)
    rend.set_defaults(func=cmd_render)

    ana = sub.add_parser("analyze", help="relate alignment costs to score differences")
    ana.add_argument("--kin", action="append", required=True, metavar="FILE", help="kinematics file (repeat per trial)")
    ana.add_argument("--meta", required=True, metavar="FILE", help="trial metadata file")
    ana.add_argument("--out", required=True, metavar="FILE", help="report path")
    ana.add_argument("--all-pairs", action="store_true", default=None, dest="all_pairs", help="pair trials across tasks too")
    ana.add_argument("--length-normalize", action="store_true", default=None, dest="length_normalize", help="divide costs by alignment length")
    ana.add_argument(
        "--meta-fields", metavar="ID,SKILL,SCORE", dest="meta_fields",
        help="0-based field positions in the meta file",
    )
    _add_common(ana)
    ana.set_defaults(func=cmd_analyze)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if getattr(args, "meta_fields", None) is not None:
        try:
            id_field, skill_field, score_field = (
                int(tok) for tok in args.meta_fields.split(",")
            )
        except ValueError:
            print("error: --meta-fields needs three comma-separated integers", file=sys.stderr)
            return 2
        args.meta_id_field = id_field
        args.meta_skill_field = skill_field
        args.meta_score_field = score_field
    try:
        return args.func(args)
    except _UsageError as err:
        print(f"usage error: {err}", file=sys.stderr)
        return 2
    except (KinsyncError, OSError, ValueError) as err:
        print(f"error: {err}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
