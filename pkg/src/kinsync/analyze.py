"""Relate pairwise alignment costs to differences in rated skill.

The workflow: build every unordered pair of scored trials, compute the raw
alignment cost and the absolute score difference for each, fit a cubic to
(difference, cost) and write both the pairs and the fit to a small report.
"""

from __future__ import annotations

import itertools
import warnings
from dataclasses import dataclass

import numpy as np

from .dtw import dtw, dtw_cost

__all__ = ["CubicFit", "ScorePair", "emit_fit_report", "polyfit3", "score_pairs"]


@dataclass(frozen=True)
class ScorePair:
    """One unordered pair of trials: score gap and alignment cost."""

    trial_a: str
    trial_b: str
    osats_diff: int
    dtw_cost: float


@dataclass(frozen=True, eq=False)
class CubicFit:
    """Least-squares cubic; coefficients run constant, linear, quadratic, cubic."""

    coefficients: np.ndarray
    rss: float

    def __post_init__(self):
        coef = np.array(self.coefficients, dtype=np.float64, copy=True)
        if coef.shape != (4,):
            raise ValueError(f"need exactly 4 coefficients, got shape {coef.shape}")
        if not np.isfinite(coef).all():
            raise ValueError("coefficients must be finite")
        rss = float(self.rss)
        if not (np.isfinite(rss) and rss >= 0):
            raise ValueError(f"rss must be finite and >= 0, got {self.rss!r}")
        coef.setflags(write=False)
        object.__setattr__(self, "coefficients", coef)
        object.__setattr__(self, "rss", rss)

    def evaluate(self, x):
        return np.polynomial.polynomial.polyval(np.asarray(x, dtype=np.float64), self.coefficients)


def _task_key(trial_id: str) -> str:
    # ids like Suturing_B001 share the prefix before the trial segment; ids
    # without underscores all land in one implicit task
    return trial_id.rsplit("_", 1)[0] if "_" in trial_id else ""


def score_pairs(trials, within_task: bool = True, length_normalize: bool = False, window=None):
    """Every unordered pair of scored trials with cost and score difference.

    Trials without a score are skipped with a warning. Pairs keep the input
    order (first by the first trial's position, then the second's). By
    default only pairs from the same task are produced; pass
    ``within_task=False`` to pair across tasks. Costs are raw alignment
    costs; ``length_normalize=True`` divides by alignment path length
    instead (exploratory, off by default).
    """
    trials = list(trials)
    scored = [t for t in trials if t.osats_score is not None]
    skipped = [t.id for t in trials if t.osats_score is None]
    if skipped:
        warnings.warn(
            f"skipping {len(skipped)} unscored trial(s): {', '.join(skipped)}",
            stacklevel=2,
        )
    if len(scored) < 2:
        raise ValueError(f"need at least 2 scored trials, got {len(scored)}")
    pairs = []
    for a, b in itertools.combinations(scored, 2):
        if within_task and _task_key(a.id) != _task_key(b.id):
            continue
        if length_normalize:
            path = dtw(a.series, b.series, window=window)
            cost = path.cost / len(path.steps)
        else:
            cost = dtw_cost(a.series, b.series, window=window)
        pairs.append(
            ScorePair(
                trial_a=a.id,
                trial_b=b.id,
                osats_diff=abs(a.osats_score - b.osats_score),
                dtw_cost=float(cost),
            )
        )
    return pairs


def polyfit3(points) -> CubicFit:
    """Least-squares cubic through (x, y) points.

    Fits on a mean-centered, scaled copy of x for conditioning (numpy's
    windowed polynomial fit) and converts the result back to plain power
    basis coefficients. Requires at least 4 distinct x values.
    """
    pts = np.asarray(points, dtype=np.float64)
    if pts.ndim != 2 or pts.shape[1] != 2:
        raise ValueError(f"points must have shape (n, 2), got {pts.shape}")
    if not np.isfinite(pts).all():
        raise ValueError("points must be finite")
    x = pts[:, 0]
    y = pts[:, 1]
    distinct = np.unique(x).size
    if distinct < 4:
        raise ValueError(
            f"cubic fit needs at least 4 distinct x values, got {distinct}"
        )
    fitted = np.polynomial.Polynomial.fit(x, y, deg=3)
    raw = fitted.convert().coef
    coefficients = np.zeros(4)
    coefficients[: raw.size] = raw
    residual = y - fitted(x)
    return CubicFit(coefficients=coefficients, rss=float(residual @ residual))


def emit_fit_report(pairs, fit: CubicFit, path) -> None:
    """Write pairs and fit as a small text table, 9 significant digits."""
    pairs = list(pairs)
    if not pairs:
        raise ValueError("no score pairs to report")
    lines = ["trial_a,trial_b,osats_diff,dtw_cost"]
    for pair in pairs:
        lines.append(
            f"{pair.trial_a},{pair.trial_b},{pair.osats_diff},{pair.dtw_cost:.9g}"
        )
    lines.append("coefficients," + ",".join(f"{c:.9g}" for c in fit.coefficients))
    lines.append(f"rss,{fit.rss:.9g}")
    with open(path, "w", encoding="utf-8", newline="\n") as handle:
        handle.write("\n".join(lines))
        handle.write("\n")
