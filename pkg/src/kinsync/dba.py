"""Iterative barycenter averaging of a series set under warping alignment.

The average starts as a copy of the longest member and is refined by
alternating two steps: align every member to the current average, then
replace each average sample with the mean of all member samples aligned to
it. The summed alignment cost never increases from one pass to the next.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .dtw import dtw
from .series import MultivariateTimeSeries

__all__ = [
    "AverageSeries",
    "CompactAlignment",
    "compact_alignment",
    "dba",
    "dba_iterate",
    "initialize_average",
]


@dataclass(frozen=True, eq=False)
class CompactAlignment:
    """Association of every member's samples to the average's indices.

    ``ranges[k][t]`` is the half-open [start, stop) run of member k's sample
    indices aligned to average index t. Runs are contiguous, their starts
    never decrease, no run is empty, and together they cover the member.
    ``paths[k]`` is the underlying alignment path and ``costs[k]`` its cost.
    """

    length: int
    paths: tuple
    ranges: tuple
    costs: np.ndarray

    def indices(self, t, k):
        lo, hi = self.ranges[k][t]
        return np.arange(lo, hi)

    @property
    def total_cost(self):
        return float(self.costs.sum())


@dataclass(frozen=True, eq=False)
class AverageSeries:
    """A refined average plus how it was reached."""

    series: MultivariateTimeSeries
    total_cost: float
    iterations_run: int


def _as_member_list(members):
    members = list(members)
    if not members:
        raise ValueError("need at least one series to average")
    return members


def initialize_average(members) -> MultivariateTimeSeries:
    """Starting average: a copy of the longest member (first one on ties)."""
    members = _as_member_list(members)
    longest = max(members, key=len)
    return MultivariateTimeSeries(longest.samples, longest.sample_rate_hz)


def _ranges_from_path(steps: np.ndarray, length: int) -> np.ndarray:
    # column 0 of the path (average index) is sorted, so the member indices
    # aligned to each t sit in one contiguous block of rows
    tcol = steps[:, 0]
    jcol = steps[:, 1]
    positions = np.arange(length)
    first = np.searchsorted(tcol, positions, side="left")
    last = np.searchsorted(tcol, positions, side="right")
    out = np.empty((length, 2), dtype=np.int64)
    out[:, 0] = jcol[first]
    out[:, 1] = jcol[last - 1] + 1
    return out


def compact_alignment(average, members) -> CompactAlignment:
    """Align every member to the average and tabulate the associations."""
    members = _as_member_list(members)
    paths = [dtw(average, member) for member in members]
    length = len(average)
    ranges = tuple(_ranges_from_path(p.steps, length) for p in paths)
    costs = np.array([p.cost for p in paths], dtype=np.float64)
    return CompactAlignment(
        length=length,
        paths=tuple(p.steps for p in paths),
        ranges=ranges,
        costs=costs,
    )


def _barycenter(alignment: CompactAlignment, members) -> np.ndarray:
    # Mean per output index over every associated member sample, computed as
    # reference + mean(deviations) so a set of identical samples reproduces
    # the shared value bit for bit (plain sum/count can be an ulp off).
    width = members[0].channels
    reference = members[0].samples[alignment.ranges[0][:, 0]]
    deviation_sum = np.zeros((alignment.length, width))
    counts = np.zeros(alignment.length)
    for steps, member in zip(alignment.paths, members):
        tcol = steps[:, 0]
        jcol = steps[:, 1]
        np.add.at(deviation_sum, tcol, member.samples[jcol] - reference[tcol])
        counts += np.bincount(tcol, minlength=alignment.length)
    # alignment paths visit every average index, so no association is empty
    assert (counts > 0).all()
    return reference + deviation_sum / counts[:, None]


def dba_iterate(average, members) -> MultivariateTimeSeries:
    """One refinement pass: re-align, then take per-index means."""
    members = _as_member_list(members)
    alignment = compact_alignment(average, members)
    return MultivariateTimeSeries(
        _barycenter(alignment, members), average.sample_rate_hz
    )


def dba(members, max_iterations: int = 10, rel_tolerance: float = 1e-6) -> AverageSeries:
    """Refine an average until the summed alignment cost stops improving.

    One iteration updates the average from the current alignment and then
    re-aligns, so the reported total_cost always belongs to the returned
    series. Stops after ``max_iterations`` passes or once the relative cost
    decrease falls below ``rel_tolerance`` (a zero cost counts as converged).
    Deterministic for identical inputs.
    """
    members = _as_member_list(members)
    if max_iterations < 1:
        raise ValueError(f"max_iterations must be >= 1, got {max_iterations}")
    if rel_tolerance < 0:
        raise ValueError(f"rel_tolerance must be >= 0, got {rel_tolerance}")
    average = initialize_average(members)
    alignment = compact_alignment(average, members)
    total = alignment.total_cost
    iterations = 0
    while iterations < max_iterations:
        average = MultivariateTimeSeries(
            _barycenter(alignment, members), average.sample_rate_hz
        )
        alignment = compact_alignment(average, members)
        new_total = alignment.total_cost
        iterations += 1
        relative_drop = 0.0 if total == 0 else (total - new_total) / total
        total = new_total
        if relative_drop < rel_tolerance:
            break
    return AverageSeries(series=average, total_cost=total, iterations_run=iterations)
