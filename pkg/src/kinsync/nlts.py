"""Non-linear temporal scaling: stretch every series onto a shared time base.

The shared base is the refined average from :func:`kinsync.dba.dba`, whose
length equals the longest member's. Each member gets a dilation map saying
which of its samples to show at every output position; stretching duplicates
samples, and where a member locally outpaces the average several of its
samples collapse onto one position (the earliest is shown, so a few samples
may be skipped mid-stream; the first and last are always kept).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .dba import compact_alignment, dba
from .series import MultivariateTimeSeries

__all__ = ["DilationMap", "apply_dilation", "dilation_maps", "nlts"]


@dataclass(frozen=True, eq=False)
class DilationMap:
    """Recipe stretching one series onto a common output length.

    ``source_index[t]`` is the 0-based sample index shown at output position
    t: non-decreasing, starting at 0 and ending at the source length minus
    one. ``is_duplicate[t]`` flags positions whose source repeats the
    previous entry exactly.
    """

    source_index: np.ndarray
    is_duplicate: np.ndarray

    def __post_init__(self):
        src = np.array(self.source_index, dtype=np.int64, copy=True)
        dup = np.array(self.is_duplicate, dtype=bool, copy=True)
        if src.ndim != 1 or dup.shape != src.shape or src.size == 0:
            raise ValueError("source_index and is_duplicate must be equal-length 1-D")
        if src[0] != 0:
            raise ValueError("a dilation map must start at source index 0")
        if (np.diff(src) < 0).any():
            raise ValueError("source_index must be non-decreasing")
        if dup[0]:
            raise ValueError("the first position cannot be a duplicate")
        if not np.array_equal(dup[1:], src[1:] == src[:-1]):
            raise ValueError("is_duplicate flags disagree with source_index repeats")
        src.setflags(write=False)
        dup.setflags(write=False)
        object.__setattr__(self, "source_index", src)
        object.__setattr__(self, "is_duplicate", dup)

    def __len__(self):
        return int(self.source_index.size)


def _map_from_ranges(ranges: np.ndarray, source_length: int) -> DilationMap:
    # Representative of each association set is its smallest index. The final
    # position pins the true last sample instead: the terminal path cell
    # guarantees it is associated, and the output must end on the real ending.
    source = ranges[:, 0].copy()
    source[-1] = source_length - 1
    duplicate = np.zeros(source.shape, dtype=bool)
    duplicate[1:] = source[1:] == source[:-1]
    return DilationMap(source_index=source, is_duplicate=duplicate)


def dilation_maps(average, members) -> list[DilationMap]:
    """One map per member, aligning it onto the average's time base."""
    members = list(members)
    alignment = compact_alignment(average, members)
    return [
        _map_from_ranges(ranges, len(member))
        for ranges, member in zip(alignment.ranges, members)
    ]


def nlts(members, max_iterations: int = 10, rel_tolerance: float = 1e-6):
    """Refined average plus one dilation map per member.

    Returns ``(AverageSeries, [DilationMap, ...])`` with maps in member
    order, each as long as the average. The maps come from a fresh alignment
    against the final average. A single member yields the identity map.
    """
    members = list(members)
    result = dba(members, max_iterations=max_iterations, rel_tolerance=rel_tolerance)
    return result, dilation_maps(result.series, members)


def apply_dilation(series, dilation: DilationMap) -> MultivariateTimeSeries:
    """Materialize a dilated series: output t shows series[source_index[t]]."""
    source = dilation.source_index
    length = len(series)
    if source[-1] != length - 1:
        raise ValueError(
            f"dilation map ends at source index {source[-1]}, "
            f"but the series has {length} samples"
        )
    return MultivariateTimeSeries(series.samples[source], series.sample_rate_hz)
