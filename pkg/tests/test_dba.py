from __future__ import annotations

import numpy as np
import pytest

from helpers import mts, rand_series

from kinsync.dba import (
    AverageSeries,
    compact_alignment,
    dba,
    dba_iterate,
    initialize_average,
)
from kinsync.dtw import dtw_cost


def worked_pair():
    average = mts([[0.0], [1.0], [2.0]])
    member = mts([[0.0], [2.0]])
    return average, [member]


def test_initialize_average_picks_longest_first_on_ties():
    rng = np.random.default_rng(3)
    short = rand_series(rng, 3, 2)
    long_a = rand_series(rng, 5, 2)
    long_b = rand_series(rng, 5, 2)
    start = initialize_average([short, long_a, long_b])
    np.testing.assert_array_equal(start.samples, long_a.samples)
    assert start is not long_a
    assert start.sample_rate_hz == long_a.sample_rate_hz


def test_initialize_average_empty_set_raises():
    with pytest.raises(ValueError):
        initialize_average([])


def test_compact_alignment_worked_example():
    average, members = worked_pair()
    alignment = compact_alignment(average, members)
    assert alignment.length == 3
    np.testing.assert_array_equal(alignment.indices(0, 0), [0])
    np.testing.assert_array_equal(alignment.indices(1, 0), [1])
    np.testing.assert_array_equal(alignment.indices(2, 0), [1])
    assert alignment.total_cost == pytest.approx(1.0)


def test_compact_alignment_contiguous_and_covering():
    rng = np.random.default_rng(5)
    members = [rand_series(rng, int(m), 3) for m in rng.integers(2, 12, size=4)]
    average = initialize_average(members)
    alignment = compact_alignment(average, members)
    assert alignment.length == len(average)
    for k, member in enumerate(members):
        ranges = alignment.ranges[k]
        assert ranges.shape == (alignment.length, 2)
        assert (ranges[:, 0] < ranges[:, 1]).all()  # never empty
        assert ranges[0, 0] == 0
        assert ranges[-1, 1] == len(member)
        # starts never decrease and no member index is skipped
        assert (np.diff(ranges[:, 0]) >= 0).all()
        assert (ranges[1:, 0] <= ranges[:-1, 1]).all()


def test_dba_iterate_worked_example():
    average, members = worked_pair()
    refined = dba_iterate(average, members)
    np.testing.assert_array_equal(refined.samples, [[0.0], [2.0], [2.0]])


def test_dba_single_member_converges_immediately():
    rng = np.random.default_rng(7)
    a = rand_series(rng, 8, 2)
    result = dba([a])
    assert isinstance(result, AverageSeries)
    np.testing.assert_array_equal(result.series.samples, a.samples)
    assert result.total_cost == 0.0
    assert result.iterations_run == 1


def test_dba_identical_members_fixed_point():
    rng = np.random.default_rng(9)
    a = rand_series(rng, 10, 3)
    copies = [mts(a.samples), mts(a.samples), mts(a.samples)]
    result = dba(copies)
    np.testing.assert_array_equal(result.series.samples, a.samples)
    assert result.total_cost == 0.0
    assert result.iterations_run == 1


def test_dba_average_keeps_longest_length():
    rng = np.random.default_rng(11)
    members = [rand_series(rng, m, 2) for m in (4, 9, 6)]
    result = dba(members)
    assert len(result.series) == 9
    assert result.series.channels == 2


def test_dba_cost_never_increases_across_iterations():
    rng = np.random.default_rng(13)
    for _ in range(8):
        sizes = rng.integers(2, 25, size=int(rng.integers(2, 5)))
        d = int(rng.integers(1, 4))
        members = [rand_series(rng, int(m), d) for m in sizes]
        average = initialize_average(members)
        totals = [sum(dtw_cost(average, s) for s in members)]
        for _ in range(6):
            average = dba_iterate(average, members)
            totals.append(sum(dtw_cost(average, s) for s in members))
        for earlier, later in zip(totals, totals[1:]):
            assert later <= earlier + 1e-9


def test_dba_reported_cost_matches_returned_average():
    rng = np.random.default_rng(17)
    members = [rand_series(rng, int(m), 2) for m in (7, 12, 9)]
    result = dba(members)
    recomputed = sum(dtw_cost(result.series, s) for s in members)
    assert result.total_cost == pytest.approx(recomputed, rel=1e-12)


def test_dba_respects_iteration_cap():
    rng = np.random.default_rng(19)
    members = [rand_series(rng, int(m), 2) for m in (6, 11, 8, 13)]
    result = dba(members, max_iterations=1)
    assert result.iterations_run == 1
    capped = dba(members, max_iterations=3)
    assert capped.iterations_run <= 3


def test_dba_deterministic():
    rng = np.random.default_rng(23)
    members = [rand_series(rng, int(m), 3) for m in (5, 14, 10)]
    first = dba(members)
    second = dba(members)
    np.testing.assert_array_equal(first.series.samples, second.series.samples)
    assert first.total_cost == second.total_cost
    assert first.iterations_run == second.iterations_run


def test_dba_rejects_bad_parameters():
    rng = np.random.default_rng(29)
    members = [rand_series(rng, 5, 2)]
    with pytest.raises(ValueError):
        dba(members, max_iterations=0)
    with pytest.raises(ValueError):
        dba(members, rel_tolerance=-1.0)
    with pytest.raises(ValueError):
        dba([])
