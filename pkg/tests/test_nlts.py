from __future__ import annotations

import numpy as np
import pytest

from helpers import mts, rand_series

from kinsync.nlts import DilationMap, apply_dilation, dilation_maps, nlts


def test_dilation_map_worked_example():
    average = mts([[0.0], [1.0], [2.0]])
    member = mts([[0.0], [2.0]])
    (dilation,) = dilation_maps(average, [member])
    np.testing.assert_array_equal(dilation.source_index, [0, 1, 1])
    np.testing.assert_array_equal(dilation.is_duplicate, [False, False, True])
    dilated = apply_dilation(member, dilation)
    np.testing.assert_array_equal(dilated.samples, [[0.0], [2.0], [2.0]])


def test_dilation_map_compression_at_tail_keeps_last_sample():
    # the average pauses early and the member rushes at the end: several
    # member samples collapse onto the final output position, which must
    # still point at the member's true last sample
    average = mts([[0.0], [0.0], [9.0]])
    member = mts([[0.0], [9.0], [9.0]])
    (dilation,) = dilation_maps(average, [member])
    np.testing.assert_array_equal(dilation.source_index, [0, 0, 2])
    np.testing.assert_array_equal(dilation.is_duplicate, [False, True, False])
    dilated = apply_dilation(member, dilation)
    np.testing.assert_array_equal(dilated.samples, [[0.0], [0.0], [9.0]])


def test_nlts_output_contracts_random():
    rng = np.random.default_rng(31)
    for _ in range(10):
        sizes = rng.integers(2, 20, size=int(rng.integers(2, 5)))
        d = int(rng.integers(1, 4))
        members = [rand_series(rng, int(m), d) for m in sizes]
        result, maps = nlts(members)
        out_len = len(result.series)
        assert out_len == max(int(m) for m in sizes)
        assert len(maps) == len(members)
        for member, dilation in zip(members, maps):
            assert len(dilation) == out_len
            src = dilation.source_index
            assert src[0] == 0
            assert src[-1] == len(member) - 1
            assert (np.diff(src) >= 0).all()
            assert not dilation.is_duplicate[0]
            np.testing.assert_array_equal(
                dilation.is_duplicate[1:], src[1:] == src[:-1]
            )
            assert len(apply_dilation(member, dilation)) == out_len


def test_nlts_identical_members_yield_identity_maps():
    rng = np.random.default_rng(37)
    a = rand_series(rng, 12, 2)
    members = [mts(a.samples) for _ in range(3)]
    result, maps = nlts(members)
    assert result.total_cost == 0.0
    for dilation in maps:
        np.testing.assert_array_equal(dilation.source_index, np.arange(12))
        assert not dilation.is_duplicate.any()


def test_nlts_single_member_is_identity():
    rng = np.random.default_rng(41)
    a = rand_series(rng, 7, 3)
    result, (dilation,) = nlts([a])
    np.testing.assert_array_equal(result.series.samples, a.samples)
    np.testing.assert_array_equal(dilation.source_index, np.arange(7))
    assert not dilation.is_duplicate.any()


def test_nlts_on_dilated_set_does_not_cost_more():
    rng = np.random.default_rng(43)
    for _ in range(5):
        sizes = rng.integers(3, 18, size=3)
        members = [rand_series(rng, int(m), 2) for m in sizes]
        result, maps = nlts(members)
        dilated = [apply_dilation(s, d) for s, d in zip(members, maps)]
        again, _ = nlts(dilated)
        assert again.total_cost <= result.total_cost + 1e-9


def test_nlts_deterministic():
    rng = np.random.default_rng(47)
    members = [rand_series(rng, int(m), 2) for m in (6, 13, 9)]
    _, first = nlts(members)
    _, second = nlts(members)
    for one, two in zip(first, second):
        np.testing.assert_array_equal(one.source_index, two.source_index)
        np.testing.assert_array_equal(one.is_duplicate, two.is_duplicate)


def test_apply_dilation_rejects_foreign_map():
    rng = np.random.default_rng(53)
    long_member = rand_series(rng, 9, 2)
    short_member = rand_series(rng, 4, 2)
    _, maps = nlts([long_member, short_member])
    with pytest.raises(ValueError):
        apply_dilation(short_member, maps[0])  # built for the 9-sample series


def test_dilation_map_validates_construction():
    with pytest.raises(ValueError):
        DilationMap(
            source_index=np.array([0, 2, 1]),
            is_duplicate=np.array([False, False, False]),
        )
    with pytest.raises(ValueError):
        DilationMap(
            source_index=np.array([0, 1, 1]),
            is_duplicate=np.array([False, True, True]),
        )
    with pytest.raises(ValueError):
        DilationMap(
            source_index=np.array([0, 1]),
            is_duplicate=np.array([True, False]),
        )
