"""Core container for fixed-rate multivariate recordings."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True, eq=False)
class MultivariateTimeSeries:
    """One row per sample, one column per channel, at a fixed sample rate.

    ``samples`` is coerced to a read-only float64 array of shape
    (length, channels). Both dimensions must be at least 1 and every value
    finite. Instances never mutate after construction, so they are safe to
    share across threads.
    """

    samples: np.ndarray
    sample_rate_hz: float = 30.0

    def __post_init__(self):
        arr = np.array(self.samples, dtype=np.float64, copy=True, order="C")
        if arr.ndim != 2:
            raise ValueError(
                f"samples must be 2-D (length, channels), got shape {arr.shape}"
            )
        if arr.shape[0] < 1 or arr.shape[1] < 1:
            raise ValueError(
                f"need at least one sample and one channel, got shape {arr.shape}"
            )
        if not np.isfinite(arr).all():
            raise ValueError("samples contain non-finite values")
        rate = float(self.sample_rate_hz)
        if not rate > 0:
            raise ValueError(f"sample_rate_hz must be positive, got {rate!r}")
        arr.setflags(write=False)
        object.__setattr__(self, "samples", arr)
        object.__setattr__(self, "sample_rate_hz", rate)

    def __len__(self):
        return int(self.samples.shape[0])

    @property
    def channels(self):
        return int(self.samples.shape[1])
