"""Animation-duration and visible-duration estimates."""
from __future__ import annotations

import statistics
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .trackers import TrackRecord

__all__ = [
    "PEAK_FRACTION",
    "DurationEstimate",
    "DurationStats",
    "estimate_anim_duration",
    "estimate_visible_duration",
    "duration_errors",
]

PEAK_FRACTION = 0.15


@dataclass(frozen=True)
class DurationEstimate:
    """Durations in seconds; windows are inclusive (first, last) frame pairs."""

    anim_duration_s: float = 0.0
    visible_duration_s: float = 0.0
    anim_window: tuple[int, int] | None = None
    visible_window: tuple[int, int] | None = None


@dataclass(frozen=True)
class DurationStats:
    mae: float
    median_ae: float
    bias: float


def estimate_anim_duration(energy, fps: float,
                           peak_fraction: float = PEAK_FRACTION) -> tuple[float, tuple[int, int] | None]:
    """Span from the first to the last frame whose energy exceeds
    ``peak_fraction`` of the peak, both ends inclusive."""
    e = np.asarray(energy, dtype=float)
    if e.size == 0 or not np.any(e > 0):
        return 0.0, None
    above = np.flatnonzero(e > peak_fraction * e.max())
    first, last = int(above[0]), int(above[-1])
    return (last - first + 1) / fps, (first, last)


def estimate_visible_duration(track: TrackRecord, fps: float) -> tuple[float, tuple[int, int] | None]:
    """Longest contiguous run of presence; the earliest run wins ties."""
    best_len, best = 0, None
    run_start = None
    pres = list(track.presence) + [False]
    for t, present in enumerate(pres):
        if present and run_start is None:
            run_start = t
        elif not present and run_start is not None:
            if t - run_start > best_len:
                best_len, best = t - run_start, (run_start, t - 1)
            run_start = None
    return best_len / fps, best


def duration_errors(pairs: Sequence[tuple[float, float]]) -> DurationStats:
    """MAE, median absolute error and signed bias of (estimate, truth) pairs."""
    if not pairs:
        raise ValueError("duration_errors needs at least one (estimate, truth) pair")
    err = [est - gt for est, gt in pairs]
    abs_err = [abs(e) for e in err]
    return DurationStats(
        mae=sum(abs_err) / len(abs_err),
        median_ae=statistics.median(abs_err),
        bias=sum(err) / len(err),
    )
