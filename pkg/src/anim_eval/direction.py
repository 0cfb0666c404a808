"""Motion direction from the tracked trajectory.

Which part of the trajectory is measured depends on the motion class:
transients use the entry (first quarter), pans the whole clip, rotations the
sign of the unwrapped angle change. Static, wiggle and breathe have no linear
direction and always give ``none``.

Screen convention: y grows downward, so "up" is a decreasing y. A positive
angle change in image coordinates turns clockwise on screen.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .features import SignalBundle
from .layout import COMPASS, ObservableClass as OC

__all__ = [
    "DEFAULT_MIN_DISPLACEMENT",
    "ROTATION_MIN_DEG",
    "DirectionMatch",
    "compass_label",
    "classify_direction",
    "direction_match",
    "horizontal_family",
]

# net displacement (diagonal units) below which no direction is reported
DEFAULT_MIN_DISPLACEMENT = 0.01
ROTATION_MIN_DEG = 45.0

_TRANSIENT = (OC.SCRAPBOOK, OC.POP, OC.FADE)
_SUPPRESSED = (OC.STATIC, OC.WIGGLE, OC.BREATHE)


def compass_label(dx: float, dy: float) -> str:
    """Snap a screen displacement to one of eight 45-degree bins.

    A bin covers (centre - 22.5, centre + 22.5], so an exact edge falls to the
    clockwise neighbour.
    """
    angle = math.degrees(math.atan2(-dy, dx))
    k = math.ceil((angle - 22.5) / 45.0 - 1e-12) % 8
    return COMPASS[k]


def classify_direction(sig: SignalBundle, motion: OC | str,
                       min_displacement: float = DEFAULT_MIN_DISPLACEMENT) -> str:
    motion = OC(motion)
    n = len(sig)
    if n == 0 or motion in _SUPPRESSED or motion is OC.UNKNOWN or not sig.p.any():
        return "none"
    if motion is OC.ROTATE:
        idx = np.flatnonzero(sig.p)
        dtheta = float(sig.theta[idx[-1]] - sig.theta[idx[0]])
        if abs(dtheta) < ROTATION_MIN_DEG:
            return "none"
        return "clockwise" if dtheta > 0 else "anticlockwise"
    if motion is OC.PAN:
        i0, i1 = 0, n - 1
    elif motion in _TRANSIENT:
        i0, i1 = 0, min(n - 1, n // 4)
    else:  # sketch, neon: no rule for them, report nothing
        return "none"
    dx = float(sig.x[i1] - sig.x[i0])
    dy = float(sig.y[i1] - sig.y[i0])
    if math.hypot(dx, dy) < min_displacement:
        return "none"
    return compass_label(dx, dy)


def horizontal_family(direction: str) -> str | None:
    if direction in ("left", "up_left", "down_left"):
        return "left"
    if direction in ("right", "up_right", "down_right"):
        return "right"
    return None


@dataclass(frozen=True)
class DirectionMatch:
    exact: bool
    half_correct: bool
    detected: bool


def direction_match(gt: str, predicted: str) -> DirectionMatch:
    exact = gt == predicted
    directional = gt not in ("none", "unknown")
    detected = directional and predicted != "none"
    fam = horizontal_family(gt)
    half = gt in COMPASS and fam is not None and horizontal_family(predicted) == fam
    return DirectionMatch(exact, half, detected)
