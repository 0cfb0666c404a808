"""Trajectory signals and scalar motion features.

A track is turned into five per-frame signals (centroid, scale, rotation,
opacity proxy, presence); the classifier consumes scalar summaries of them.
All lengths are divided by the frame diagonal so features do not depend on
resolution.
"""
from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, fields

import numpy as np

from .geometry import unwrap_angles
from .layout import LayoutSpec
from .trackers import TrackRecord

__all__ = [
    "EPSILON",
    "CONTOUR",
    "LAYOUT_MATCH",
    "SignalBundle",
    "MotionFeatures",
    "FeatureError",
    "build_signals",
    "raw_energy",
    "smoothing_window",
    "compute_energy",
    "extract_features",
    "dump_features",
]

EPSILON = 3e-3  # positional noise floor, diagonal units
CONTOUR = "contour"
LAYOUT_MATCH = "layout_match"


class FeatureError(ValueError):
    pass


@dataclass(frozen=True)
class SignalBundle:
    x: np.ndarray
    y: np.ndarray
    s: np.ndarray
    theta: np.ndarray  # unwrapped, period 90
    theta_raw: np.ndarray  # tracker angle, forward-filled
    o: np.ndarray
    p: np.ndarray
    fps: float
    mode: str = CONTOUR

    def __len__(self) -> int:
        return len(self.x)


@dataclass(frozen=True)
class MotionFeatures:
    d_net: float = 0.0
    delta_max: float = 0.0
    start_extent: float = 0.0
    scale_range: float = 0.0
    pop_height: float = 0.0
    E_start: float = 0.0
    E_mid: float = 0.0
    E_end: float = 0.0
    E_peak: float = 0.0
    E_tot: float = 0.0
    rho: float = 0.0
    theta_tot: float = 0.0
    theta_90: float = 0.0
    theta_dot_max: float = 0.0
    pos_zx: int = 0
    sc_zx: int = 0
    op_range: float = 0.0
    op_start: float = 0.0
    op_mid: float = 0.0
    op_end: float = 0.0
    low_mid_frac: float = 0.0
    pres_start: float = 0.0
    pres_mid: float = 0.0
    pres_end: float = 0.0
    pres_full: float = 0.0
    epsilon: float = EPSILON

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, d: dict) -> "MotionFeatures":
        names = {f.name for f in fields(cls)}
        return cls(**{k: v for k, v in d.items() if k in names})

    def scaled_motion(self, k: float) -> "MotionFeatures":
        """Multiply every motion magnitude (energies, displacements, ranges,
        angles, crossing counts) by ``k``; presence and opacity levels are kept."""
        d = self.to_dict()
        for name in ("d_net", "delta_max", "start_extent", "scale_range", "pop_height",
                     "E_start", "E_mid", "E_end", "E_peak", "E_tot",
                     "theta_tot", "theta_90", "theta_dot_max", "op_range"):
            d[name] = d[name] * k
        d["pos_zx"] = int(d["pos_zx"] * k)
        d["sc_zx"] = int(d["sc_zx"] * k)
        return MotionFeatures.from_dict(d)


def _fill(values: np.ndarray, present: np.ndarray, default: float) -> np.ndarray:
    """Forward-fill absent frames; frames before the first detection take the
    first observed value."""
    out = np.full(len(present), default, dtype=float)
    idx = np.flatnonzero(present)
    if idx.size == 0:
        return out
    # position of the most recent present frame at or before t
    last = np.maximum.accumulate(np.where(present, np.arange(len(present)), -1))
    last[last < 0] = idx[0]
    return values[last]


def build_signals(track: TrackRecord, spec: LayoutSpec | None = None, fps: float = 30.0,
                  mode: str = CONTOUR, video_size: tuple[int, int] | None = None) -> SignalBundle:
    """Turn a track into per-frame signals.

    ``video_size`` (w, h) sets the normalising diagonal; it defaults to the
    layout canvas.
    """
    if len(track) == 0:
        raise FeatureError(f"track {track.component_id!r} is empty")
    if mode not in (CONTOUR, LAYOUT_MATCH):
        raise FeatureError(f"unknown tracker mode {mode!r}")
    if video_size is not None:
        diag = math.hypot(*video_size)
    elif spec is not None:
        diag = spec.diagonal
    else:
        raise FeatureError("need a layout or an explicit video size to normalise lengths")
    n = len(track)
    p = track.presence
    cx = np.zeros(n)
    cy = np.zeros(n)
    w = np.zeros(n)
    h = np.zeros(n)
    th = np.zeros(n)
    o = np.zeros(n)
    for e in track.entries:
        if e.present:
            b = e.obb
            cx[e.t], cy[e.t], w[e.t], h[e.t], th[e.t] = b.cx, b.cy, b.w, b.h, b.theta
            o[e.t] = e.confidence
    idx = np.flatnonzero(p)
    if idx.size:
        wm, hm = float(np.median(w[idx])), float(np.median(h[idx]))
        rw = w / wm if wm > 0 else np.ones(n)
        rh = h / hm if hm > 0 else np.ones(n)
        s = np.sqrt(np.clip(rw * rh, 0.0, None))
        th_unwrapped = np.zeros(n)
        th_unwrapped[idx] = unwrap_angles(th[idx], 90.0)
    else:
        s = np.ones(n)
        th_unwrapped = np.zeros(n)
    return SignalBundle(
        x=_fill(cx / diag, p, 0.0),
        y=_fill(cy / diag, p, 0.0),
        s=_fill(s, p, 1.0),
        theta=_fill(th_unwrapped, p, 0.0),
        theta_raw=_fill(th, p, 0.0),
        o=np.where(p, o, 0.0),
        p=p,
        fps=float(fps),
        mode=mode,
    )


def raw_energy(sig: SignalBundle) -> np.ndarray:
    """Per-frame motion energy before smoothing (E_0 = 0)."""
    e = np.zeros(len(sig))
    if len(sig) < 2:
        return e
    dc = np.hypot(np.diff(sig.x), np.diff(sig.y))
    e[1:] = (dc + 0.5 * np.abs(np.diff(sig.s)) + 0.3 * np.abs(np.diff(sig.theta)) / 90.0
             + 0.5 * np.abs(np.diff(sig.o)))
    return e


def smoothing_window(fps: float) -> int:
    k = max(3, int(round(fps / 6.0)))
    return k if k % 2 else k + 1


def compute_energy(sig: SignalBundle, window: int | None = None) -> np.ndarray:
    """Motion energy smoothed by a centred moving average (zero-padded ends)."""
    e = raw_energy(sig)
    k = smoothing_window(sig.fps) if window is None else int(window)
    if k <= 1 or len(e) == 0:
        return e
    return np.convolve(e, np.ones(k) / k, mode="same")[: len(e)]


def _thirds(n: int) -> tuple[slice, slice, slice]:
    a, b = -(-n // 3), -(-2 * n // 3)
    return slice(0, a), slice(a, b), slice(b, n)


def _detrend(v: np.ndarray) -> np.ndarray:
    t = np.arange(len(v), dtype=float)
    slope, icept = np.polyfit(t, v, 1)
    return v - (slope * t + icept)


def _zero_crossings(v: np.ndarray, gate: float) -> int:
    strong = v[np.abs(v) >= gate]
    if strong.size < 2:
        return 0
    sg = np.sign(strong)
    return int(np.count_nonzero(sg[1:] != sg[:-1]))


def _major_axis(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    xy = np.stack([x, y])
    cov = np.cov(xy)
    if not np.all(np.isfinite(cov)) or np.allclose(cov, 0.0):
        return x
    vals, vecs = np.linalg.eigh(cov)
    axis = vecs[:, int(np.argmax(vals))]
    return axis @ xy


def extract_features(sig: SignalBundle, energy: np.ndarray, eps: float = EPSILON) -> MotionFeatures:
    n = len(sig)
    if n < 3:
        raise FeatureError(f"clip too short for feature extraction ({n} frames, need 3)")
    if len(energy) != n:
        raise FeatureError("energy and signals differ in length")
    a, m, b = _thirds(n)
    steps = np.zeros(n)
    steps[1:] = np.hypot(np.diff(sig.x), np.diff(sig.y))
    quarter = -(-n // 4)
    idx = np.flatnonzero(sig.p)

    if idx.size:
        first, last = idx[0], idx[-1]
        d_net = float(math.hypot(sig.x[last] - sig.x[first], sig.y[last] - sig.y[first]))
        s_obs = sig.s[idx]
        scale_range = float(s_obs.max() - s_obs.min())
        theta_tot = float(sig.theta_raw[last] - sig.theta_raw[first])
        theta_90 = float(sig.theta[last] - sig.theta[first])
    else:
        d_net = scale_range = theta_tot = theta_90 = 0.0
    baseline = float(np.median(sig.s[b]))
    pop_height = max(0.0, float(np.max(sig.s - baseline)))

    e_start, e_mid, e_end = (float(energy[sl].sum()) for sl in (a, m, b))
    e_peak = max(e_start, e_end)
    rho = e_mid / e_peak if e_peak > 0 else 0.0

    pos = _detrend(sig.x), _detrend(sig.y)
    return MotionFeatures(
        d_net=d_net,
        delta_max=float(steps.max()),
        start_extent=float(steps[:quarter].max()),
        scale_range=scale_range,
        pop_height=pop_height,
        E_start=e_start,
        E_mid=e_mid,
        E_end=e_end,
        E_peak=e_peak,
        E_tot=float(energy.sum()),
        rho=float(rho),
        theta_tot=theta_tot,
        theta_90=theta_90,
        theta_dot_max=float(np.abs(np.diff(sig.theta)).max() * sig.fps),
        pos_zx=_zero_crossings(_major_axis(*pos), eps),
        sc_zx=_zero_crossings(_detrend(sig.s), eps),
        op_range=float(sig.o.max() - sig.o.min()),
        op_start=float(sig.o[a].mean()),
        op_mid=float(sig.o[m].mean()),
        op_end=float(sig.o[b].mean()),
        low_mid_frac=float((sig.o[m] < 0.5).mean()) if sig.mode == LAYOUT_MATCH else 0.0,
        pres_start=float(sig.p[a].mean()),
        pres_mid=float(sig.p[m].mean()),
        pres_end=float(sig.p[b].mean()),
        pres_full=float(sig.p.mean()),
        epsilon=eps,
    )


def dump_features(features: dict[str, MotionFeatures], path) -> None:
    """Write ``{component_id: {feature: value}}`` for debugging."""
    with open(path, "w", encoding="utf-8") as fh:
        json.dump({k: v.to_dict() for k, v in sorted(features.items())}, fh, indent=2, sort_keys=True)
