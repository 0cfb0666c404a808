"""Per-frame component trackers.

Both trackers emit :class:`TrackRecord` objects: one entry per frame with a
presence flag, an oriented box and a confidence. Everything downstream works
only on these records, so the metric layer does not care which tracker ran.

* :func:`contour_track` differences each frame against the known background
  colour; meant for clips with exactly one component on a plain canvas.
* :func:`layout_match_track` assigns externally supplied detections to layout
  polygons frame by frame (Hungarian on 1 - IoU), with no temporal linking.
"""
from __future__ import annotations

import json
import os
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Iterator, NamedTuple, Sequence

import numpy as np
from PIL import Image
from scipy import ndimage

from .geometry import OBB, hungarian, min_area_obb, polygon_iou
from .layout import LayoutSpec

__all__ = [
    "FrameSource",
    "ArrayFrameSource",
    "CallableFrameSource",
    "DirectoryFrameSource",
    "write_frame_dir",
    "TrackEntry",
    "TrackRecord",
    "Detection",
    "TrackerError",
    "DEFAULT_NOISE_THRESHOLD",
    "DEFAULT_MIN_AREA",
    "DEFAULT_IOU_FLOOR",
    "foreground_mask",
    "contour_track",
    "layout_match_track",
    "presence_fraction",
    "load_detections",
    "save_detections",
]

DEFAULT_NOISE_THRESHOLD = 12  # 8-bit intensity units per channel
DEFAULT_MIN_AREA = 16  # px^2
DEFAULT_IOU_FLOOR = 0.05

MANIFEST = "manifest.json"


class TrackerError(ValueError):
    pass


# ------------------------------------------------------------ frame sources

class FrameSource:
    """A fixed-length sequence of equally sized RGB frames at a known rate."""

    frame_count: int
    fps: float
    width: int
    height: int

    def frame(self, t: int) -> np.ndarray:
        raise NotImplementedError

    def __len__(self) -> int:
        return self.frame_count

    def __iter__(self) -> Iterator[np.ndarray]:
        for t in range(self.frame_count):
            yield self.frame(t)


class ArrayFrameSource(FrameSource):
    def __init__(self, frames: Sequence[np.ndarray], fps: float):
        if fps <= 0:
            raise TrackerError("fps must be positive")
        if len(frames) == 0:
            raise TrackerError("no frames")
        self._frames = list(frames)
        self.frame_count = len(self._frames)
        self.fps = float(fps)
        self.height, self.width = self._frames[0].shape[:2]

    def frame(self, t: int) -> np.ndarray:
        return self._frames[t]


class CallableFrameSource(FrameSource):
    """Frames produced lazily by ``render(t)``; nothing is held in memory."""

    def __init__(self, render: Callable[[int], np.ndarray], frame_count: int, fps: float,
                 width: int, height: int):
        if fps <= 0:
            raise TrackerError("fps must be positive")
        self._render = render
        self.frame_count = int(frame_count)
        self.fps = float(fps)
        self.width = int(width)
        self.height = int(height)

    def frame(self, t: int) -> np.ndarray:
        return self._render(t)


class DirectoryFrameSource(FrameSource):
    """``frame_000000.png ...`` plus ``manifest.json`` holding at least ``fps``."""

    def __init__(self, path):
        self.path = Path(path)
        manifest = self.path / MANIFEST
        try:
            meta = json.loads(manifest.read_text(encoding="utf-8"))
        except FileNotFoundError as exc:
            raise OSError(f"{manifest}: frame manifest not found") from exc
        self.fps = float(meta["fps"])
        if self.fps <= 0:
            raise TrackerError(f"{manifest}: fps must be positive")
        self._files = sorted(self.path.glob("frame_*.png"))
        if not self._files:
            raise OSError(f"{self.path}: no frame_*.png files")
        self.frame_count = len(self._files)
        with Image.open(self._files[0]) as im:
            self.width, self.height = im.size

    def frame(self, t: int) -> np.ndarray:
        with Image.open(self._files[t]) as im:
            arr = np.asarray(im.convert("RGB"))
        if arr.shape[:2] != (self.height, self.width):
            raise TrackerError(f"{self._files[t].name}: frame size differs from the first frame")
        return arr


def write_frame_dir(frames: FrameSource, out_dir, compress_level: int = 1) -> Path:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    for t, fr in enumerate(frames):
        Image.fromarray(fr).save(out / f"frame_{t:06d}.png", compress_level=compress_level)
    (out / MANIFEST).write_text(json.dumps({
        "fps": frames.fps, "width": frames.width, "height": frames.height,
        "frame_count": frames.frame_count,
    }, indent=2) + "\n", encoding="utf-8")
    return out


# ---------------------------------------------------------------- records

class TrackEntry(NamedTuple):
    t: int
    present: bool
    obb: OBB | None
    confidence: float


@dataclass(frozen=True)
class TrackRecord:
    component_id: str
    entries: tuple[TrackEntry, ...]

    def __post_init__(self):
        for i, e in enumerate(self.entries):
            if e.t != i:
                raise TrackerError(f"track {self.component_id!r}: entry {i} has frame index {e.t}")
            if (e.obb is not None) != e.present:
                raise TrackerError(f"track {self.component_id!r}: obb must be set iff present")
            if not e.present and e.confidence != 0.0:
                raise TrackerError(f"track {self.component_id!r}: absent frames carry confidence 0")

    def __len__(self) -> int:
        return len(self.entries)

    @property
    def presence(self) -> np.ndarray:
        return np.array([e.present for e in self.entries], dtype=bool)

    @classmethod
    def from_obbs(cls, component_id: str, obbs: Sequence[OBB | None],
                  confidences: Sequence[float] | None = None) -> "TrackRecord":
        if confidences is None:
            confidences = [1.0] * len(obbs)
        return cls(component_id, tuple(
            TrackEntry(t, o is not None, o, float(c) if o is not None else 0.0)
            for t, (o, c) in enumerate(zip(obbs, confidences))
        ))


@dataclass(frozen=True)
class Detection:
    polygon: tuple[tuple[float, float], ...]
    cls: str = "IMAGE"
    confidence: float = 1.0

    def __post_init__(self):
        if not 0.0 <= self.confidence <= 1.0:
            raise TrackerError("detection confidence must lie in [0, 1]")
        if len(self.polygon) != 4:
            raise TrackerError("detections are 4-vertex oriented boxes")


def presence_fraction(track: TrackRecord) -> float:
    if len(track) == 0:
        raise TrackerError(f"track {track.component_id!r} is empty")
    return float(track.presence.mean())


# --------------------------------------------------------------- contour

def foreground_mask(frame: np.ndarray, background_rgb, noise_threshold: int = DEFAULT_NOISE_THRESHOLD) -> np.ndarray:
    """Pixels whose largest per-channel deviation from the background exceeds
    ``noise_threshold``."""
    mask = np.zeros(frame.shape[:2], dtype=bool)
    for c in range(3):
        ch = frame[..., c]
        b = int(background_rgb[c])
        if b + noise_threshold < 255:
            mask |= ch > b + noise_threshold
        if b - noise_threshold > 0:
            mask |= ch < b - noise_threshold
    return mask


def _blob_points(mask: np.ndarray, min_area: int) -> np.ndarray | None:
    """Pixel-corner outline points of all connected regions with at least
    ``min_area`` pixels, merged into one set; None when nothing qualifies."""
    rows = np.flatnonzero(mask.any(axis=1))
    if rows.size == 0:
        return None
    cols = np.flatnonzero(mask.any(axis=0))
    r0, c0 = rows[0], cols[0]
    crop = mask[r0:rows[-1] + 1, c0:cols[-1] + 1]
    labels, n = ndimage.label(crop, structure=np.ones((3, 3), dtype=bool))
    if n == 0:
        return None
    sizes = np.bincount(labels.ravel())
    keep = sizes >= min_area
    keep[0] = False
    if not keep.any():
        return None
    if not keep[1:].all():
        crop = keep[labels]
    row_has = crop.any(axis=1)
    ys = np.flatnonzero(row_has)
    sub = crop[ys]
    left = np.argmax(sub, axis=1)
    right = sub.shape[1] - 1 - np.argmax(sub[:, ::-1], axis=1)
    ys = ys + r0
    left = left + c0
    right = right + c0 + 1
    pts = np.concatenate([
        np.stack([left, ys], 1), np.stack([left, ys + 1], 1),
        np.stack([right, ys], 1), np.stack([right, ys + 1], 1),
    ]).astype(float)
    return pts


def contour_track(frames: FrameSource, background_rgb, noise_threshold: int = DEFAULT_NOISE_THRESHOLD,
                  min_area: int = DEFAULT_MIN_AREA, component_id: str = "component") -> TrackRecord:
    """Track the single foreground component of a plain-background clip.

    Confidence is the fitted box area over its running maximum, which doubles
    as the opacity proxy for contour mode.
    """
    entries = []
    peak = 0.0
    shape = (frames.height, frames.width)
    for t, fr in enumerate(frames):
        if fr.shape[:2] != shape or fr.ndim != 3:
            raise TrackerError(f"frame {t}: expected {shape[1]}x{shape[0]} RGB, got shape {fr.shape}")
        pts = _blob_points(foreground_mask(fr, background_rgb, noise_threshold), min_area)
        if pts is None:
            entries.append(TrackEntry(t, False, None, 0.0))
            continue
        box = min_area_obb(pts)
        peak = max(peak, box.area)
        conf = box.area / peak if peak > 0 else 1.0
        entries.append(TrackEntry(t, True, box, float(conf)))
    return TrackRecord(component_id, tuple(entries))


# ---------------------------------------------------------- layout match

def _aabb(poly: np.ndarray) -> tuple[float, float, float, float]:
    return poly[:, 0].min(), poly[:, 1].min(), poly[:, 0].max(), poly[:, 1].max()


def layout_match_track(detections: Sequence[Sequence[Detection]], spec: LayoutSpec,
                       video_dims: tuple[int, int] | None = None,
                       iou_floor: float = DEFAULT_IOU_FLOOR,
                       expected_frames: int | None = None) -> dict[str, TrackRecord]:
    """Match each frame's detections to the (isotropically rescaled) layout
    polygons; returns one track per layout component."""
    if expected_frames is not None and len(detections) != expected_frames:
        raise TrackerError(
            f"detections cover {len(detections)} frames but the video has {expected_frames}"
        )
    vw, vh = video_dims if video_dims is not None else (spec.canvas_width, spec.canvas_height)
    s = min(vw / spec.canvas_width, vh / spec.canvas_height)
    comps = list(spec.walk())
    polys = [c.obb().scaled(s).corners() for c in comps]
    boxes = [_aabb(p) for p in polys]
    per_comp: list[list[TrackEntry]] = [[] for _ in comps]

    for t, dets in enumerate(detections):
        dpolys = [np.asarray(d.polygon, dtype=float) for d in dets]
        dboxes = [_aabb(p) for p in dpolys]
        iou = np.zeros((len(comps), len(dets)))
        for i, (p, b) in enumerate(zip(polys, boxes)):
            for j, (q, e) in enumerate(zip(dpolys, dboxes)):
                if b[0] >= e[2] or e[0] >= b[2] or b[1] >= e[3] or e[1] >= b[3]:
                    continue
                iou[i, j] = polygon_iou(p, q)
        result = hungarian(1.0 - iou, pad_cost=1.0) if dets else None
        matched: dict[int, int] = {}
        if result is not None:
            matched = {i: j for i, j in result.matches if iou[i, j] >= iou_floor and iou[i, j] > 0}
        for i in range(len(comps)):
            j = matched.get(i)
            if j is None:
                per_comp[i].append(TrackEntry(t, False, None, 0.0))
            else:
                d = dets[j]
                per_comp[i].append(TrackEntry(t, True, min_area_obb(dpolys[j]), float(d.confidence)))
    return {c.id: TrackRecord(c.id, tuple(e)) for c, e in zip(comps, per_comp)}


# ----------------------------------------------------------- detections io

def load_detections(path) -> tuple[float, list[list[Detection]], tuple[int, int] | None]:
    """Read a detections file; returns (fps, per-frame detections, video dims or None)."""
    with open(path, "r", encoding="utf-8") as fh:
        doc = json.load(fh)
    try:
        fps = float(doc["fps"])
        frames = [
            [Detection(tuple((float(x), float(y)) for x, y in d["poly"]),
                       str(d.get("class", "IMAGE")).upper(), float(d.get("conf", 1.0)))
             for d in frame]
            for frame in doc["frames"]
        ]
    except (KeyError, TypeError, ValueError) as exc:
        raise TrackerError(f"{path}: malformed detections file ({exc})") from exc
    dims = (int(doc["width"]), int(doc["height"])) if "width" in doc and "height" in doc else None
    return fps, frames, dims


def save_detections(path, fps: float, frames: Sequence[Sequence[Detection]],
                    video_dims: tuple[int, int] | None = None) -> None:
    doc: dict = {"fps": fps}
    if video_dims is not None:
        doc["width"], doc["height"] = video_dims
    doc["frames"] = [
        [{"poly": [[round(x, 4), round(y, 4)] for x, y in d.polygon], "class": d.cls,
          "conf": round(d.confidence, 6)} for d in frame]
        for frame in frames
    ]
    os.makedirs(os.path.dirname(os.path.abspath(path)), exist_ok=True)
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(doc, fh)
