"""End-to-end evaluation of one video against its layout, and pooled metrics.

A video yields one :class:`ComponentResult` per animated component plus the
layout's text scores. :func:`aggregate` pools results over many videos, both
over every component and over the reliably tracked ones.
"""
from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field, fields
from typing import Sequence

from .classifier import ClassifierError, Thresholds, classify_motion, motion_credit
from .direction import DEFAULT_MIN_DISPLACEMENT, classify_direction, direction_match
from .duration import duration_errors, estimate_anim_duration, estimate_visible_duration
from .features import CONTOUR, EPSILON, FeatureError, LAYOUT_MATCH, build_signals, compute_energy, extract_features
from .layout import COMPASS, LayoutSpec, LayoutValidationError, ObservableClass as OC, animated_components
from .text import DEFAULT_SAMPLE_FPS, OcrFrameCandidates, TextScores, score_text, select_samples
from .trackers import (DEFAULT_IOU_FLOOR, DEFAULT_MIN_AREA, DEFAULT_NOISE_THRESHOLD, Detection, FrameSource,
                       TrackerError, TrackRecord, contour_track, layout_match_track, presence_fraction)

__all__ = [
    "EvalConfig",
    "ComponentResult",
    "VideoReport",
    "evaluate_video",
    "aggregate",
    "report_json",
    "RELIABLE_PRESENCE",
]

RELIABLE_PRESENCE = 0.3


@dataclass(frozen=True)
class EvalConfig:
    tracker: str = CONTOUR
    noise_threshold: int = DEFAULT_NOISE_THRESHOLD
    min_area: int = DEFAULT_MIN_AREA
    iou_floor: float = DEFAULT_IOU_FLOOR
    sample_fps: float = DEFAULT_SAMPLE_FPS
    min_displacement: float = DEFAULT_MIN_DISPLACEMENT
    reliable_presence: float = RELIABLE_PRESENCE
    epsilon: float = EPSILON
    smoothing_window: int | None = None
    thresholds: Thresholds = field(default_factory=Thresholds)

    def __post_init__(self):
        if self.tracker not in (CONTOUR, LAYOUT_MATCH):
            raise LayoutValidationError(f"unknown tracker {self.tracker!r}")

    def to_dict(self) -> dict:
        d = asdict(self)
        d["thresholds"] = self.thresholds.to_dict()
        return d


@dataclass(frozen=True)
class ComponentResult:
    video_id: str
    component_id: str
    tracker_mode: str
    presence: float
    reliable: bool
    gt_class: str
    predicted_class: str
    fired_rule: int
    motion_credit: float
    gt_direction: str
    predicted_direction: str
    direction_exact: bool
    direction_half: bool
    direction_detected: bool
    anim_duration_s: float
    gt_anim_duration_s: float
    visible_duration_s: float
    gt_visible_duration_s: float
    anim_window: tuple[int, int] | None = None
    visible_window: tuple[int, int] | None = None
    features: dict | None = None

    @property
    def anim_error_s(self) -> float:
        return self.anim_duration_s - self.gt_anim_duration_s

    @property
    def visible_error_s(self) -> float:
        return self.visible_duration_s - self.gt_visible_duration_s

    def to_dict(self) -> dict:
        d = asdict(self)
        for k in ("anim_window", "visible_window"):
            d[k] = list(d[k]) if d[k] is not None else None
        d["anim_error_s"] = self.anim_error_s
        d["visible_error_s"] = self.visible_error_s
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "ComponentResult":
        names = {f.name for f in fields(cls)}
        missing = sorted(n for n in names if n not in d and n not in
                         ("anim_window", "visible_window", "features"))
        if missing:
            raise ValueError(f"component result lacks {', '.join(missing)}")
        kw = {k: v for k, v in d.items() if k in names}
        for k in ("anim_window", "visible_window"):
            if kw.get(k) is not None:
                kw[k] = tuple(kw[k])
        return cls(**kw)


@dataclass(frozen=True)
class VideoReport:
    video_id: str
    tracker_mode: str
    components: tuple[ComponentResult, ...]
    text: TextScores | None = None
    presence: dict[str, float] = field(default_factory=dict)  # every tracked component

    def to_dict(self) -> dict:
        text = None
        if self.text is not None and self.text.applicable:
            text = {
                "best_ar": self.text.best_ar,
                "hard_ar": self.text.hard_ar,
                "components": [asdict(c) for c in self.text.per_component],
            }
        return {
            "video_id": self.video_id,
            "tracker": self.tracker_mode,
            "components": [c.to_dict() for c in self.components],
            "presence": dict(self.presence),
            "text": text,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "VideoReport":
        from .text import ComponentTextScore

        text = None
        if d.get("text"):
            t = d["text"]
            text = TextScores(t["best_ar"], t["hard_ar"],
                              tuple(ComponentTextScore(**c) for c in t["components"]))
        return cls(str(d["video_id"]), str(d.get("tracker", CONTOUR)),
                   tuple(ComponentResult.from_dict(c) for c in d.get("components", [])), text,
                   {str(k): float(v) for k, v in d.get("presence", {}).items()})


def _evaluate_track(video_id: str, component_id: str, anim, track: TrackRecord, spec: LayoutSpec,
                    fps: float, video_size, config: EvalConfig) -> ComponentResult:
    try:
        return _evaluate_track_inner(video_id, component_id, anim, track, spec, fps, video_size, config)
    except (FeatureError, ClassifierError, TrackerError) as exc:
        raise type(exc)(f"{video_id}/{component_id}: {exc}") from exc


def _evaluate_track_inner(video_id, component_id, anim, track, spec, fps, video_size,
                          config: EvalConfig) -> ComponentResult:
    mode = config.tracker
    sig = build_signals(track, spec, fps, mode, video_size)
    energy = compute_energy(sig, config.smoothing_window)
    feats = extract_features(sig, energy, config.epsilon)
    trace = classify_motion(feats, mode, config.thresholds)
    pred_dir = classify_direction(sig, trace.label, config.min_displacement)
    gt_cls = anim.observable_class
    dm = direction_match(anim.direction, pred_dir)
    anim_s, anim_win = estimate_anim_duration(energy, fps)
    vis_s, vis_win = estimate_visible_duration(track, fps)
    pres = presence_fraction(track)
    return ComponentResult(
        video_id=video_id,
        component_id=component_id,
        tracker_mode=mode,
        presence=pres,
        reliable=pres > config.reliable_presence,
        gt_class=gt_cls.value,
        predicted_class=trace.label.value,
        fired_rule=trace.fired_rule,
        motion_credit=motion_credit(gt_cls, trace.label),
        gt_direction=anim.direction,
        predicted_direction=pred_dir,
        direction_exact=dm.exact,
        direction_half=dm.half_correct,
        direction_detected=dm.detected,
        anim_duration_s=anim_s,
        gt_anim_duration_s=float(anim.anim_duration),
        visible_duration_s=vis_s,
        gt_visible_duration_s=float(anim.visible_until - anim.visible_from),
        anim_window=anim_win,
        visible_window=vis_win,
        features=feats.to_dict(),
    )


def evaluate_video(spec: LayoutSpec, frames: FrameSource | None = None,
                   detections: Sequence[Sequence[Detection]] | None = None,
                   ocr: Sequence[OcrFrameCandidates] | None = None,
                   config: EvalConfig | None = None, video_id: str = "video",
                   fps: float | None = None, video_dims: tuple[int, int] | None = None) -> VideoReport:
    """Track, classify and time every animated component of one video.

    Contour mode reads ``frames`` and needs a layout with at most one animated
    component. Layout-match mode reads ``detections`` (``fps`` and
    ``video_dims`` fall back to the frames, then to the layout canvas).
    Text is scored whenever OCR candidates are given.
    """
    config = config or EvalConfig()
    targets = animated_components(spec)
    results: list[ComponentResult] = []
    presence: dict[str, float] = {}

    if config.tracker == CONTOUR:
        if len(targets) > 1:
            raise LayoutValidationError(
                f"contour tracking needs a single animated component, layout has {len(targets)}; "
                "use the layout_match tracker"
            )
        if targets:
            if frames is None:
                raise LayoutValidationError("contour tracking needs video frames")
            cid, anim, _ = targets[0]
            track = contour_track(frames, spec.background_color, config.noise_threshold,
                                  config.min_area, component_id=cid)
            size = (frames.width, frames.height)
            results.append(_evaluate_track(video_id, cid, anim, track, spec, frames.fps, size, config))
            presence[cid] = presence_fraction(track)
        clip_s = frames.frame_count / frames.fps if frames is not None else spec.total_duration
    else:
        if detections is None:
            raise LayoutValidationError("layout_match tracking needs per-frame detections (--detections)")
        if fps is None:
            fps = frames.fps if frames is not None else None
        if fps is None or fps <= 0:
            raise LayoutValidationError("layout_match tracking needs a positive frame rate")
        if video_dims is None and frames is not None:
            video_dims = (frames.width, frames.height)
        expected = frames.frame_count if frames is not None else None
        tracks = layout_match_track(detections, spec, video_dims, config.iou_floor, expected)
        presence = {cid: presence_fraction(tr) for cid, tr in tracks.items() if len(tr)}
        for cid, anim, _ in targets:
            results.append(_evaluate_track(video_id, cid, anim, tracks[cid], spec, fps, video_dims, config))
        clip_s = len(detections) / fps

    text = None
    if ocr is not None:
        text = score_text(spec, select_samples(ocr, clip_s, config.sample_fps))
    return VideoReport(video_id, config.tracker, tuple(results), text, presence)


# -------------------------------------------------------------- pooling

def _mean(vals) -> float | None:
    vals = list(vals)
    return sum(vals) / len(vals) if vals else None


def _ratio(hits: int, total: int) -> dict:
    return {"num": hits, "den": total, "rate": hits / total if total else None}


def _direction_tallies(pool: Sequence[ComponentResult]) -> dict:
    compass = [r for r in pool if r.gt_direction in COMPASS]
    none_gt = [r for r in pool if r.gt_direction == "none"]
    family = [r for r in compass if r.gt_class in (OC.SCRAPBOOK.value, OC.PAN.value)]
    rot = [r for r in pool if r.gt_direction in ("clockwise", "anticlockwise")]
    known = [r for r in pool if r.gt_direction != "unknown"]
    return {
        "motion_detected": _ratio(sum(r.direction_detected for r in compass), len(compass)),
        "correctly_none": _ratio(sum(r.predicted_direction == "none" for r in none_gt), len(none_gt)),
        "correct_half": _ratio(sum(r.direction_half for r in family), len(family)),
        "rotation_sense": _ratio(sum(r.direction_exact for r in rot), len(rot)),
        "exact": _ratio(sum(r.direction_exact for r in known), len(known)),
    }


def _duration_block(pool: Sequence[ComponentResult]) -> dict:
    out = {}
    for name, est, gt in (("anim", "anim_duration_s", "gt_anim_duration_s"),
                          ("visible", "visible_duration_s", "gt_visible_duration_s")):
        pairs = [(getattr(r, est), getattr(r, gt)) for r in pool]
        if name == "anim":
            pairs = [p for p, r in zip(pairs, pool) if r.gt_anim_duration_s > 0]
        if pairs:
            s = duration_errors(pairs)
            out[name] = {"n": len(pairs), "mae": s.mae, "median_ae": s.median_ae, "bias": s.bias}
        else:
            out[name] = {"n": 0, "mae": None, "median_ae": None, "bias": None}
    return out


def _pool_block(pool: Sequence[ComponentResult]) -> dict:
    per_class: dict[str, list[float]] = {}
    for r in pool:
        per_class.setdefault(r.gt_class, []).append(r.motion_credit)
    return {
        "n": len(pool),
        "presence_mean": _mean(r.presence for r in pool),
        "motion_accuracy": _mean(r.motion_credit for r in pool),
        "per_class_credit": {k: _mean(v) for k, v in sorted(per_class.items())},
        "direction": _direction_tallies(pool),
        "duration": _duration_block(pool),
    }


def aggregate(reports: Sequence[VideoReport]) -> dict:
    """Pool component results over videos, over every component and over the
    reliably tracked subset, plus mean text scores over text components."""
    if not reports:
        raise ValueError("nothing to aggregate")
    comps = sorted((c for rep in reports for c in rep.components),
                   key=lambda c: (c.video_id, c.component_id))
    reliable = [c for c in comps if c.reliable]
    text = [t for rep in reports if rep.text is not None for t in rep.text.per_component]
    return {
        "n_videos": len(reports),
        "n_components": len(comps),
        "n_reliable": len(reliable),
        "reliable_fraction": len(reliable) / len(comps) if comps else None,
        "all": _pool_block(comps),
        "reliable": _pool_block(reliable),
        "text": {
            "n": len(text),
            "best_ar": _mean(t.best_score for t in text),
            "hard_ar": _mean(float(t.exact_ever) for t in text),
        },
    }


def _rounded(obj):
    if isinstance(obj, float):
        if not math.isfinite(obj):
            return None
        r = round(obj, 6)
        return 0.0 if r == 0 else r
    if isinstance(obj, dict):
        return {str(k): _rounded(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_rounded(v) for v in obj]
    return obj


def report_json(doc: dict) -> str:
    """Stable serialisation: sorted keys, floats rounded to 6 decimals."""
    return json.dumps(_rounded(doc), indent=2, sort_keys=True, ensure_ascii=False) + "\n"

