"""Text recoverability: CER-costed frame-wise assignment, best over time.

OCR engines are not run here. Candidates come from a file holding, per
sampled frame, the list of recognised lines (see :func:`load_ocr_candidates`).
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .geometry import hungarian
from .layout import LayoutSpec, text_components

__all__ = [
    "DEFAULT_SAMPLE_FPS",
    "OcrFrameCandidates",
    "ComponentTextScore",
    "TextScores",
    "levenshtein",
    "cer",
    "frame_text_assignment",
    "score_text",
    "sample_frame_times",
    "sample_frame_indices",
    "select_samples",
    "load_ocr_candidates",
    "save_ocr_candidates",
]

DEFAULT_SAMPLE_FPS = 2.0


@dataclass(frozen=True)
class OcrFrameCandidates:
    frame_time_s: float
    lines: tuple[str, ...] = ()


@dataclass(frozen=True)
class ComponentTextScore:
    component_id: str
    best_score: float
    exact_ever: bool
    best_frame_time_s: float | None


@dataclass(frozen=True)
class TextScores:
    """``best_ar``/``hard_ar`` are None when the layout has no text."""

    best_ar: float | None
    hard_ar: float | None
    per_component: tuple[ComponentTextScore, ...] = field(default_factory=tuple)

    @property
    def applicable(self) -> bool:
        return bool(self.per_component)


def levenshtein(a: str, b: str) -> int:
    """Unit-cost edit distance over code points."""
    if len(a) < len(b):
        a, b = b, a
    prev = list(range(len(b) + 1))
    for i, ca in enumerate(a, 1):
        cur = [i]
        for j, cb in enumerate(b, 1):
            cur.append(min(prev[j] + 1, cur[j - 1] + 1, prev[j - 1] + (ca != cb)))
        prev = cur
    return prev[-1]


def cer(gt: str, candidate: str) -> float:
    """Edit distance divided by the ground-truth length (at least 1).
    Case, whitespace and punctuation are significant."""
    return levenshtein(gt, candidate) / max(len(gt), 1)


def frame_text_assignment(gt_strings: Sequence[str], lines: Sequence[str]) -> list[tuple[float, int | None]]:
    """Assign one frame's OCR lines to the ground-truth strings.

    Returns ``(cost, line index)`` per ground-truth string; strings left
    without a line cost 1 and get ``None``. Extra lines are ignored.
    """
    if not gt_strings:
        return []
    cost = np.array([[cer(g, p) for p in lines] for g in gt_strings]).reshape(len(gt_strings), len(lines))
    res = hungarian(cost, pad_cost=1.0)
    out: list[tuple[float, int | None]] = [(1.0, None)] * len(gt_strings)
    for i, j in res.matches:
        out[i] = (float(cost[i, j]), j)
    return out


def score_text(spec: LayoutSpec, frames: Sequence[OcrFrameCandidates]) -> TextScores:
    comps = text_components(spec)
    if not comps:
        return TextScores(None, None, ())
    gts = [c.text.content for c in comps]
    best = [-1.0] * len(comps)  # below any real score, so the first frame always registers
    best_t: list[float | None] = [None] * len(comps)
    exact = [False] * len(comps)
    for fr in sorted(frames, key=lambda f: f.frame_time_s):
        for i, (cost, j) in enumerate(frame_text_assignment(gts, fr.lines)):
            score = max(0.0, 1.0 - cost)
            if score > best[i]:
                best[i], best_t[i] = score, fr.frame_time_s
            if j is not None and fr.lines[j] == gts[i]:
                exact[i] = True
    best = [max(b, 0.0) for b in best]
    per = tuple(
        ComponentTextScore(c.id, best[i], exact[i], best_t[i]) for i, c in enumerate(comps)
    )
    return TextScores(
        best_ar=sum(best) / len(best),
        hard_ar=sum(exact) / len(exact),
        per_component=per,
    )


def sample_frame_times(clip_duration_s: float, sample_fps: float = DEFAULT_SAMPLE_FPS) -> list[float]:
    """Times k / sample_fps that fall strictly inside the clip."""
    if sample_fps <= 0:
        raise ValueError("sample_fps must be positive")
    n = max(0, math.ceil(clip_duration_s * sample_fps - 1e-9))
    return [k / sample_fps for k in range(n)]


def sample_frame_indices(clip_duration_s: float, video_fps: float, frame_count: int,
                         sample_fps: float = DEFAULT_SAMPLE_FPS) -> list[int]:
    """Nearest source frame for every sample time."""
    return [min(frame_count - 1, int(round(t * video_fps)))
            for t in sample_frame_times(clip_duration_s, sample_fps)]


def select_samples(frames: Sequence[OcrFrameCandidates], clip_duration_s: float,
                   sample_fps: float = DEFAULT_SAMPLE_FPS) -> list[OcrFrameCandidates]:
    """Keep the candidate record closest to each sampling time.

    A record further than half a sampling step from every grid time is dropped.
    """
    if not frames:
        return []
    half = 0.5 / sample_fps
    ordered = sorted(frames, key=lambda f: f.frame_time_s)
    times = np.array([f.frame_time_s for f in ordered])
    chosen: dict[int, OcrFrameCandidates] = {}
    for t in sample_frame_times(clip_duration_s, sample_fps):
        k = int(np.argmin(np.abs(times - t)))
        if abs(times[k] - t) <= half + 1e-9:
            chosen[k] = ordered[k]
    return [chosen[k] for k in sorted(chosen)]


def load_ocr_candidates(path) -> list[OcrFrameCandidates]:
    with open(path, "r", encoding="utf-8") as fh:
        doc = json.load(fh)
    try:
        return [
            OcrFrameCandidates(float(s["t_s"]), tuple(str(x) for x in s.get("lines", [])))
            for s in doc["samples"]
        ]
    except (KeyError, TypeError, ValueError) as exc:
        raise ValueError(f"{path}: malformed OCR candidates file ({exc})") from exc


def save_ocr_candidates(path, frames: Sequence[OcrFrameCandidates]) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump({"samples": [{"t_s": f.frame_time_s, "lines": list(f.lines)} for f in frames]},
                  fh, indent=2, ensure_ascii=False)
