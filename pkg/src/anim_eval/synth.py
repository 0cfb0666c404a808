"""Deterministic synthetic animation renderer.

Scenes are lists of rectangles on a flat background, each driven by a simple
motion program with linear easing. Rendering is pure numpy with one fixed
rasterisation rule (a pixel is covered when its centre lies in the half-open
rotated rectangle), so re-rendering a scene reproduces every byte.

Besides frames, a render yields the matching layout, per-element expectations
(class, direction, windows) and oracle detections for the layout matcher.
"""
from __future__ import annotations

import functools
import hashlib
import json
import math
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import ClassVar

import numpy as np

from .geometry import OBB
from .layout import (Animation, Component, LayoutSpec, ObservableClass as OC, TextAttrs,
                     serialize_layout, validate_layout)
from .trackers import DEFAULT_NOISE_THRESHOLD, CallableFrameSource, Detection, save_detections, write_frame_dir

__all__ = [
    "Pose",
    "Program",
    "Static",
    "Rise",
    "Pan",
    "Pop",
    "Fade",
    "Tumble",
    "Wiggle",
    "Breathe",
    "SyntheticElement",
    "SyntheticScene",
    "RenderedScene",
    "UNIT",
    "scene_frames",
    "render_scene",
    "standard_suite",
    "scene_from_dict",
    "scene_to_dict",
    "oracle_ocr",
]

_R2 = math.sqrt(0.5)
# screen-space unit vectors (y down)
UNIT = {
    "right": (1.0, 0.0), "left": (-1.0, 0.0), "up": (0.0, -1.0), "down": (0.0, 1.0),
    "up_right": (_R2, -_R2), "up_left": (-_R2, -_R2),
    "down_right": (_R2, _R2), "down_left": (-_R2, _R2),
}


@dataclass(frozen=True)
class Pose:
    dx: float = 0.0
    dy: float = 0.0
    scale: float = 1.0
    angle: float = 0.0  # degrees, positive = clockwise on screen
    alpha: float = 1.0


def _progress(t: float, trigger: float, duration: float) -> float:
    if duration <= 0:
        return 1.0 if t >= trigger else 0.0
    return min(max((t - trigger) / duration, 0.0), 1.0)


@dataclass(frozen=True)
class Program:
    kind: ClassVar[str] = ""
    observable: ClassVar[OC] = OC.STATIC
    verb: ClassVar[str] = ""

    trigger: float = field(default=0.0, kw_only=True)

    def pose(self, t: float) -> Pose:
        return Pose()

    @property
    def direction(self) -> str:
        return "none"

    @property
    def anim_duration(self) -> float:
        return float(getattr(self, "duration", 0.0))

    def layout_verb(self) -> str:
        return getattr(self, "label", None) or self.verb

    def to_dict(self) -> dict:
        return {"kind": self.kind, **asdict(self)}


@dataclass(frozen=True)
class Static(Program):
    kind: ClassVar[str] = "static"
    observable: ClassVar[OC] = OC.STATIC
    verb: ClassVar[str] = "static"


@dataclass(frozen=True)
class Rise(Program):
    """Entry translation: start ``distance`` px back along ``towards`` and
    move into the rest pose, then hold."""

    kind: ClassVar[str] = "rise"
    observable: ClassVar[OC] = OC.SCRAPBOOK
    verb: ClassVar[str] = "rise"

    towards: str = "up"
    duration: float = 0.56
    distance: float = 240.0
    label: str = "rise"

    def __post_init__(self):
        if self.towards not in UNIT:
            raise ValueError(f"rise direction must be one of {sorted(UNIT)}")
        if self.duration <= 0 or self.distance <= 0:
            raise ValueError("rise needs positive duration and distance")

    def pose(self, t: float) -> Pose:
        ux, uy = UNIT[self.towards]
        back = self.distance * (1.0 - _progress(t, self.trigger, self.duration))
        return Pose(dx=-ux * back, dy=-uy * back)

    @property
    def direction(self) -> str:
        return self.towards


@dataclass(frozen=True)
class Pan(Program):
    """Sustained translation at constant speed ending in the rest pose."""

    kind: ClassVar[str] = "pan"
    observable: ClassVar[OC] = OC.PAN
    verb: ClassVar[str] = "sustained_pan"

    towards: str = "right"
    speed: float = 400.0 / 3.0  # px/s
    duration: float = 3.0

    def __post_init__(self):
        if self.towards not in UNIT:
            raise ValueError(f"pan direction must be one of {sorted(UNIT)}")
        if self.speed <= 0 or self.duration <= 0:
            raise ValueError("pan needs positive speed and duration")

    def pose(self, t: float) -> Pose:
        ux, uy = UNIT[self.towards]
        back = self.speed * self.duration * (1.0 - _progress(t, self.trigger, self.duration))
        return Pose(dx=-ux * back, dy=-uy * back)

    @property
    def direction(self) -> str:
        return self.towards


@dataclass(frozen=True)
class Pop(Program):
    """Scale from ``start_scale`` up to ``overshoot`` (at 60% of the
    duration) and settle back to 1."""

    kind: ClassVar[str] = "pop"
    observable: ClassVar[OC] = OC.POP
    verb: ClassVar[str] = "pop"

    duration: float = 0.56
    overshoot: float = 1.3
    start_scale: float = 0.5

    def __post_init__(self):
        if self.duration <= 0 or self.overshoot <= 0 or self.start_scale <= 0:
            raise ValueError("pop parameters must be positive")

    def pose(self, t: float) -> Pose:
        f = _progress(t, self.trigger, self.duration)
        if f < 0.6:
            k = self.start_scale + (self.overshoot - self.start_scale) * f / 0.6
        else:
            k = self.overshoot + (1.0 - self.overshoot) * (f - 0.6) / 0.4
        return Pose(scale=k)


@dataclass(frozen=True)
class Fade(Program):
    kind: ClassVar[str] = "fade"
    observable: ClassVar[OC] = OC.FADE
    verb: ClassVar[str] = "fade"

    duration: float = 1.0
    mode: str = "in"

    def __post_init__(self):
        if self.mode not in ("in", "out"):
            raise ValueError("fade mode is 'in' or 'out'")
        if self.duration <= 0:
            raise ValueError("fade needs a positive duration")

    def pose(self, t: float) -> Pose:
        f = _progress(t, self.trigger, self.duration)
        return Pose(alpha=f if self.mode == "in" else 1.0 - f)


@dataclass(frozen=True)
class Tumble(Program):
    kind: ClassVar[str] = "tumble"
    observable: ClassVar[OC] = OC.ROTATE
    verb: ClassVar[str] = "tumble"

    total_deg: float = 180.0  # positive turns clockwise on screen
    duration: float = 1.12

    def __post_init__(self):
        if self.duration <= 0 or self.total_deg == 0:
            raise ValueError("tumble needs a positive duration and a non-zero angle")

    def pose(self, t: float) -> Pose:
        return Pose(angle=self.total_deg * _progress(t, self.trigger, self.duration))

    @property
    def direction(self) -> str:
        return "clockwise" if self.total_deg > 0 else "anticlockwise"


@dataclass(frozen=True)
class Wiggle(Program):
    """Angular oscillation about the centre."""

    kind: ClassVar[str] = "wiggle"
    observable: ClassVar[OC] = OC.WIGGLE
    verb: ClassVar[str] = "wiggle"

    amp_deg: float = 12.0
    freq_hz: float = 2.0
    duration: float = 5.0

    def __post_init__(self):
        if self.amp_deg <= 0 or self.freq_hz <= 0 or self.duration <= 0:
            raise ValueError("wiggle parameters must be positive")

    def pose(self, t: float) -> Pose:
        if not self.trigger <= t <= self.trigger + self.duration:
            return Pose()
        return Pose(angle=self.amp_deg * math.sin(2 * math.pi * self.freq_hz * (t - self.trigger)))


@dataclass(frozen=True)
class Breathe(Program):
    """Scale oscillation about 1."""

    kind: ClassVar[str] = "breathe"
    observable: ClassVar[OC] = OC.BREATHE
    verb: ClassVar[str] = "breathe"

    amp: float = 0.08
    freq_hz: float = 1.0
    duration: float = 5.0

    def __post_init__(self):
        if not 0 < self.amp < 1 or self.freq_hz <= 0 or self.duration <= 0:
            raise ValueError("breathe needs 0 < amp < 1 and positive frequency and duration")

    def pose(self, t: float) -> Pose:
        if not self.trigger <= t <= self.trigger + self.duration:
            return Pose()
        return Pose(scale=1.0 + self.amp * math.sin(2 * math.pi * self.freq_hz * (t - self.trigger)))


_PROGRAMS = {cls.kind: cls for cls in (Static, Rise, Pan, Pop, Fade, Tumble, Wiggle, Breathe)}


@dataclass(frozen=True)
class SyntheticElement:
    id: str
    left: float
    top: float
    width: float
    height: float
    fill: tuple[int, int, int] = (40, 90, 200)
    program: Program | None = None  # None: a non-animated layout component
    visible_from: float = 0.0
    visible_until: float | None = None  # None: until the end of the clip
    kind: str = "IMAGE"
    text: str | None = None

    @property
    def rest_center(self) -> tuple[float, float]:
        return self.left + self.width / 2.0, self.top + self.height / 2.0


@dataclass(frozen=True)
class SyntheticScene:
    name: str
    width: int = 1080
    height: int = 1920
    background: tuple[int, int, int] = (255, 255, 255)
    duration_s: float = 5.0
    fps: float = 30.0
    elements: tuple[SyntheticElement, ...] = field(default_factory=tuple)

    @property
    def frame_count(self) -> int:
        return int(round(self.duration_s * self.fps))

    def validate(self, noise_threshold: int = DEFAULT_NOISE_THRESHOLD) -> None:
        if self.frame_count < 3:
            raise ValueError(f"scene {self.name!r}: fewer than 3 frames")
        ids = [e.id for e in self.elements]
        if len(set(ids)) != len(ids):
            raise ValueError(f"scene {self.name!r}: duplicate element ids")
        for e in self.elements:
            if e.width <= 0 or e.height <= 0:
                raise ValueError(f"element {e.id!r}: non-positive size")
            if e.left < 0 or e.top < 0 or e.left + e.width > self.width or e.top + e.height > self.height:
                raise ValueError(f"element {e.id!r}: rest pose leaves the canvas")
            diff = max(abs(int(a) - int(b)) for a, b in zip(e.fill, self.background))
            if diff <= noise_threshold:
                raise ValueError(f"element {e.id!r}: fill too close to the background")
            until = self.duration_s if e.visible_until is None else e.visible_until
            if not 0.0 <= e.visible_from <= until <= self.duration_s + 1e-9:
                raise ValueError(f"element {e.id!r}: visible window outside the clip")
            if (e.kind == "TEXT") != (e.text is not None):
                raise ValueError(f"element {e.id!r}: text payload iff kind TEXT")


# ---------------------------------------------------------------- glyphs

def _glyph(ch: str) -> np.ndarray:
    """Deterministic 5x7 bit pattern for one character (blank for spaces)."""
    if ch.isspace():
        return np.zeros((7, 5), dtype=bool)
    bits = int.from_bytes(hashlib.sha256(ch.encode("utf-8")).digest()[:5], "big")
    g = np.array([(bits >> i) & 1 for i in range(35)], dtype=bool).reshape(7, 5)
    g[0, :] |= True  # every glyph gets a top bar so none is empty
    return g


def _text_grid(text: str) -> np.ndarray:
    """9 x 6n cell grid: each glyph framed by one blank row/column."""
    grid = np.zeros((9, 6 * len(text)), dtype=bool)
    for i, ch in enumerate(text):
        grid[1:8, 6 * i:6 * i + 5] = _glyph(ch)
    return grid


# ------------------------------------------------------------- rendering

def _frame_range(e: SyntheticElement, scene: SyntheticScene) -> tuple[int, int]:
    until = scene.duration_s if e.visible_until is None else e.visible_until
    first = math.ceil(e.visible_from * scene.fps - 1e-9)
    stop = math.ceil(until * scene.fps - 1e-9)
    return max(first, 0), min(stop, scene.frame_count)


def _blend(fill, background, alpha: float) -> np.ndarray:
    bg = np.asarray(background, dtype=float)
    return np.round(bg + alpha * (np.asarray(fill, dtype=float) - bg)).astype(np.uint8)


def element_pose(e: SyntheticElement, t: float) -> Pose:
    return e.program.pose(t) if e.program is not None else Pose()


def element_obb(e: SyntheticElement, t: float) -> OBB:
    p = element_pose(e, t)
    cx, cy = e.rest_center
    return OBB(cx + p.dx, cy + p.dy, e.width * p.scale, e.height * p.scale, p.angle)


def element_drawn(e: SyntheticElement, scene: SyntheticScene, k: int,
                  noise_threshold: int = DEFAULT_NOISE_THRESHOLD) -> bool:
    """Whether the element shows on frame k against the bare background."""
    first, stop = _frame_range(e, scene)
    if not first <= k < stop:
        return False
    p = element_pose(e, k / scene.fps)
    if p.alpha <= 0 or p.scale <= 0:
        return False
    col = _blend(e.fill, scene.background, p.alpha).astype(int)
    return bool(np.max(np.abs(col - np.asarray(scene.background))) > noise_threshold)


def _paint(canvas: np.ndarray, e: SyntheticElement, box: OBB, alpha: float) -> None:
    H, W = canvas.shape[:2]
    corners = box.corners()
    x0 = max(int(math.floor(corners[:, 0].min())), 0)
    x1 = min(int(math.ceil(corners[:, 0].max())) + 1, W)
    y0 = max(int(math.floor(corners[:, 1].min())), 0)
    y1 = min(int(math.ceil(corners[:, 1].max())) + 1, H)
    if x0 >= x1 or y0 >= y1:
        return
    xs = np.arange(x0, x1) + 0.5 - box.cx
    ys = np.arange(y0, y1) + 0.5 - box.cy
    a = math.radians(box.theta)
    ca, sa = math.cos(a), math.sin(a)
    u = xs[None, :] * ca + ys[:, None] * sa
    v = -xs[None, :] * sa + ys[:, None] * ca
    hw, hh = box.w / 2.0, box.h / 2.0
    mask = (u >= -hw) & (u < hw) & (v >= -hh) & (v < hh)
    if e.text:
        grid = _text_grid(e.text)
        gi = np.clip(((v + hh) / box.h * grid.shape[0]).astype(int), 0, grid.shape[0] - 1)
        gj = np.clip(((u + hw) / box.w * grid.shape[1]).astype(int), 0, grid.shape[1] - 1)
        mask &= grid[gi, gj]
    if not mask.any():
        return
    region = canvas[y0:y1, x0:x1]
    if alpha >= 1.0:
        region[mask] = np.asarray(e.fill, dtype=np.uint8)
    else:
        cur = region[mask].astype(float)
        region[mask] = np.round(cur + alpha * (np.asarray(e.fill, dtype=float) - cur)).astype(np.uint8)


@functools.lru_cache(maxsize=4)
def _background(h: int, w: int, rgb: tuple[int, int, int]) -> np.ndarray:
    canvas = np.empty((h, w, 3), dtype=np.uint8)
    canvas[...] = np.asarray(rgb, dtype=np.uint8)
    canvas.flags.writeable = False
    return canvas


def render_frame(scene: SyntheticScene, k: int) -> np.ndarray:
    canvas = _background(scene.height, scene.width, tuple(scene.background)).copy()
    t = k / scene.fps
    for e in scene.elements:
        first, stop = _frame_range(e, scene)
        if not first <= k < stop:
            continue
        p = element_pose(e, t)
        if p.alpha <= 0 or p.scale <= 0:
            continue
        _paint(canvas, e, element_obb(e, t), p.alpha)
    return canvas


def scene_frames(scene: SyntheticScene) -> CallableFrameSource:
    """Lazily rendered frames; nothing touches the disk."""
    scene.validate()
    return CallableFrameSource(lambda k: render_frame(scene, k), scene.frame_count, scene.fps,
                               scene.width, scene.height)


# --------------------------------------------------------- ground truth

def scene_layout(scene: SyntheticScene) -> LayoutSpec:
    comps = []
    for e in scene.elements:
        until = scene.duration_s if e.visible_until is None else e.visible_until
        anim = None
        if e.program is not None:
            pr = e.program
            anim = Animation(pr.layout_verb(), pr.direction, pr.anim_duration, pr.trigger,
                             e.visible_from, until)
        text = None
        if e.kind == "TEXT":
            text = TextAttrs(content=e.text, font_family="glyph-grid-5x7", font_size=e.height,
                             weight=400, color=tuple(e.fill), line_height=e.height, alignment="center")
        comps.append(Component(e.id, e.kind, e.left, e.top, e.width, e.height, anim, text))
    spec = LayoutSpec(scene.width, scene.height, tuple(scene.background), scene.duration_s, tuple(comps))
    validate_layout(spec)
    return spec


def _expectation(e: SyntheticElement, scene: SyntheticScene) -> dict:
    drawn = [k for k in range(scene.frame_count) if element_drawn(e, scene, k)]
    runs, best = [], (0, None)
    start = None
    for k in drawn + [None]:
        if start is not None and (k is None or k != prev + 1):
            runs.append((start, prev))
            start = None
        if k is not None and start is None:
            start = k
        prev = k
    for r in runs:
        if r[1] - r[0] + 1 > best[0]:
            best = (r[1] - r[0] + 1, r)
    pr = e.program
    if pr is None:
        cls, direction, anim_s, window = None, "none", 0.0, None
    else:
        cls, direction, anim_s = pr.observable.value, pr.direction, pr.anim_duration
        window = None
        if anim_s > 0:
            f0 = math.ceil(pr.trigger * scene.fps - 1e-9)
            f1 = min(scene.frame_count - 1, math.ceil((pr.trigger + anim_s) * scene.fps - 1e-9))
            window = [f0, f1]
    return {
        "class": cls,
        "direction": direction,
        "anim_s": anim_s,
        "visible_s": best[0] / scene.fps,
        "anim_window": window,
        "visible_window": list(best[1]) if best[1] else None,
        "kind": e.kind,
    }


def oracle_detections(scene: SyntheticScene) -> list[list[Detection]]:
    """True element polygons on every frame the element shows; confidence is
    its opacity."""
    frames = []
    for k in range(scene.frame_count):
        dets = []
        for e in scene.elements:
            if element_drawn(e, scene, k):
                poly = tuple((float(x), float(y)) for x, y in element_obb(e, k / scene.fps).corners())
                alpha = min(max(element_pose(e, k / scene.fps).alpha, 0.0), 1.0)
                dets.append(Detection(poly, "TEXT" if e.kind == "TEXT" else "IMAGE", alpha))
        frames.append(dets)
    return frames


def oracle_ocr(scene: SyntheticScene, sample_fps: float = 2.0):
    """Perfect OCR: every text payload drawn at each sampling time."""
    from .text import OcrFrameCandidates, sample_frame_times

    out = []
    for t in sample_frame_times(scene.duration_s, sample_fps):
        k = min(scene.frame_count - 1, int(round(t * scene.fps)))
        lines = tuple(e.text for e in scene.elements if e.text and element_drawn(e, scene, k))
        out.append(OcrFrameCandidates(t, lines))
    return out


@dataclass
class RenderedScene:
    scene: SyntheticScene
    frames: CallableFrameSource
    layout: LayoutSpec
    expectations: dict[str, dict]
    detections: list[list[Detection]]


def render_scene(scene: SyntheticScene, out_dir=None) -> RenderedScene:
    """Render ``scene``; with ``out_dir`` also write frames/, layout.json,
    expectations.json, detections.json and ocr.json."""
    scene.validate()
    rs = RenderedScene(
        scene=scene,
        frames=scene_frames(scene),
        layout=scene_layout(scene),
        expectations={e.id: _expectation(e, scene) for e in scene.elements},
        detections=oracle_detections(scene),
    )
    if out_dir is not None:
        from .text import save_ocr_candidates

        out = Path(out_dir)
        write_frame_dir(rs.frames, out / "frames")
        (out / "layout.json").write_bytes(serialize_layout(rs.layout))
        (out / "expectations.json").write_text(
            json.dumps(rs.expectations, indent=2, sort_keys=True) + "\n", encoding="utf-8")
        (out / "scene.json").write_text(json.dumps(scene_to_dict(scene), indent=2) + "\n", encoding="utf-8")
        save_detections(out / "detections.json", scene.fps, rs.detections, (scene.width, scene.height))
        save_ocr_candidates(out / "ocr.json", oracle_ocr(scene))
    return rs


# ------------------------------------------------------------ scene files

def scene_to_dict(scene: SyntheticScene) -> dict:
    return {
        "name": scene.name,
        "canvas": {"width": scene.width, "height": scene.height, "background_rgb": list(scene.background)},
        "duration_s": scene.duration_s,
        "fps": scene.fps,
        "elements": [
            {
                "id": e.id, "kind": e.kind, "left": e.left, "top": e.top, "width": e.width,
                "height": e.height, "fill_rgb": list(e.fill),
                "program": e.program.to_dict() if e.program is not None else None,
                "visible_from_s": e.visible_from, "visible_until_s": e.visible_until,
                "text": e.text,
            }
            for e in scene.elements
        ],
    }


def scene_from_dict(d: dict) -> SyntheticScene:
    canvas = d.get("canvas", {})
    elements = []
    for e in d.get("elements", []):
        prog = None
        if e.get("program"):
            params = dict(e["program"])
            kind = params.pop("kind")
            if kind not in _PROGRAMS:
                raise ValueError(f"unknown motion program {kind!r}")
            prog = _PROGRAMS[kind](**params)
        elements.append(SyntheticElement(
            id=str(e["id"]), left=float(e["left"]), top=float(e["top"]),
            width=float(e["width"]), height=float(e["height"]),
            fill=tuple(e.get("fill_rgb", (40, 90, 200))), program=prog,
            visible_from=float(e.get("visible_from_s", 0.0)),
            visible_until=e.get("visible_until_s"),
            kind=str(e.get("kind", "IMAGE")).upper(), text=e.get("text"),
        ))
    return SyntheticScene(
        name=str(d.get("name", "scene")),
        width=int(canvas.get("width", 1080)), height=int(canvas.get("height", 1920)),
        background=tuple(canvas.get("background_rgb", (255, 255, 255))),
        duration_s=float(d.get("duration_s", 5.0)), fps=float(d.get("fps", 30.0)),
        elements=tuple(elements),
    )


# -------------------------------------------------------- standard suite

_W, _H = 1080, 1920
_EW, _EH = 300, 200
_ENTRY_VERBS = {
    "up": "rise", "down": "drift", "left": "shift", "right": "wipe",
    "up_right": "skate", "up_left": "ascend", "down_right": "photoflow", "down_left": "bounce",
}


def _single(name: str, program: Program, center=(_W / 2, _H / 2), visible_from=0.0,
            visible_until=None) -> SyntheticScene:
    cx, cy = center
    el = SyntheticElement("el", cx - _EW / 2, cy - _EH / 2, _EW, _EH, (40, 90, 200), program,
                          visible_from, visible_until)
    return SyntheticScene(name, _W, _H, (255, 255, 255), 5.0, 30.0, (el,))


def _multi_scenes() -> list[SyntheticScene]:
    bg = (245, 240, 230)
    s1 = SyntheticScene("multi_1", _W, _H, bg, 5.0, 30.0, (
        SyntheticElement("m1_rise", 120, 140, 300, 200, (200, 60, 60), Rise("up", 0.56, 120.0)),
        SyntheticElement("m1_pop", 660, 140, 300, 200, (60, 160, 80), Pop(0.56, trigger=0.3)),
        SyntheticElement("m1_tumble", 120, 620, 300, 200, (50, 70, 180), Tumble(180.0, 1.12, trigger=0.2)),
        SyntheticElement("m1_title", 600, 660, 420, 120, (20, 20, 20), None, kind="TEXT", text="HELLO"),
        SyntheticElement("m1_wiggle", 120, 1100, 300, 200, (180, 120, 20), Wiggle(12.0, 2.0)),
        SyntheticElement("m1_shift", 640, 1110, 340, 180, (120, 40, 140),
                         Rise("left", 0.56, 120.0, trigger=0.6, label="shift")),
    ))
    s2 = SyntheticScene("multi_2", _W, _H, bg, 5.0, 30.0, (
        SyntheticElement("m2_pan", 300, 1620, 500, 160, (30, 120, 160), Pan("right", 80.0, 3.0)),
        SyntheticElement("m2_breathe", 140, 200, 300, 220, (190, 70, 110), Breathe(0.08, 1.0)),
        SyntheticElement("m2_drift", 640, 200, 300, 220, (70, 140, 60),
                         Rise("down_right", 0.56, 100.0, trigger=0.4, label="drift")),
        SyntheticElement("m2_still", 140, 700, 300, 220, (90, 90, 90), Static()),
        SyntheticElement("m2_caption", 600, 760, 420, 120, (10, 10, 60),
                         Rise("up", 0.56, 60.0, trigger=0.8), kind="TEXT", text="SALE 50%"),
    ))
    s3 = SyntheticScene("multi_3", _W, _H, bg, 5.0, 30.0, (
        SyntheticElement("m3_up", 80, 120, 260, 200, (200, 80, 40), Rise("up", 0.56, 100.0)),
        SyntheticElement("m3_right", 410, 120, 260, 200, (40, 80, 200),
                         Rise("right", 0.56, 100.0, trigger=0.25, label="wipe")),
        SyntheticElement("m3_dl", 740, 120, 260, 200, (40, 160, 120),
                         Rise("down_left", 0.56, 100.0, trigger=0.5, label="bounce")),
        SyntheticElement("m3_pop", 80, 620, 260, 200, (160, 40, 160), Pop(0.56, trigger=0.4, overshoot=1.3)),
        SyntheticElement("m3_tumble", 410, 620, 260, 200, (220, 140, 20), Tumble(-180.0, 1.12, trigger=0.1)),
        SyntheticElement("m3_breathe", 740, 620, 260, 200, (20, 140, 200), Breathe(0.08, 1.0)),
        SyntheticElement("m3_text", 120, 1160, 840, 120, (30, 30, 30), None, kind="TEXT", text="COLEGIO DE DANZA"),
        SyntheticElement("m3_bg", 120, 1500, 840, 200, (150, 150, 190), None),
    ))
    return [s1, s2, s3]


def standard_suite() -> list[SyntheticScene]:
    """22 single-component scenes covering every emitted class, plus three
    multi-element layouts for the layout matcher."""
    scenes = []
    for d, verb in _ENTRY_VERBS.items():
        scenes.append(_single(f"entry_{d}", Rise(d, 0.56, 240.0, label=verb)))
    scenes.append(_single("pop", Pop(0.56)))
    scenes.append(_single("fade_in", Fade(1.0, "in", trigger=1.0), visible_from=1.0))
    scenes.append(_single("fade_out", Fade(1.0, "out", trigger=3.0), visible_until=4.0))
    scenes.append(_single("tumble_cw", Tumble(180.0, 1.12)))
    scenes.append(_single("tumble_ccw", Tumble(-180.0, 1.12)))
    for d in ("right", "left", "up", "down", "up_right"):
        ux, uy = UNIT[d]
        # centre the 400 px path on the canvas
        scenes.append(_single(f"pan_{d}", Pan(d, 400.0 / 3.0, 3.0),
                              center=(_W / 2 + 200 * ux, _H / 2 + 200 * uy)))
    scenes.append(_single("wiggle", Wiggle(12.0, 2.0)))
    scenes.append(_single("breathe", Breathe(0.08, 1.0)))
    scenes.append(_single("static", Static()))
    return scenes + _multi_scenes()
