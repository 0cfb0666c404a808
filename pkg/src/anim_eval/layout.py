"""Layout specifications and the motion-verb vocabulary.

A layout is the ground truth for one video: canvas, component tree, and the
per-component animation and text attributes the evaluation scores against.
"""
from __future__ import annotations

import json
import logging
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Iterator

from .geometry import OBB

log = logging.getLogger(__name__)

__all__ = [
    "ObservableClass",
    "DIRECTIONS",
    "COMPASS",
    "Animation",
    "TextAttrs",
    "Component",
    "LayoutSpec",
    "LayoutError",
    "LayoutParseError",
    "LayoutValidationError",
    "VERB_GROUPS",
    "normalize_verb",
    "verb_is_known",
    "parse_layout",
    "load_layout",
    "serialize_layout",
    "animated_components",
    "text_components",
]


class LayoutError(ValueError):
    pass


class LayoutParseError(LayoutError):
    """The JSON does not follow the layout schema."""


class LayoutValidationError(LayoutError):
    """The layout is well-formed but violates an invariant."""


class ObservableClass(str, Enum):
    STATIC = "static"
    FADE = "fade"
    SCRAPBOOK = "scrapbook"
    POP = "pop"
    WIGGLE = "wiggle"
    BREATHE = "breathe"
    ROTATE = "rotate"
    PAN = "pan"
    SKETCH = "sketch"
    NEON = "neon"
    UNKNOWN = "unknown"

    def __str__(self) -> str:
        return self.value


COMPASS = ("right", "up_right", "up", "up_left", "left", "down_left", "down", "down_right")
DIRECTIONS = COMPASS + ("clockwise", "anticlockwise", "none")
# direction strings seen in real prompts that mean "no linear direction"
_DIRECTION_ALIASES = {"irrelevant": "none", "counterclockwise": "anticlockwise"}

# motion verb groups: verb -> observable class
VERB_GROUPS: dict[ObservableClass, tuple[str, ...]] = {
    ObservableClass.SCRAPBOOK: (
        "rise", "ascend", "drift", "pan", "wipe", "shift", "skate",
        "photorise", "photoflow", "scrapbook", "bounce", "stomp",
    ),
    ObservableClass.ROTATE: ("tumble", "roll", "rotate"),
    ObservableClass.FADE: (
        "baseline", "fade", "flicker", "blur", "merge", "clarify",
        "succession", "typewriter",
    ),
    ObservableClass.POP: ("burst", "pop"),
    ObservableClass.WIGGLE: ("wiggle",),
    ObservableClass.BREATHE: ("breathe", "pulse"),
}
# labels for classes no stock verb reaches; used by hand-written and synthetic layouts
_EXTRA_VERBS = {
    "static": ObservableClass.STATIC,
    "none": ObservableClass.STATIC,
    "sustained_pan": ObservableClass.PAN,
    "sketch": ObservableClass.SKETCH,
    "neon": ObservableClass.NEON,
    "unknown": ObservableClass.UNKNOWN,
}
_VERB_TABLE = {v: cls for cls, verbs in VERB_GROUPS.items() for v in verbs}
_VERB_TABLE.update(_EXTRA_VERBS)


def verb_is_known(verb: str) -> bool:
    return verb.strip().lower() in _VERB_TABLE


def normalize_verb(verb: str) -> ObservableClass:
    """Map a motion verb onto its observable class; unrecognised verbs give
    ``UNKNOWN`` (and a log warning) instead of raising."""
    key = verb.strip().lower()
    cls = _VERB_TABLE.get(key)
    if cls is None:
        log.warning("unrecognised motion verb %r mapped to unknown", verb)
        return ObservableClass.UNKNOWN
    return cls


@dataclass(frozen=True)
class Animation:
    verb: str
    direction: str = "none"
    anim_duration: float = 0.0
    trigger_time: float = 0.0
    visible_from: float = 0.0
    visible_until: float = 0.0
    # keys the evaluator does not interpret (e.g. "speed"), kept for round-trips
    extra: tuple[tuple[str, Any], ...] = ()

    @property
    def observable_class(self) -> ObservableClass:
        return normalize_verb(self.verb)


@dataclass(frozen=True)
class TextAttrs:
    content: str
    font_family: str = ""
    font_size: float = 0.0
    weight: int = 400
    color: tuple[int, int, int] = (0, 0, 0)
    line_height: float = 0.0
    letter_spacing: float = 0.0
    alignment: str = "left"


@dataclass(frozen=True)
class Component:
    id: str
    kind: str  # IMAGE | TEXT | GROUP
    left: float
    top: float
    width: float
    height: float
    animation: Animation | None = None
    text: TextAttrs | None = None
    children: tuple["Component", ...] = ()

    @property
    def animated(self) -> bool:
        return self.animation is not None

    def obb(self) -> OBB:
        return OBB(self.left + self.width / 2.0, self.top + self.height / 2.0, self.width, self.height, 0.0)

    def walk(self) -> Iterator["Component"]:
        yield self
        for ch in self.children:
            yield from ch.walk()


@dataclass(frozen=True)
class LayoutSpec:
    canvas_width: int
    canvas_height: int
    background_color: tuple[int, int, int] = (255, 255, 255)
    total_duration: float = 0.0
    components: tuple[Component, ...] = field(default_factory=tuple)

    @property
    def diagonal(self) -> float:
        return math.hypot(self.canvas_width, self.canvas_height)

    def walk(self) -> Iterator[Component]:
        for c in self.components:
            yield from c.walk()

    def find(self, component_id: str) -> Component:
        for c in self.walk():
            if c.id == component_id:
                return c
        raise KeyError(component_id)


# ------------------------------------------------------------------ parsing

_KINDS = ("IMAGE", "TEXT", "GROUP")
_ALIGNMENTS = ("left", "center", "right")


def _get(obj: dict, key: str, path: str, kind=None, required=True, default=None):
    if not isinstance(obj, dict):
        raise LayoutParseError(f"{path}: expected an object")
    if key not in obj:
        if required:
            raise LayoutParseError(f"{path}.{key}: missing")
        return default
    val = obj[key]
    if kind is float:
        if isinstance(val, bool) or not isinstance(val, (int, float)) or not math.isfinite(val):
            raise LayoutParseError(f"{path}.{key}: expected a finite number")
        return float(val)
    if kind is int:
        if isinstance(val, bool) or not isinstance(val, (int, float)) or float(val) != int(val):
            raise LayoutParseError(f"{path}.{key}: expected an integer")
        return int(val)
    if kind is str and not isinstance(val, str):
        raise LayoutParseError(f"{path}.{key}: expected a string")
    if kind is list and not isinstance(val, list):
        raise LayoutParseError(f"{path}.{key}: expected a list")
    if kind is dict and not isinstance(val, dict):
        raise LayoutParseError(f"{path}.{key}: expected an object")
    return val


def _rgb(val, path: str) -> tuple[int, int, int]:
    if (not isinstance(val, (list, tuple)) or len(val) != 3
            or not all(isinstance(x, int) and not isinstance(x, bool) and 0 <= x <= 255 for x in val)):
        raise LayoutParseError(f"{path}: expected [r, g, b] with integers in 0..255")
    return (int(val[0]), int(val[1]), int(val[2]))


_ANIMATION_KEYS = {"verb", "direction", "anim_duration_s", "trigger_s", "visible_from_s", "visible_until_s"}


def _parse_animation(obj: dict, path: str) -> Animation:
    direction = _get(obj, "direction", path, str, required=False, default="none").strip().lower()
    direction = _DIRECTION_ALIASES.get(direction, direction)
    if direction not in DIRECTIONS and direction != "unknown":
        raise LayoutParseError(f"{path}.direction: {direction!r} is not a known direction")
    return Animation(
        verb=_get(obj, "verb", path, str),
        direction=direction,
        anim_duration=_get(obj, "anim_duration_s", path, float, required=False, default=0.0),
        trigger_time=_get(obj, "trigger_s", path, float, required=False, default=0.0),
        visible_from=_get(obj, "visible_from_s", path, float, required=False, default=0.0),
        visible_until=_get(obj, "visible_until_s", path, float),
        extra=tuple(sorted((k, v) for k, v in obj.items() if k not in _ANIMATION_KEYS)),
    )


def _parse_text(obj: dict, path: str) -> TextAttrs:
    align = _get(obj, "alignment", path, str, required=False, default="left")
    if align not in _ALIGNMENTS:
        raise LayoutParseError(f"{path}.alignment: expected one of {_ALIGNMENTS}")
    return TextAttrs(
        content=_get(obj, "content", path, str),
        font_family=_get(obj, "font_family", path, str, required=False, default=""),
        font_size=_get(obj, "font_size_px", path, float, required=False, default=0.0),
        weight=_get(obj, "weight", path, int, required=False, default=400),
        color=_rgb(obj.get("color_rgb", [0, 0, 0]), f"{path}.color_rgb"),
        line_height=_get(obj, "line_height_px", path, float, required=False, default=0.0),
        letter_spacing=_get(obj, "letter_spacing_em", path, float, required=False, default=0.0),
        alignment=align,
    )


def _parse_component(obj: dict, path: str) -> Component:
    kind = _get(obj, "kind", path, str).upper()
    if kind not in _KINDS:
        raise LayoutParseError(f"{path}.kind: expected one of {_KINDS}")
    anim = obj.get("animation")
    text = obj.get("text")
    children = _get(obj, "children", path, list, required=False, default=[])
    return Component(
        id=str(_get(obj, "id", path)),
        kind=kind,
        left=_get(obj, "left", path, float),
        top=_get(obj, "top", path, float),
        width=_get(obj, "width", path, float),
        height=_get(obj, "height", path, float),
        animation=_parse_animation(anim, f"{path}.animation") if anim else None,
        text=_parse_text(text, f"{path}.text") if text is not None else None,
        children=tuple(_parse_component(ch, f"{path}.children[{i}]") for i, ch in enumerate(children)),
    )


def validate_layout(spec: LayoutSpec) -> None:
    if spec.canvas_width <= 0 or spec.canvas_height <= 0:
        raise LayoutValidationError("canvas dimensions must be positive")
    if spec.total_duration < 0:
        raise LayoutValidationError("canvas duration must be non-negative")
    seen: set[str] = set()
    latest = 0.0
    for c in spec.walk():
        if c.id in seen:
            raise LayoutValidationError(f"duplicate component id {c.id!r}")
        seen.add(c.id)
        if not (c.width > 0 and c.height > 0):
            raise LayoutValidationError(f"component {c.id!r}: width and height must be > 0")
        if (c.text is not None) != (c.kind == "TEXT"):
            raise LayoutValidationError(f"component {c.id!r}: text attributes present iff kind is TEXT")
        if c.children and c.kind != "GROUP":
            raise LayoutValidationError(f"component {c.id!r}: only GROUP components have children")
        a = c.animation
        if a is not None:
            if a.anim_duration < 0 or a.trigger_time < 0:
                raise LayoutValidationError(f"component {c.id!r}: negative animation timing")
            if a.visible_from > a.visible_until:
                raise LayoutValidationError(f"component {c.id!r}: visible_from after visible_until")
            latest = max(latest, a.visible_until)
    if latest > spec.total_duration + 1e-9:
        raise LayoutValidationError(
            f"canvas duration {spec.total_duration}s is shorter than the latest visible_until {latest}s"
        )


def parse_layout(source: bytes | str | dict) -> LayoutSpec:
    """Parse and validate layout JSON (bytes, text, or an already-decoded dict)."""
    if isinstance(source, (bytes, bytearray)):
        source = source.decode("utf-8")
    if isinstance(source, str):
        try:
            source = json.loads(source)
        except json.JSONDecodeError as exc:
            raise LayoutParseError(f"$: invalid JSON ({exc})") from exc
    canvas = _get(source, "canvas", "$", dict)
    comps = _get(source, "components", "$", list)
    spec = LayoutSpec(
        canvas_width=_get(canvas, "width", "$.canvas", int),
        canvas_height=_get(canvas, "height", "$.canvas", int),
        background_color=_rgb(canvas.get("background_rgb", [255, 255, 255]), "$.canvas.background_rgb"),
        total_duration=_get(canvas, "duration_s", "$.canvas", float, required=False, default=0.0),
        components=tuple(_parse_component(c, f"$.components[{i}]") for i, c in enumerate(comps)),
    )
    validate_layout(spec)
    return spec


def load_layout(path) -> LayoutSpec:
    with open(path, "rb") as fh:
        return parse_layout(fh.read())


def _component_dict(c: Component) -> dict[str, Any]:
    out: dict[str, Any] = {
        "id": c.id, "kind": c.kind, "left": c.left, "top": c.top,
        "width": c.width, "height": c.height,
    }
    if c.animation is not None:
        a = c.animation
        out["animation"] = {
            "verb": a.verb, "direction": a.direction,
            "anim_duration_s": a.anim_duration, "trigger_s": a.trigger_time,
            "visible_from_s": a.visible_from, "visible_until_s": a.visible_until,
            **dict(a.extra),
        }
    if c.text is not None:
        t = c.text
        out["text"] = {
            "content": t.content, "font_family": t.font_family, "font_size_px": t.font_size,
            "weight": t.weight, "line_height_px": t.line_height,
            "letter_spacing_em": t.letter_spacing, "alignment": t.alignment,
            "color_rgb": list(t.color),
        }
    if c.children:
        out["children"] = [_component_dict(ch) for ch in c.children]
    return out


def layout_to_dict(spec: LayoutSpec) -> dict[str, Any]:
    return {
        "canvas": {
            "width": spec.canvas_width, "height": spec.canvas_height,
            "background_rgb": list(spec.background_color), "duration_s": spec.total_duration,
        },
        "components": [_component_dict(c) for c in spec.components],
    }


def serialize_layout(spec: LayoutSpec) -> bytes:
    return json.dumps(layout_to_dict(spec), indent=2, ensure_ascii=False).encode("utf-8")


def animated_components(spec: LayoutSpec) -> list[tuple[str, Animation, OBB]]:
    """Depth-first list of every animated component, nested groups included."""
    return [(c.id, c.animation, c.obb()) for c in spec.walk() if c.animation is not None]


def text_components(spec: LayoutSpec) -> list[Component]:
    return [c for c in spec.walk() if c.kind == "TEXT" and c.text is not None and c.text.content]
