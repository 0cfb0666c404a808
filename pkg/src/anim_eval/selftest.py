"""Render the standard synthetic suite, evaluate it and check the outcome
against the programmed ground truth."""
from __future__ import annotations

import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace

from .features import CONTOUR, LAYOUT_MATCH
from .layout import COMPASS
from .pipeline import EvalConfig, VideoReport, aggregate, evaluate_video
from .synth import SyntheticScene, oracle_ocr, render_scene, standard_suite

__all__ = ["Check", "SceneOutcome", "evaluate_scene", "run_suite", "suite_checks", "selftest_document",
           "resolve_workers", "drop_detections"]

MIN_SUITE_ACCURACY = 0.85
MIN_CLASS_CREDIT = 0.5
PAN_DURATION_TOL = 0.25
ENTRY_DURATION_TOL = 0.5
GATED_PRESENCE = 0.25


@dataclass(frozen=True)
class Check:
    name: str
    passed: bool
    detail: str = ""


@dataclass(frozen=True)
class SceneOutcome:
    scene: str
    program: dict[str, str]
    expectations: dict[str, dict]
    report: VideoReport
    fps: float = 30.0

    @property
    def presence(self) -> dict[str, float]:
        return self.report.presence

    def to_dict(self) -> dict:
        return {
            "scene": self.scene,
            "fps": self.fps,
            "program": self.program,
            "expectations": self.expectations,
            "report": self.report.to_dict(),
        }


def resolve_workers(flag: int | None = None) -> int:
    """Worker count from the flag, then ANIM_EVAL_WORKERS, then 1."""
    if flag is not None:
        n = flag
    else:
        raw = os.environ.get("ANIM_EVAL_WORKERS", "1")
        try:
            n = int(raw)
        except ValueError:
            raise ValueError(f"ANIM_EVAL_WORKERS must be an integer, got {raw!r}") from None
    if n < 1:
        raise ValueError("worker count must be at least 1")
    return n


def drop_detections(detections, scene: SyntheticScene, component_id: str, keep_fraction: float):
    """Thin one element's oracle detections so it shows on about
    ``keep_fraction`` of the frames (every k-th frame kept)."""
    from .synth import element_drawn

    step = max(1, round(1.0 / keep_fraction))
    out = []
    for k, dets in enumerate(detections):
        # oracle detections list the drawn elements in scene order
        drawn = [e.id for e in scene.elements if element_drawn(e, scene, k)]
        out.append([d for d, eid in zip(dets, drawn) if eid != component_id or k % step == 0])
    return out


def evaluate_scene(scene: SyntheticScene, config: EvalConfig | None = None,
                   drop: tuple[str, float] | None = None) -> SceneOutcome:
    """Single-element scenes go through the contour tracker, multi-element
    ones through the layout matcher fed with oracle detections."""
    rs = render_scene(scene)
    multi = len(scene.elements) > 1
    cfg = replace(config or EvalConfig(), tracker=LAYOUT_MATCH if multi else CONTOUR)
    dets = rs.detections
    if drop is not None:
        dets = drop_detections(dets, scene, *drop)
    ocr = oracle_ocr(scene, cfg.sample_fps)
    if multi:
        report = evaluate_video(rs.layout, None, dets, ocr, cfg, scene.name, fps=scene.fps,
                                video_dims=(scene.width, scene.height))
    else:
        report = evaluate_video(rs.layout, rs.frames, None, ocr, cfg, scene.name)
    program = {e.id: (e.program.kind if e.program is not None else "none") for e in scene.elements}
    return SceneOutcome(scene.name, program, rs.expectations, report, scene.fps)


def _evaluate_star(args):
    return evaluate_scene(*args)


def run_suite(scenes=None, config: EvalConfig | None = None, workers: int = 1,
              gate_probe: bool = True) -> list[SceneOutcome]:
    """Evaluate every scene; results keep the scene order whatever the
    worker count. With ``gate_probe`` the first multi-element scene is run a
    second time with one element's detections thinned to 25% presence."""
    scenes = list(standard_suite() if scenes is None else scenes)
    jobs = [(s, config, None) for s in scenes]
    if gate_probe:
        multi = next((s for s in scenes if len(s.elements) > 1), None)
        if multi is not None:
            probe = replace(multi, name=f"{multi.name}_gated")
            target = next(e.id for e in multi.elements if e.program is not None)
            jobs.append((probe, config, (target, GATED_PRESENCE)))
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(_evaluate_star, jobs))
    return [_evaluate_star(j) for j in jobs]


def _is_single(o: SceneOutcome) -> bool:
    return o.report.tracker_mode == CONTOUR


def suite_checks(outcomes: list[SceneOutcome]) -> list[Check]:
    """The pass/fail properties the standard suite must satisfy."""
    checks: list[Check] = []
    singles = [o for o in outcomes if _is_single(o)]
    multis = [o for o in outcomes if not _is_single(o) and not o.scene.endswith("_gated")]
    gated = [o for o in outcomes if o.scene.endswith("_gated")]
    single_res = [(o, c) for o in singles for c in o.report.components]

    acc = sum(c.motion_credit for _, c in single_res) / len(single_res) if single_res else 0.0
    checks.append(Check("single_suite_accuracy", len(singles) >= 21 and acc >= MIN_SUITE_ACCURACY,
                        f"{len(singles)} scenes, accuracy {acc:.4f}"))
    weak = [f"{o.scene}:{c.predicted_class}" for o, c in single_res
            if c.gt_class in ("scrapbook", "pop", "pan", "rotate", "fade") and c.motion_credit < MIN_CLASS_CREDIT]
    checks.append(Check("single_class_credit", not weak, ", ".join(weak) or "all >= 0.5"))

    bad_dir = []
    n_entry = 0
    for o, c in single_res:
        kind = o.program[c.component_id]
        if kind == "rise" and c.gt_direction in COMPASS:
            n_entry += 1
        if kind in ("rise", "pan") and c.predicted_direction != c.gt_direction:
            bad_dir.append(f"{o.scene}:{c.predicted_direction}")
        if kind in ("static", "wiggle", "breathe") and c.predicted_direction != "none":
            bad_dir.append(f"{o.scene}:{c.predicted_direction}")
    checks.append(Check("direction", n_entry == 8 and not bad_dir,
                        f"{n_entry} compass entries; " + (", ".join(bad_dir) or "all exact")))

    vis_bad, anim_bad = [], []
    for o in singles + multis:
        for c in o.report.components:
            ex = o.expectations[c.component_id]
            if abs(c.visible_duration_s - ex["visible_s"]) > 1.0 / o.fps + 1e-9:
                vis_bad.append(f"{o.scene}/{c.component_id}")
            kind = o.program[c.component_id]
            tol = {"pan": PAN_DURATION_TOL, "rise": ENTRY_DURATION_TOL}.get(kind)
            if tol is not None and not abs(c.anim_duration_s - ex["anim_s"]) <= tol:
                anim_bad.append(f"{o.scene}/{c.component_id}:{c.anim_duration_s:.3f}")
    checks.append(Check("visible_duration", not vis_bad, ", ".join(vis_bad) or "all within 1 frame"))
    checks.append(Check("anim_duration", not anim_bad, ", ".join(anim_bad) or "pans and entries in tolerance"))

    low_pres = [f"{o.scene}/{cid}:{p:.3f}" for o in multis for cid, p in o.presence.items() if p != 1.0]
    low_credit = [f"{o.scene}/{c.component_id}" for o in multis for c in o.report.components
                  if c.motion_credit < MIN_CLASS_CREDIT]
    checks.append(Check("multi_presence_and_credit", bool(multis) and not low_pres and not low_credit,
                        ", ".join(low_pres + low_credit) or f"{len(multis)} scenes clean"))

    gate_ok, detail = False, "no gated probe"
    if gated:
        rep = gated[0].report
        dropped = [c for c in rep.components if c.presence <= GATED_PRESENCE + 0.01]
        if len(dropped) == 1:
            summary = aggregate([rep])
            gate_ok = (not dropped[0].reliable
                       and summary["n_reliable"] == summary["n_components"] - 1)
            detail = f"{dropped[0].component_id} presence {dropped[0].presence:.3f}, reliable={dropped[0].reliable}"
    checks.append(Check("reliable_gate", gate_ok, detail))

    text = [t for o in outcomes if o.report.text is not None for t in o.report.text.per_component]
    text_ok = bool(text) and all(math.isclose(t.best_score, 1.0) and t.exact_ever for t in text)
    checks.append(Check("text_oracle", text_ok, f"{len(text)} text components"))
    return checks


def selftest_document(outcomes: list[SceneOutcome], checks: list[Check]) -> dict:
    main = [o for o in outcomes if not o.scene.endswith("_gated")]
    return {
        "scenes": [o.to_dict() for o in outcomes],
        "summary": aggregate([o.report for o in main]),
        "checks": [{"name": c.name, "passed": c.passed, "detail": c.detail} for c in checks],
        "passed": all(c.passed for c in checks),
    }
