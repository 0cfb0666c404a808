import json

import pytest

from anim_eval.layout import LayoutValidationError, parse_layout
from anim_eval.pipeline import (ComponentResult, EvalConfig, VideoReport, aggregate, evaluate_video, report_json)
from anim_eval.synth import Rise, SyntheticElement, SyntheticScene, render_scene, standard_suite
from anim_eval.text import OcrFrameCandidates


def result(cid="c", presence=1.0, credit=1.0, gt_class="scrapbook", pred="scrapbook", video="v", **kw):
    base = dict(video_id=video, component_id=cid, tracker_mode="contour", presence=presence,
                reliable=presence > 0.3, gt_class=gt_class, predicted_class=pred, fired_rule=6,
                motion_credit=credit, gt_direction="up", predicted_direction="up", direction_exact=True,
                direction_half=False, direction_detected=True, anim_duration_s=0.7, gt_anim_duration_s=0.56,
                visible_duration_s=5.0, gt_visible_duration_s=5.0)
    base.update(kw)
    return ComponentResult(**base)


def test_single_perfect_component():
    agg = aggregate([VideoReport("v", "contour", (result(),))])
    assert agg["all"]["motion_accuracy"] == 1.0 and agg["reliable"]["motion_accuracy"] == 1.0


def test_reliable_gate_counts():
    pres = [1.0] * 6 + [0.31, 0.3, 0.1, 0.0]
    comps = tuple(result(f"c{i}", p) for i, p in enumerate(pres))
    agg = aggregate([VideoReport("v", "layout_match", comps)])
    assert agg["n_components"] == 10 and agg["n_reliable"] == 7


def test_mixed_credit_mean():
    comps = tuple(result(f"c{i}", credit=c) for i, c in enumerate([1.0, 0.5, 0.3]))
    assert aggregate([VideoReport("v", "contour", comps)])["all"]["motion_accuracy"] == pytest.approx(0.6)


def test_empty_aggregate_rejected():
    with pytest.raises(ValueError):
        aggregate([])


def test_direction_and_duration_pools():
    comps = (
        result("a", gt_direction="right", predicted_direction="up_right", direction_exact=False,
               direction_half=True, gt_class="pan", pred="pan"),
        result("b", gt_direction="none", predicted_direction="none", gt_class="breathe", pred="breathe",
               direction_detected=False, gt_anim_duration_s=0.0),
        result("c", gt_direction="clockwise", predicted_direction="anticlockwise", direction_exact=False,
               gt_class="rotate", pred="rotate"),
    )
    agg = aggregate([VideoReport("v", "contour", comps)])["all"]
    d = agg["direction"]
    assert d["correct_half"]["rate"] == 1.0 and d["correctly_none"]["rate"] == 1.0
    assert d["rotation_sense"]["rate"] == 0.0 and d["exact"]["num"] == 1
    assert agg["duration"]["anim"]["n"] == 2
    assert agg["duration"]["anim"]["bias"] == pytest.approx(0.14)


def test_report_roundtrip_preserves_metrics():
    comps = tuple(result(f"c{i}", presence=p, credit=c) for i, (p, c) in enumerate([(0.9, 1.0), (0.2, 0.0)]))
    rep = VideoReport("v", "layout_match", comps, presence={"c0": 0.9, "c1": 0.2})
    back = VideoReport.from_dict(json.loads(report_json(rep.to_dict())))
    assert report_json(aggregate([back])) == report_json(aggregate([rep]))
    assert aggregate([back])["reliable"]["motion_accuracy"] == 1.0


def test_report_json_is_stable():
    doc = {"b": 1 / 3, "a": [-0.0, float("nan")]}
    assert report_json(doc) == '{\n  "a": [\n    0.0,\n    null\n  ],\n  "b": 0.333333\n}\n'


def test_rise_up_scene_end_to_end():
    scene = next(s for s in standard_suite() if s.name == "entry_up")
    rs = render_scene(scene)
    rep = evaluate_video(rs.layout, rs.frames)
    (c,) = rep.components
    assert c.predicted_class == "scrapbook" and c.motion_credit == 1.0
    assert c.predicted_direction == "up" and c.reliable


def test_static_layout_gives_empty_report():
    spec = parse_layout({"canvas": {"width": 100, "height": 100, "duration_s": 1.0},
                         "components": [{"id": "a", "kind": "IMAGE", "left": 0, "top": 0, "width": 10,
                                         "height": 10}]})
    rep = evaluate_video(spec)
    assert rep.components == () and rep.text is None
    assert json.loads(report_json(rep.to_dict()))["components"] == []


def test_layout_match_needs_detections():
    scene = next(s for s in standard_suite() if s.name == "multi_1")
    with pytest.raises(LayoutValidationError, match="--detections"):
        evaluate_video(scene_layout_of(scene), config=EvalConfig(tracker="layout_match"))


def scene_layout_of(scene):
    from anim_eval.synth import scene_layout
    return scene_layout(scene)


def test_contour_refuses_multi_component_layouts():
    scene = next(s for s in standard_suite() if s.name == "multi_1")
    with pytest.raises(LayoutValidationError):
        evaluate_video(scene_layout_of(scene))


def test_text_scored_without_reliable_tracks():
    el = SyntheticElement("t", 100, 100, 200, 60, (0, 0, 0), Rise("up", 0.5, 50.0), kind="TEXT", text="HI")
    scene = SyntheticScene("txt", 400, 400, (255, 255, 255), 1.0, 30.0, (el,))
    rs = render_scene(scene)
    dets = [[] for _ in range(scene.frame_count)]  # tracker sees nothing
    rep = evaluate_video(rs.layout, detections=dets, ocr=[OcrFrameCandidates(0.5, ("HI",))],
                         config=EvalConfig(tracker="layout_match"), fps=30.0, video_dims=(400, 400))
    assert not rep.components[0].reliable
    assert rep.text.best_ar == 1.0 and rep.text.hard_ar == 1.0


def test_error_context_names_video_and_component():
    scene = SyntheticScene("tiny", 400, 400, (255, 255, 255), 0.1, 30.0,
                           (SyntheticElement("el", 100, 100, 50, 50, (0, 0, 0), Rise("up", 0.05, 10.0)),))
    rs = render_scene(scene)
    with pytest.raises(Exception, match="vid/el"):
        evaluate_video(rs.layout, detections=[[]] * 2, config=EvalConfig(tracker="layout_match"),
                       video_id="vid", fps=30.0)
