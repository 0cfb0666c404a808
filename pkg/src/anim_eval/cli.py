"""Command-line interface: evaluate, render, aggregate, selftest.

Exit codes: 0 success, 1 validation or usage error, 2 I/O error.
"""
from __future__ import annotations

import argparse
import glob
import json
import logging
import sys
from dataclasses import replace
from pathlib import Path

from .classifier import ClassifierError, Thresholds
from .features import CONTOUR, FeatureError, LAYOUT_MATCH
from .layout import LayoutError, load_layout
from .pipeline import EvalConfig, VideoReport, aggregate, evaluate_video, report_json
from .trackers import DirectoryFrameSource, TrackerError, load_detections

log = logging.getLogger("anim_eval")

EXIT_OK, EXIT_INVALID, EXIT_IO = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(f"{self.prog}: error: {message}")


def _tracker(value: str) -> str:
    v = value.replace("-", "_")
    if v not in (CONTOUR, LAYOUT_MATCH):
        raise argparse.ArgumentTypeError("choose contour or layout-match")
    return v


def _load_config(path: str | None) -> EvalConfig:
    """A config file is either a flat mapping of threshold names or a
    mapping with a ``thresholds`` table next to pipeline settings."""
    if path is None:
        return EvalConfig()
    p = Path(path)
    raw = p.read_bytes()
    if p.suffix.lower() == ".toml":
        try:
            import tomllib
        except ModuleNotFoundError:  # Python < 3.11
            import tomli as tomllib
        data = tomllib.loads(raw.decode("utf-8"))
    else:
        data = json.loads(raw.decode("utf-8"))
    if not isinstance(data, dict):
        raise ClassifierError(f"{path}: expected a mapping")
    settings = {k: v for k, v in data.items() if k in EvalConfig.__dataclass_fields__ and k != "thresholds"}
    th_data = data.get("thresholds", {k: v for k, v in data.items() if k not in settings})
    cfg = EvalConfig(**settings) if settings else EvalConfig()
    return replace(cfg, thresholds=Thresholds().with_overrides(th_data))


def _write(text: str, out: str | None) -> None:
    if out is None or out == "-":
        sys.stdout.write(text)
    else:
        Path(out).parent.mkdir(parents=True, exist_ok=True)
        Path(out).write_text(text, encoding="utf-8")


def cmd_evaluate(args) -> int:
    from .text import load_ocr_candidates

    spec = load_layout(args.layout)
    config = replace(_load_config(args.config), tracker=args.tracker, sample_fps=args.sample_fps)
    frames = DirectoryFrameSource(args.frames) if args.frames else None
    dets = fps = dims = None
    if args.detections:
        fps, dets, dims = load_detections(args.detections)
    if config.tracker == CONTOUR and frames is None and any(c.animated for c in spec.walk()):
        raise UsageError("the contour tracker needs --frames DIR")
    if config.tracker == LAYOUT_MATCH and dets is None:
        raise UsageError("the layout-match tracker needs --detections PATH")
    ocr = load_ocr_candidates(args.ocr) if args.ocr else None
    video_id = args.video_id or Path(args.layout).resolve().parent.name
    report = evaluate_video(spec, frames, dets, ocr, config, video_id, fps=fps, video_dims=dims)
    doc = report.to_dict()
    doc["config"] = config.to_dict()
    _write(report_json(doc), args.out)
    return EXIT_OK


def cmd_render(args) -> int:
    from .synth import render_scene, scene_from_dict, standard_suite

    if args.suite:
        scenes = standard_suite()
    else:
        with open(args.scene, "r", encoding="utf-8") as fh:
            scenes = [scene_from_dict(json.load(fh))]
    out = Path(args.out)
    for scene in scenes:
        target = out / scene.name if args.suite else out
        render_scene(scene, target)
        log.info("rendered %s -> %s", scene.name, target)
    if args.suite:
        index = {"scenes": [s.name for s in scenes]}
        (out / "suite.json").write_text(json.dumps(index, indent=2) + "\n", encoding="utf-8")
    return EXIT_OK


def cmd_aggregate(args) -> int:
    paths = sorted({p for pattern in args.reports for p in glob.glob(pattern, recursive=True)})
    if not paths:
        raise UsageError("no report files matched " + " ".join(args.reports))
    reports = []
    for p in paths:
        with open(p, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
        try:
            reports.append(VideoReport.from_dict(doc))
        except (KeyError, TypeError) as exc:
            raise ValueError(f"{p}: not a video report ({exc})") from exc
    reports.sort(key=lambda r: r.video_id)
    _write(report_json(aggregate(reports)), args.out)
    return EXIT_OK


def cmd_selftest(args) -> int:
    from .selftest import resolve_workers, run_suite, selftest_document, suite_checks

    workers = resolve_workers(args.workers)
    config = _load_config(args.config)
    outcomes = run_suite(config=config, workers=workers)
    checks = suite_checks(outcomes)
    for c in checks:
        print(f"{'PASS' if c.passed else 'FAIL'}  {c.name}: {c.detail}", file=sys.stderr)
    _write(report_json(selftest_document(outcomes, checks)), args.out)
    return EXIT_OK if all(c.passed for c in checks) else EXIT_INVALID


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="anim-eval", description="Evaluate design-animation videos against layout specs.")
    p.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    ev = sub.add_parser("evaluate", help="evaluate one video")
    ev.add_argument("--layout", required=True, help="layout JSON")
    ev.add_argument("--frames", help="frame directory (manifest.json + frame_*.png)")
    ev.add_argument("--detections", help="per-frame detections JSON")
    ev.add_argument("--tracker", type=_tracker, default=CONTOUR, help="contour or layout-match")
    ev.add_argument("--ocr", help="OCR candidates JSON")
    ev.add_argument("--sample-fps", type=float, default=2.0, help="text sampling rate (default 2.0)")
    ev.add_argument("--config", help="threshold/config overrides (.json or .toml)")
    ev.add_argument("--video-id", help="id used in the report (default: layout's directory name)")
    ev.add_argument("--out", help="report path (default stdout)")
    ev.set_defaults(func=cmd_evaluate)

    rd = sub.add_parser("render", help="render synthetic scenes")
    src = rd.add_mutually_exclusive_group(required=True)
    src.add_argument("--suite", choices=["standard"])
    src.add_argument("--scene", help="scene JSON")
    rd.add_argument("--out", required=True, help="output directory")
    rd.set_defaults(func=cmd_render)

    ag = sub.add_parser("aggregate", help="pool video reports")
    ag.add_argument("--reports", required=True, nargs="+", help="report paths or glob patterns")
    ag.add_argument("--out", help="summary path (default stdout)")
    ag.set_defaults(func=cmd_aggregate)

    st = sub.add_parser("selftest", help="render, evaluate and check the standard suite")
    st.add_argument("--out", help="report path (default stdout)")
    st.add_argument("--workers", type=int, help="parallel workers (default $ANIM_EVAL_WORKERS or 1)")
    st.add_argument("--config", help="threshold/config overrides (.json or .toml)")
    st.set_defaults(func=cmd_selftest)
    return p


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_INVALID
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"anim-eval: error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except OSError as exc:
        print(f"anim-eval: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    except (LayoutError, ClassifierError, TrackerError, FeatureError, ValueError, TypeError) as exc:
        print(f"anim-eval: invalid input: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
