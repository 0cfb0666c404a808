"""Priority-ordered motion-type rules and partial-credit scoring.

Rules are evaluated top-down and the first one whose condition holds decides
the label. Thresholds live in :class:`Thresholds` and can be overridden from a
flat JSON or TOML file (``key = value`` per threshold name).
"""
from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, fields, replace
from pathlib import Path
from typing import Callable

from .features import CONTOUR, LAYOUT_MATCH, MotionFeatures
from .layout import ObservableClass as OC

__all__ = [
    "Thresholds",
    "RuleTrace",
    "RULE_LABELS",
    "ClassifierError",
    "load_thresholds",
    "rule_conditions",
    "classify_motion",
    "CREDIT_TABLE",
    "motion_credit",
]


class ClassifierError(ValueError):
    pass


@dataclass(frozen=True)
class Thresholds:
    # 1: low presence
    r1_pres_full_max: float = 0.05
    # 2: contour-mode opacity transient
    r2_op_range_min: float = 0.30
    r2_d_net_max: float = 0.06
    r2_op_dip_min: float = 0.15
    r2_endpoint_low_max: float = 0.7
    r2_pres_high_min: float = 0.85
    # 3: layout-match-mode fade (sustained low confidence mid-clip)
    r3_low_mid_frac_min: float = 0.85
    r3_pop_height_max: float = 0.20
    r3_scale_range_max: float = 0.50
    r3_d_net_max: float = 0.05
    r3_E_mid_max: float = 0.05
    # 4-6: entry transient gate ("endpoints hot, middle cold")
    transient_E_peak_min: float = 5e-3
    transient_rho_max: float = 0.4
    r4_pop_height_min: float = 0.10
    r4_start_extent_max: float = 0.005
    r4_d_net_max: float = 0.03
    r4_E_mid_max: float = 0.05
    r5_theta_90_min: float = 90.0
    # 7: sustained rotation
    r7_theta_90_min: float = 45.0
    r7_scale_range_max: float = 0.20
    r7_d_net_max: float = 0.05
    # 8: wiggle
    r8_pos_zx_min: int = 6
    r8_delta_max_min: float = 0.05
    r8_theta_tot_max: float = 30.0
    r8_theta_dot_min: float = 100.0
    r8_d_net_max: float = 0.03
    # 9: breathe
    r9_sc_zx_min: int = 6
    r9_scale_range_min: float = 0.06
    r9_delta_max_max: float = 0.005
    # 10: pan
    r10_d_net_min: float = 0.10
    r10_E_mid_min: float = 0.02
    r10_directional_min: float = 0.4
    # 11: weak fade; positional limits are multiples of the noise floor
    r11_op_range_min: float = 0.30
    r11_scale_range_max: float = 0.15
    r11_eps_multiple: float = 2.0
    # 12-13: presence rescue; 12-14 share the residual-energy split
    r12_endpoint_max: float = 0.5
    r12_pres_mid_min: float = 0.85
    residual_E_tot: float = 0.05

    def with_overrides(self, overrides: dict) -> "Thresholds":
        known = {f.name: f.type for f in fields(self)}
        bad = sorted(set(overrides) - set(known))
        if bad:
            raise ClassifierError(f"unknown threshold name(s): {', '.join(bad)}")
        clean = {}
        for k, v in overrides.items():
            if isinstance(v, bool) or not isinstance(v, (int, float)):
                raise ClassifierError(f"threshold {k!r} must be numeric")
            clean[k] = int(v) if known[k] in (int, "int") else float(v)
        return replace(self, **clean)

    def to_dict(self) -> dict:
        return asdict(self)


def load_thresholds(path) -> Thresholds:
    """Read threshold overrides from a flat ``.json`` or ``.toml`` file."""
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
        raise ClassifierError(f"{path}: expected a flat mapping of threshold names")
    data = data.get("thresholds", data)
    return Thresholds().with_overrides(data)


RULE_LABELS: dict[int, OC] = {
    1: OC.STATIC, 2: OC.FADE, 3: OC.FADE, 4: OC.POP, 5: OC.ROTATE, 6: OC.SCRAPBOOK,
    7: OC.ROTATE, 8: OC.WIGGLE, 9: OC.BREATHE, 10: OC.PAN, 11: OC.FADE,
    12: OC.SCRAPBOOK, 13: OC.FADE, 14: OC.SCRAPBOOK, 15: OC.STATIC,
}


@dataclass(frozen=True)
class RuleTrace:
    fired_rule: int
    label: OC
    feature_snapshot: MotionFeatures
    tracker_mode: str


def _rules(th: Thresholds, mode: str) -> list[Callable[[MotionFeatures], bool]]:
    def r2(f: MotionFeatures) -> bool:
        if mode != CONTOUR or not (f.op_range > th.r2_op_range_min and f.d_net < th.r2_d_net_max):
            return False
        dip = f.op_mid - min(f.op_start, f.op_end) > th.r2_op_dip_min
        lo, hi = th.r2_endpoint_low_max, th.r2_pres_high_min
        # exactly one endpoint lost, the other endpoint and the middle well covered
        start_lost = f.pres_start < lo and f.pres_end > hi
        end_lost = f.pres_end < lo and f.pres_start > hi
        presence = f.pres_mid > hi and (start_lost or end_lost)
        return dip or presence

    def r3(f: MotionFeatures) -> bool:
        return (mode == LAYOUT_MATCH and f.low_mid_frac > th.r3_low_mid_frac_min
                and f.pop_height < th.r3_pop_height_max and f.scale_range < th.r3_scale_range_max
                and f.d_net < th.r3_d_net_max and f.E_mid < th.r3_E_mid_max)

    def transient(f: MotionFeatures) -> bool:
        return f.E_peak > th.transient_E_peak_min and f.rho < th.transient_rho_max

    def r4(f: MotionFeatures) -> bool:
        return (transient(f) and f.pop_height > th.r4_pop_height_min
                and f.start_extent < th.r4_start_extent_max and f.d_net < th.r4_d_net_max
                and f.E_mid < th.r4_E_mid_max)

    def r8(f: MotionFeatures) -> bool:
        positional = f.pos_zx >= th.r8_pos_zx_min and f.delta_max > th.r8_delta_max_min
        angular = abs(f.theta_tot) < th.r8_theta_tot_max and f.theta_dot_max > th.r8_theta_dot_min
        return (positional or angular) and f.d_net < th.r8_d_net_max

    def r10(f: MotionFeatures) -> bool:
        directional = f.d_net / f.E_tot if f.E_tot > 0 else math.inf
        return (f.d_net > th.r10_d_net_min and f.E_mid > th.r10_E_mid_min
                and directional > th.r10_directional_min)

    def rescue(f: MotionFeatures) -> bool:
        return min(f.pres_start, f.pres_end) < th.r12_endpoint_max and f.pres_mid > th.r12_pres_mid_min

    eps2 = th.r11_eps_multiple
    return [
        lambda f: f.pres_full < th.r1_pres_full_max,
        r2,
        r3,
        r4,
        lambda f: transient(f) and abs(f.theta_90) >= th.r5_theta_90_min,
        transient,
        lambda f: (abs(f.theta_90) > th.r7_theta_90_min and f.scale_range < th.r7_scale_range_max
                   and f.d_net < th.r7_d_net_max),
        r8,
        lambda f: (f.sc_zx >= th.r9_sc_zx_min and f.scale_range > th.r9_scale_range_min
                   and f.delta_max < th.r9_delta_max_max),
        r10,
        lambda f: (f.op_range > th.r11_op_range_min and f.scale_range < th.r11_scale_range_max
                   and f.delta_max < eps2 * f.epsilon and f.d_net < eps2 * f.epsilon),
        lambda f: rescue(f) and f.E_tot > th.residual_E_tot,
        lambda f: rescue(f) and f.E_tot <= th.residual_E_tot,
        lambda f: f.E_tot > th.residual_E_tot,
        lambda f: True,
    ]


def rule_conditions(features: MotionFeatures, tracker_mode: str = CONTOUR,
                    thresholds: Thresholds | None = None) -> list[bool]:
    """Truth value of every rule condition, index 0 = rule 1."""
    th = thresholds or Thresholds()
    return [bool(rule(features)) for rule in _rules(th, tracker_mode)]


def classify_motion(features: MotionFeatures, tracker_mode: str = CONTOUR,
                    thresholds: Thresholds | None = None) -> RuleTrace:
    if tracker_mode not in (CONTOUR, LAYOUT_MATCH):
        raise ClassifierError(f"unknown tracker mode {tracker_mode!r}")
    for name, val in features.to_dict().items():
        if not math.isfinite(val):
            raise ClassifierError(f"feature {name} is not finite ({val})")
    th = thresholds or Thresholds()
    for i, rule in enumerate(_rules(th, tracker_mode), start=1):
        if rule(features):
            return RuleTrace(i, RULE_LABELS[i], features, tracker_mode)
    raise AssertionError("the final rule always matches")


# rows are ground truth, columns are predictions; missing cells score 0
CREDIT_TABLE: dict[OC, dict[OC, float]] = {
    OC.POP: {OC.SCRAPBOOK: 0.5, OC.POP: 1.0},
    OC.SCRAPBOOK: {OC.SCRAPBOOK: 1.0, OC.POP: 0.5, OC.FADE: 0.3, OC.ROTATE: 0.5, OC.PAN: 0.3},
    OC.FADE: {OC.SCRAPBOOK: 0.3, OC.FADE: 1.0},
    OC.ROTATE: {OC.SCRAPBOOK: 1.0, OC.ROTATE: 1.0},
    OC.WIGGLE: {OC.BREATHE: 0.4},
    OC.BREATHE: {OC.WIGGLE: 0.4},
}


def motion_credit(gt: OC | str, predicted: OC | str) -> float:
    """Partial credit for predicting ``predicted`` when the truth is ``gt``.

    An unknown ground truth scores 1 only for static/unknown predictions. An
    exact match always scores 1.
    """
    gt, predicted = OC(gt), OC(predicted)
    if gt is OC.UNKNOWN:
        return 1.0 if predicted in (OC.STATIC, OC.UNKNOWN) else 0.0
    if gt is predicted:
        return 1.0
    return CREDIT_TABLE.get(gt, {}).get(predicted, 0.0)
