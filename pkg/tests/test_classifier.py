import json
import math

import pytest
from hypothesis import given, settings, strategies as st

from anim_eval.classifier import (CREDIT_TABLE, RULE_LABELS, ClassifierError, Thresholds, classify_motion,
                                  load_thresholds, motion_credit, rule_conditions)
from anim_eval.features import CONTOUR, LAYOUT_MATCH, MotionFeatures
from anim_eval.layout import ObservableClass as OC
from rule_cases import GOLDEN, GOLDEN_COLUMNS, RULE_CASES, RULE_LABELS_EXPECTED


@pytest.mark.parametrize("rule", sorted(RULE_CASES))
def test_each_rule_fires_first(rule):
    mode, feats = RULE_CASES[rule]
    conds = rule_conditions(feats, mode)
    assert conds[rule - 1]
    assert not any(conds[: rule - 1])
    trace = classify_motion(feats, mode)
    assert trace.fired_rule == rule
    assert trace.label is RULE_LABELS_EXPECTED[rule] is RULE_LABELS[rule]
    assert trace.feature_snapshot == feats and trace.tracker_mode == mode


def test_rule2_presence_branch():
    f = MotionFeatures(op_range=0.5, d_net=0.01, op_start=0.5, op_mid=0.5, op_end=0.5,
                       pres_start=0.5, pres_mid=0.9, pres_end=0.9, pres_full=0.77)
    assert classify_motion(f, CONTOUR).fired_rule == 2
    # both endpoints lost: the branch needs the other endpoint above 0.85
    both = MotionFeatures(**{**f.to_dict(), "pres_end": 0.5})
    assert not rule_conditions(both, CONTOUR)[1]


def test_modes_gate_rules_2_and_3():
    _, f2 = RULE_CASES[2]
    _, f3 = RULE_CASES[3]
    assert not rule_conditions(f2, LAYOUT_MATCH)[1]
    assert not rule_conditions(f3, CONTOUR)[2]


def test_spec_examples():
    assert classify_motion(MotionFeatures(pres_full=0.01)).fired_rule == 1
    pan = MotionFeatures(d_net=0.15, E_mid=0.03, E_start=0.05, E_end=0.05, E_peak=0.05, E_tot=0.25, rho=0.6,
                         pres_start=1, pres_mid=1, pres_end=1, pres_full=1)
    assert classify_motion(pan).label is OC.PAN
    rot = MotionFeatures(E_start=0.05, E_peak=0.05, E_tot=0.05, theta_90=95.0,
                         pres_start=1, pres_mid=1, pres_end=1, pres_full=1)
    assert classify_motion(rot).fired_rule == 5
    assert classify_motion(MotionFeatures(pres_start=1, pres_mid=1, pres_end=1, pres_full=1)).fired_rule == 15


def test_pan_directional_fraction_without_energy():
    # zero total energy makes the directional fraction infinite rather than undefined
    f = MotionFeatures(d_net=0.2, E_mid=0.03, E_tot=0.0, pres_full=1, pres_start=1, pres_mid=1, pres_end=1)
    assert rule_conditions(f)[9]


def test_rejects_nan_and_unknown_mode():
    with pytest.raises(ClassifierError):
        classify_motion(MotionFeatures(d_net=math.nan))
    with pytest.raises(ClassifierError):
        classify_motion(MotionFeatures(), "bogus")


feature_values = st.floats(0, 2, allow_nan=False)


@settings(max_examples=200, deadline=None)
@given(st.fixed_dictionaries({
    "d_net": feature_values, "delta_max": feature_values, "start_extent": feature_values,
    "scale_range": feature_values, "pop_height": feature_values, "E_start": feature_values,
    "E_mid": feature_values, "E_end": feature_values, "rho": feature_values,
    "theta_90": st.floats(-200, 200), "theta_tot": st.floats(-200, 200),
    "theta_dot_max": st.floats(0, 500), "pos_zx": st.integers(0, 20), "sc_zx": st.integers(0, 20),
    "op_range": st.floats(0, 1), "op_start": st.floats(0, 1), "op_mid": st.floats(0, 1),
    "op_end": st.floats(0, 1), "low_mid_frac": st.floats(0, 1), "pres_start": st.floats(0, 1),
    "pres_mid": st.floats(0, 1), "pres_end": st.floats(0, 1), "pres_full": st.floats(0, 1),
}), st.sampled_from([CONTOUR, LAYOUT_MATCH]))
def test_first_match_and_determinism(d, mode):
    d["E_peak"] = max(d["E_start"], d["E_end"])
    d["E_tot"] = d["E_start"] + d["E_mid"] + d["E_end"]
    f = MotionFeatures(**d)
    trace = classify_motion(f, mode)
    conds = rule_conditions(trace.feature_snapshot, mode)
    assert conds[trace.fired_rule - 1] and not any(conds[: trace.fired_rule - 1])
    assert classify_motion(f, mode) == trace


@settings(max_examples=100, deadline=None)
@given(st.floats(0, 2), st.floats(0, 2), st.floats(0, 200), st.integers(0, 20),
       st.floats(0.05, 1), st.floats(0.85, 1))
def test_zeroed_motion_is_static(d_net, energy, theta, zx, pres_full, pres_ends):
    # on fully covered clips with steady opacity, removing all motion lands on a static rule
    f = MotionFeatures(d_net=d_net, E_start=energy, E_mid=energy, E_end=energy, E_peak=energy, E_tot=3 * energy,
                       theta_90=theta, pos_zx=zx, sc_zx=zx, pres_start=pres_ends, pres_mid=pres_ends,
                       pres_end=pres_ends, pres_full=pres_full)
    assert classify_motion(f.scaled_motion(0)).fired_rule in (1, 15)


def test_thresholds_override_changes_outcome(tmp_path):
    _, f = RULE_CASES[10]
    strict = Thresholds().with_overrides({"r10_d_net_min": 0.5})
    assert classify_motion(f, CONTOUR, strict).fired_rule != 10
    p = tmp_path / "t.json"
    p.write_text(json.dumps({"r10_d_net_min": 0.5, "r8_pos_zx_min": 4}))
    th = load_thresholds(p)
    assert th.r10_d_net_min == 0.5 and th.r8_pos_zx_min == 4 and isinstance(th.r8_pos_zx_min, int)
    q = tmp_path / "t.toml"
    q.write_text("[thresholds]\nr10_d_net_min = 0.5\n")
    assert load_thresholds(q) == strict


def test_thresholds_reject_unknown_names():
    with pytest.raises(ClassifierError):
        Thresholds().with_overrides({"no_such_rule": 1})
    with pytest.raises(ClassifierError):
        Thresholds().with_overrides({"r10_d_net_min": "big"})


def test_golden_credit_table():
    for gt, row in GOLDEN.items():
        for pred, want in zip(GOLDEN_COLUMNS, row):
            assert motion_credit(gt, pred) == want, (gt, pred)
        for pred in (OC.STATIC, OC.SKETCH, OC.NEON, OC.UNKNOWN):
            assert motion_credit(gt, pred) == 0.0


def test_credit_asymmetries():
    assert motion_credit(OC.ROTATE, OC.SCRAPBOOK) == 1.0
    assert motion_credit(OC.SCRAPBOOK, OC.ROTATE) == 0.5
    assert motion_credit(OC.SCRAPBOOK, OC.PAN) == 0.3
    assert motion_credit(OC.PAN, OC.SCRAPBOOK) == 0.0
    assert motion_credit("fade", "pop") == 0.0


def test_unknown_ground_truth():
    assert motion_credit(OC.UNKNOWN, OC.STATIC) == 1.0
    assert motion_credit(OC.UNKNOWN, OC.UNKNOWN) == 1.0
    assert motion_credit(OC.UNKNOWN, OC.SCRAPBOOK) == 0.0


def test_credit_bounds_and_diagonal():
    for gt in OC:
        for pred in OC:
            assert 0.0 <= motion_credit(gt, pred) <= 1.0
    for x in (OC.SCRAPBOOK, OC.POP, OC.FADE, OC.ROTATE):
        assert motion_credit(x, x) == 1.0
    assert set(CREDIT_TABLE) == set(GOLDEN)
