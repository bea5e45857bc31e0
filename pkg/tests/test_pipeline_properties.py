"""Cross-module invariants exercised through the full pipeline."""

from fractions import Fraction

import pytest

from sharpmin.cli import RunConfig, run


def test_scale_invariance_of_verdict_and_stars(analyze):
    base = analyze("2*x^2+y^4").data["classification"]
    scaled = analyze("6*x^2+3*y^4").data["classification"]
    assert base["verdict"] == scaled["verdict"] == "ISOLATED_LOCAL_MIN"
    assert base["alpha_star"] == scaled["alpha_star"]
    assert scaled["a_star"] == pytest.approx(3.0 * base["a_star"], rel=1e-9)


def test_negated_function_flips_all_signs(analyze):
    up = analyze("2*x^2+y^4").data
    down = analyze("-2*x^2-y^4").data
    assert down["classification"]["verdict"] == "NOT_LOCAL_MIN"
    up_signs = sorted(b["a_sign"] for b in up["branches"])
    down_signs = sorted(-b["a_sign"] for b in down["branches"])
    assert up_signs == down_signs


def test_psi_lower_bounds_every_branch(analyze):
    for fn, kind in [("3*x^2+2*y^3", "smooth"), ("x^2-y^4", "abs"),
                     ("x^4+y^4", "smooth")]:
        data = analyze(fn, kind).data
        psi_by_t = {row[0]: row[3] for row in data["oracle"]["samples"]}
        for b in data["branches"]:
            for t, delta in zip(b["t"], b["delta"]):
                assert psi_by_t[t] <= delta + 1e-9 * max(1.0, abs(delta))


def test_bl_probe_floor_on_isolated_corpus(analyze):
    for fn in ["2*x^2+y^4", "x^2+y^2", "x^4+y^4"]:
        data = analyze(fn).data
        assert data["classification"]["verdict"] == "ISOLATED_LOCAL_MIN"
        bl = next(p for p in data["probes"] if p["name"] == "BL")
        assert bl["inf_ratio"] >= 1e-3


def test_abs_model_radial_maximum_detected(analyze):
    # f = |x^2 + y^2 - 1| near the origin equals 1 - r^2: a strict maximum
    data = analyze("x^2+y^2-1", "abs").data
    assert data["degenerate"] is True
    cls = data["classification"]
    assert cls["verdict"] == "NOT_LOCAL_MIN"
    b = data["branches"][0]
    assert b["alpha"] == "2"
    assert b["a"] == pytest.approx(-1.0, rel=1e-9)


def test_abs_model_off_center_kink(analyze):
    # f = |x - 1/4| at the origin decreases toward the kink line
    data = analyze("x-1/4", "abs").data
    assert data["classification"]["verdict"] == "NOT_LOCAL_MIN"
    assert len(data["branches"]) == 2
    assert sorted(b["a_sign"] for b in data["branches"]) == [-1, 1]


def test_shifted_center_matches_origin_analysis(analyze):
    at_origin = analyze("2*x^2+y^4").data
    shifted = run(RunConfig(
        function_text="2*(x-1/3)^2 + (y+2/7)^4", model_kind="smooth",
        center=(Fraction(1, 3), Fraction(-2, 7))))
    cls0 = at_origin["classification"]
    cls1 = shifted.data["classification"]
    assert cls1["verdict"] == cls0["verdict"] == "ISOLATED_LOCAL_MIN"
    assert cls1["alpha_star"] == cls0["alpha_star"]
    assert cls1["a_star"] == pytest.approx(cls0["a_star"], rel=1e-6)


def test_nonzero_center_value_no_cancellation():
    # large constant offset must not corrupt tiny branch deltas
    data = run(RunConfig(function_text="1000000 + 2*x^2+y^4",
                         model_kind="smooth")).data
    cls = data["classification"]
    assert cls["verdict"] == "ISOLATED_LOCAL_MIN"
    assert cls["alpha_star"] == "4"
    assert cls["a_star"] == pytest.approx(1.0, rel=1e-6)
    assert data["psi_consistency"]["ok"]


def test_report_carries_work_counters(analyze):
    data = analyze("2*x^2+y^4").data
    assert data["work"]["slices"] == 24
    assert data["work"]["tangency_points"] == 4 * 24


def test_branch_below_float_threshold_is_certified_exactly(analyze):
    # (1/8)**14 < 1e-12: the y-branches look flat in floats, but the exact
    # enclosure certifies them nonzero and the power law still fits
    data = analyze("x^2 + y^14").data
    cls = data["classification"]
    assert cls["verdict"] == "ISOLATED_LOCAL_MIN"
    assert cls["alpha_star"] == "14"
    assert cls["a_star"] == pytest.approx(1.0, rel=1e-9)
    assert any("certified nonzero" in w for w in data["warnings"])


def test_psi_monotone_for_isolated_minima(analyze):
    for fn in ["2*x^2+y^4", "x^2+y^2", "x^4+y^4"]:
        data = analyze(fn).data
        assert data["classification"]["verdict"] == "ISOLATED_LOCAL_MIN"
        deltas = [row[3] for row in data["oracle"]["samples"]]
        assert all(a > b > 0 for a, b in zip(deltas, deltas[1:]))
