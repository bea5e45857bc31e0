import math
from fractions import Fraction

import pytest

from sharpmin.branchtrack import (
    AmbiguousMatchError,
    Branch,
    NonStabilizedError,
    build_ladder,
    branch_values,
    fit_trace,
    match_angles,
    trace,
)
from sharpmin.polynomial import parse
from sharpmin.tangency import abs_model, smooth_model, tangency_polynomial

XY = ("x", "y")


def make_trace(text, kind="smooth", t0=Fraction(1, 8), rho=Fraction(1, 2),
               count=24, center=(0, 0)):
    body = parse(text, XY)
    model = smooth_model(body, center) if kind == "smooth" else abs_model(body, center)
    tp = tangency_polynomial(model)
    return model, trace(model, tp, build_ladder(t0, rho, count))


def test_build_ladder_geometric():
    ladder = build_ladder(Fraction(1, 8), Fraction(1, 2), 4)
    assert ladder.radii == (Fraction(1, 8), Fraction(1, 16),
                            Fraction(1, 32), Fraction(1, 64))


def test_build_ladder_two_rungs():
    assert build_ladder(1, Fraction(1, 2), 2).radii == (Fraction(1), Fraction(1, 2))


def test_build_ladder_domain_errors():
    with pytest.raises(ValueError):
        build_ladder(Fraction(1, 8), 2, 8)
    with pytest.raises(ValueError):
        build_ladder(0, Fraction(1, 2), 8)
    with pytest.raises(ValueError):
        build_ladder(Fraction(1, 8), Fraction(1, 2), 0)


def test_trace_cubic_four_branches():
    model, tr = make_trace("3*x^2 + 2*y^3")
    assert len(tr.branches) == 4
    assert tr.window_start == 0
    assert not tr.degenerate
    # every rung point belongs to exactly one branch
    for j, sl in enumerate(tr.slices):
        claimed = [b.points[j] for b in tr.branches]
        assert sorted(id(p) for p in claimed) == sorted(id(p) for p in sl)


def test_trace_cubic_branch_values():
    model, tr = make_trace("3*x^2 + 2*y^3")
    radii = [float(t) for t in tr.window_radii]
    down = next(b for b in tr.branches
                if abs(b.theta_start - 3 * math.pi / 2) < 1e-6)
    for v, t in zip(branch_values(model, down), radii):
        assert v == pytest.approx(-2 * t ** 3, rel=1e-9)
    right_vals = next(b for b in tr.branches
                      if min(b.theta_start, 2 * math.pi - b.theta_start) < 1e-6)
    for v, t in zip(right_vals.f_values, radii):
        assert v == pytest.approx(3 * t * t, rel=1e-12)


def test_trace_degenerate_radial():
    model, tr = make_trace("x^2 + y^2")
    assert tr.degenerate
    assert len(tr.branches) == 1
    b = tr.branches[0]
    assert not b.constant
    for v, t in zip(b.deltas, (float(t) for t in tr.window_radii)):
        assert v == pytest.approx(t * t, rel=1e-15)


def test_trace_constant_branch_values():
    model, tr = make_trace("x^2")
    assert len(tr.branches) == 4
    constants = [b for b in tr.branches if b.constant]
    moving = [b for b in tr.branches if not b.constant]
    assert len(constants) == 2 and len(moving) == 2
    for b in constants:
        assert all(v == pytest.approx(0.0, abs=1e-12) for v in b.f_values)
    for b in moving:
        for v, t in zip(b.f_values, (float(t) for t in tr.window_radii)):
            assert v == pytest.approx(t * t, rel=1e-12)


def test_trace_abs_counterexample_eight_branches():
    model, tr = make_trace("x^2 - y^4", kind="abs")
    assert len(tr.branches) == 8
    zero_branches = [b for b in tr.branches if b.on_zero_set]
    assert len(zero_branches) == 4
    assert all(b.constant for b in zero_branches)


def test_trace_monkey_saddle_six_branches():
    model, tr = make_trace("x^3 - 3*x*y^2")
    assert len(tr.branches) == 6
    radii = [float(t) for t in tr.window_radii]
    for b in tr.branches:
        for v, t in zip(b.f_values, radii):
            assert abs(v) == pytest.approx(t ** 3, rel=1e-9)
    signs = sorted(1 if b.f_values[0] > 0 else -1 for b in tr.branches)
    assert signs == [-1, -1, -1, 1, 1, 1]


def test_trace_determinism():
    _, tr1 = make_trace("3*x^2 + 2*y^3")
    _, tr2 = make_trace("3*x^2 + 2*y^3")
    assert [b.id for b in tr1.branches] == [b.id for b in tr2.branches]
    assert [b.theta_start for b in tr1.branches] == [b.theta_start for b in tr2.branches]
    assert [b.deltas for b in tr1.branches] == [b.deltas for b in tr2.branches]


def test_trace_nonstabilized_large_t0():
    # circles of radius > 1 cross the extra zero set y = 1, so counts differ
    # until the ladder drops below radius 1; 11 rungs leave only 7 stable
    with pytest.raises(NonStabilizedError):
        make_trace("3*x^2 + 2*y^3", t0=Fraction(16), count=11)
    _, tr = make_trace("3*x^2 + 2*y^3", t0=Fraction(16), count=12)
    assert tr.window_start == 4
    assert len(tr.branches) == 4


def test_trust_radius_is_smallest_rung():
    _, tr = make_trace("2*x^2 + y^4")
    assert tr.trust_radius == float(Fraction(1, 8) / 2 ** 23)


def test_match_angles_simple_rotation():
    prev = [0.0, math.pi / 2, math.pi, 3 * math.pi / 2]
    nxt = [0.01, math.pi / 2 + 0.01, math.pi + 0.01, 3 * math.pi / 2 + 0.01]
    assert match_angles(prev, nxt, threshold=0.5) == [0, 1, 2, 3]


def test_match_angles_wrapping():
    prev = [2 * math.pi - 0.01, 1.0]
    nxt = [0.01, 1.02]
    assert match_angles(prev, nxt, threshold=0.5) == [0, 1]


def test_match_angles_ambiguous():
    prev = [0.0]
    nxt = [0.5]
    with pytest.raises(AmbiguousMatchError):
        match_angles([0.0, 1.0], [0.5, 0.5 + 5e-10], threshold=2.0)


def test_match_angles_threshold_violation():
    with pytest.raises(NonStabilizedError):
        match_angles([0.0], [1.0], threshold=0.5)


def test_fit_trace_attaches_certified_fits():
    model, tr = make_trace("3*x^2 + 2*y^3")
    fit_trace(tr, model)
    fitted = sorted((float(b.alpha), round(b.a, 6), b.a_sign)
                    for b in tr.branches)
    assert fitted == [(2.0, 3.0, 1), (2.0, 3.0, 1), (3.0, -2.0, -1), (3.0, 2.0, 1)]
