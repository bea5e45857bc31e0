import math
from fractions import Fraction

import numpy as np
import pytest

from sharpmin.polynomial import parse
from sharpmin.tangency import (
    DegenerateTangencyError,
    abs_model,
    circle_section,
    circle_slice,
    slope,
    smooth_model,
    tangency_polynomial,
)

XY = ("x", "y")


def ang_dist(a, b):
    d = abs(a - b) % (2.0 * math.pi)
    return min(d, 2.0 * math.pi - d)


def point_at(points, theta, tol=1e-9):
    matches = [p for p in points if ang_dist(p.theta, theta) <= tol]
    assert len(matches) == 1, f"no unique point near theta={theta}"
    return matches[0]


def scan_zero_angles(func, t, n=100_000, exact_hits=True):
    """Independent oracle: angles where func(t*cos, t*sin) changes sign."""
    thetas = np.linspace(0.0, 2.0 * math.pi, n, endpoint=False)
    vals = func(t * np.cos(thetas), t * np.sin(thetas))
    out = []
    for i in range(n):
        a, b = vals[i], vals[(i + 1) % n]
        if a == 0.0:
            if exact_hits:
                out.append(thetas[i])
        elif (a > 0) != (b > 0):
            lo, hi = thetas[i], thetas[i] + 2.0 * math.pi / n
            fa = a
            for _ in range(60):
                mid = 0.5 * (lo + hi)
                fm = func(t * math.cos(mid), t * math.sin(mid))
                if fm == 0.0:
                    lo = hi = mid
                    break
                if (fa > 0) != (fm > 0):
                    hi = mid
                else:
                    lo, fa = mid, fm
            out.append(0.5 * (lo + hi))
    return sorted(th % (2.0 * math.pi) for th in out)


def test_tangency_polynomial_cubic():
    m = smooth_model(parse("3*x^2 + 2*y^3", XY), (0, 0))
    tp = tangency_polynomial(m)
    assert tp.g == parse("6*x*y - 6*x*y^2", XY)


def test_tangency_polynomial_simple_square():
    m = smooth_model(parse("x^2", XY), (0, 0))
    assert tangency_polynomial(m).g == parse("2*x*y", XY)


def test_tangency_polynomial_radial_degenerate():
    m = smooth_model(parse("x^2 + y^2", XY), (0, 0))
    assert tangency_polynomial(m).g.is_zero


def test_tangency_polynomial_shifted_center():
    # recentering x^2 at (1, 0) must give the same g as x^2+2x+1 at the origin
    m = smooth_model(parse("x^2", XY), (1, 0))
    m0 = smooth_model(parse("x^2 + 2*x + 1", XY), (0, 0))
    assert tangency_polynomial(m).g == tangency_polynomial(m0).g


def test_circle_section_is_exact_restriction():
    poly = parse("3*x^2 + 2*y^3 - x*y", XY)
    t = Fraction(1, 3)
    sec = circle_section(poly, t, chart=1)
    for u in [Fraction(0), Fraction(1, 2), Fraction(-3), Fraction(7, 5)]:
        den = 1 + u * u
        x = t * (1 - u * u) / den
        y = 2 * t * u / den
        assert sec(u) == poly.evaluate((x, y)) * den ** poly.total_degree


def test_circle_slice_axes():
    m = smooth_model(parse("x^2", XY), (0, 0))
    pts = circle_slice(tangency_polynomial(m), Fraction(1, 4))
    assert len(pts) == 4
    for exp in [0.0, math.pi / 2, math.pi, 3 * math.pi / 2]:
        point_at(pts, exp)
    for p in pts:
        r = math.hypot(p.position[0], p.position[1])
        assert abs(r - 0.25) <= 1e-13 * 0.25


def test_circle_slice_cubic_small_radius():
    m = smooth_model(parse("3*x^2 + 2*y^3", XY), (0, 0))
    pts = circle_slice(tangency_polynomial(m), Fraction(1, 8))
    assert len(pts) == 4
    # branch values on the axes: 3t^2 on (+-t, 0), +-2t^3 on (0, +-t)
    t = 0.125
    assert point_at(pts, 0.0).f_value == pytest.approx(3 * t * t, rel=1e-12)
    assert point_at(pts, math.pi / 2).f_value == pytest.approx(2 * t ** 3, rel=1e-9)
    assert point_at(pts, 3 * math.pi / 2).f_value == pytest.approx(-2 * t ** 3, rel=1e-9)


def test_circle_slice_matches_scan_oracle():
    body = parse("3*x^2 + 2*y^3", XY)
    m = smooth_model(body, (0, 0))
    tp = tangency_polynomial(m)
    t = Fraction(1, 8)
    pts = circle_slice(tp, t)

    def gfun(X, Y):
        return Y * (6.0 * X) - X * (6.0 * Y ** 2)

    scan = scan_zero_angles(gfun, float(t))
    reported = [p.theta for p in pts]
    for th in scan:
        assert min(ang_dist(th, r) for r in reported) < 1e-6


def test_circle_slice_abs_model_zero_set_points():
    m = abs_model(parse("x^2 - y^4", XY), (0, 0))
    tp = tangency_polynomial(m)
    t = Fraction(1, 10)
    pts = circle_slice(tp, t)
    zero_pts = [p for p in pts if p.on_zero_set]
    other = [p for p in pts if not p.on_zero_set]
    assert len(zero_pts) == 4
    assert len(other) == 4

    # oracle: angles where x^2 = y^4 on the circle, by dense scan
    def pfun(X, Y):
        return X ** 2 - Y ** 4

    scan = scan_zero_angles(pfun, float(t))
    assert len(scan) == 4
    reported = [p.theta for p in zero_pts]
    for th in scan:
        assert min(ang_dist(th, r) for r in reported) < 1e-6
    for p in zero_pts:
        assert p.f_value == pytest.approx(0.0, abs=1e-12)
        assert p.delta_box.contains(0)


def test_circle_slice_theta_pi_point():
    # g = 2xy vanishes at (-t, 0): the chart's point at infinity must appear
    m = smooth_model(parse("x^2", XY), (0, 0))
    pts = circle_slice(tangency_polynomial(m), Fraction(1, 4))
    pi_pts = [p for p in pts if p.theta == pytest.approx(math.pi)]
    assert len(pi_pts) == 1
    assert pi_pts[0].f_value == pytest.approx(0.0625, rel=1e-14)
    assert pi_pts[0].delta_box.contains(Fraction(1, 16))


def test_degenerate_tangency_raises():
    m = smooth_model(parse("x^2 + y^2", XY), (0, 0))
    with pytest.raises(DegenerateTangencyError):
        circle_slice(tangency_polynomial(m), Fraction(1, 4))


def test_tangency_residual_invariant():
    body = parse("2*x^2 + y^4", XY)
    m = smooth_model(body, (0, 0))
    tp = tangency_polynomial(m)
    gmax = max(abs(float(c)) for c in tp.g.terms.values())
    deg = tp.g.total_degree
    for t in [Fraction(1, 8), Fraction(1, 64)]:
        for p in circle_slice(tp, t):
            gv = tp.g.evaluate_float(
                (p.position[0] - float(m.center[0]),
                 p.position[1] - float(m.center[1])))
            assert abs(gv) <= 1e-10 * (1 + gmax) * float(t) ** deg


def test_lagrange_parallelism_residual():
    body = parse("3*x^2 + 2*y^3", XY)
    m = smooth_model(body, (0, 0))
    tp = tangency_polynomial(m)
    for t in [Fraction(1, 8), Fraction(1, 32)]:
        for p in circle_slice(tp, t):
            gx, gy = m.gradient_at(*p.position)
            norm = math.hypot(gx, gy)
            if norm == 0.0:
                continue
            tangent = (-math.sin(p.theta), math.cos(p.theta))
            residual = abs(gx * tangent[0] + gy * tangent[1])
            assert residual <= 1e-8 * norm


def test_slope_examples():
    m = abs_model(parse("x^2 - y^4", XY), (0, 0))
    for t in [0.5, 0.1, 0.01]:
        assert slope(m, (0.0, t)) == pytest.approx(4 * t ** 3, rel=1e-12)
    # on the zero set x = s^2, y = s the subgradient segment contains 0
    for s in [0.5, 0.2]:
        assert slope(m, (s * s, s)) == 0.0

    radial = smooth_model(parse("x^2 + y^2", XY), (0, 0))
    assert slope(radial, (0.3, -0.4)) == pytest.approx(2 * 0.5, rel=1e-14)


def test_slope_continuity_off_zero_set():
    m = abs_model(parse("x^2 - y^4", XY), (0, 0))
    # walk a path staying on one side of p = 0: no tolerance-induced jumps
    ts = np.linspace(0.2, 0.4, 200)
    vals = [slope(m, (0.0, t)) for t in ts]
    diffs = np.abs(np.diff(vals))
    assert diffs.max() <= 4 * (ts[1] - ts[0]) * 3 * 0.4 ** 2 * 1.5


def test_delta_sign_certification():
    m = smooth_model(parse("3*x^2 + 2*y^3", XY), (0, 0))
    tp = tangency_polynomial(m)
    pts = circle_slice(tp, Fraction(1, 1024))
    assert point_at(pts, 3 * math.pi / 2).refine_delta_sign() == -1
    assert point_at(pts, math.pi / 2).refine_delta_sign() == 1


def test_value_boxes_contain_float_values():
    m = abs_model(parse("x^2 - y^4", XY), (0, 0))
    tp = tangency_polynomial(m)
    for p in circle_slice(tp, Fraction(1, 10)):
        assert p.f_value_box.contains(Fraction(p.f_value))
        assert p.delta_box.contains(Fraction(p.delta))


def test_tangential_zero_set_point_found_without_sign_change():
    # the parabola x = y^2 + 1/100 touches the circle of radius 1/100 at
    # (1/100, 0): p has no sign change there, so a scan would miss it, but the
    # exact slicer reports it (merged with the g-root at theta = 0)
    m = abs_model(parse("x - y^2 - 1/100", XY), (0, 0))
    tp = tangency_polynomial(m)
    t = Fraction(1, 100)

    def pfun(X, Y):
        return X - Y ** 2 - 0.01

    assert scan_zero_angles(pfun, float(t), n=20000, exact_hits=False) == []
    pts = circle_slice(tp, t)
    touch = point_at(pts, 0.0)
    assert touch.on_zero_set
    assert touch.delta == pytest.approx(-0.01, rel=1e-15)
    # only one point is reported at the tangency angle (g-root and p-root merge)
    assert sum(1 for p in pts if ang_dist(p.theta, 0.0) < 1e-6) == 1


def test_zero_set_points_on_crossing_circles():
    # above the tangency radius the same circle meets the parabola twice
    m = abs_model(parse("x - y^2 - 1/100", XY), (0, 0))
    tp = tangency_polynomial(m)
    pts = circle_slice(tp, Fraction(1, 50))
    zero_pts = [p for p in pts if p.on_zero_set]
    assert len(zero_pts) == 2
    for p in zero_pts:
        assert p.delta == pytest.approx(-0.01, rel=1e-15)
