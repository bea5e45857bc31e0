"""Tangency varieties of bivariate functions and their circle sections.

Two function models are supported: a smooth polynomial f, and f = |p| for a
polynomial p.  In both cases the tangency condition "some subgradient at x is
parallel to x - center" reduces, off the zero set of p, to the single
polynomial equation g = y*df/dx - x*df/dy = 0 in coordinates centered at the
base point.  For the absolute-value model the entire zero set of p belongs to
the tangency variety as well (the subgradient segment there contains 0), so
circle sections report those points too, flagged ``on_zero_set``.

Circles are sliced exactly: the substitution u = tan(theta/2) turns the
restriction of a polynomial to the circle of rational radius t into a
univariate polynomial with rational coefficients, whose real roots are
isolated by Sturm sequences.  A sign scan would miss tangential (even
multiplicity) zeros; the exact route cannot.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .polynomial import Interval, Polynomial, PolynomialError
from .realroots import (
    RootBox,
    UniPoly,
    cauchy_bound,
    poly_gcd,
    squarefree,
    sturm_isolate,
)

SMOOTH = "smooth"
ABS = "abs"

# |p(x)| below this scale-aware threshold is treated as "on the zero set"
# when computing the nonsmooth slope.
ZERO_SET_TOL = 1e-14

_DEFAULT_BOX_WIDTH = Fraction(1, 10 ** 12)
_DEFAULT_VALUE_TOL = Fraction(1, 10 ** 12)
_MAX_REFINE_STEPS = 400


class DegenerateTangencyError(ValueError):
    """The tangency polynomial is identically zero (f is radial)."""


class DegenerateSliceError(ValueError):
    """A circle section vanished identically at one radius."""

    def __init__(self, t: Fraction):
        super().__init__(f"section is identically zero on the circle of radius {t}")
        self.radius = t


def _compile_terms(poly: Polynomial) -> list[tuple[float, int, int]]:
    return [(float(c), e[0], e[1]) for e, c in poly.terms.items()]


def _eval_terms(terms, x: float, y: float) -> float:
    xp = {0: 1.0}
    yp = {0: 1.0}
    total = 0.0
    for c, i, j in terms:
        if i not in xp:
            xp[i] = x ** i
        if j not in yp:
            yp[j] = y ** j
        total += c * xp[i] * yp[j]
    return total


def _eval_terms_grid(terms, X: np.ndarray, Y: np.ndarray) -> np.ndarray:
    xp = {0: np.ones_like(X)}
    yp = {0: np.ones_like(Y)}
    total = np.zeros_like(X)
    for c, i, j in terms:
        if i not in xp:
            xp[i] = X ** i
        if j not in yp:
            yp[j] = Y ** j
        total += c * xp[i] * yp[j]
    return total


class FunctionModel:
    """A bivariate function f with known subdifferential structure.

    ``kind`` is ``"smooth"`` (f = body) or ``"abs"`` (f = |body|).  The center
    is the base point of the analysis; all deltas are relative to f(center).
    Delta evaluation subtracts the center value symbolically before any float
    arithmetic, so tiny branch values near the center are not destroyed by
    cancellation against a large f(center).
    """

    def __init__(self, kind: str, body: Polynomial, center: Sequence):
        if kind not in (SMOOTH, ABS):
            raise ValueError(f"unknown model kind {kind!r}")
        if len(body.variables) != 2:
            raise PolynomialError("function models must have exactly 2 variables")
        self.kind = kind
        self.body = body
        self.center = (Fraction(center[0]), Fraction(center[1]))
        self.centered = body.shift(self.center)
        self.body_value_at_center = self.centered.constant_term()
        if kind == SMOOTH:
            self.value_at_center = self.body_value_at_center
        else:
            self.value_at_center = abs(self.body_value_at_center)
        # body minus its value at the center, in centered coordinates
        self.centered_offset = self.centered - Polynomial.constant(
            body.variables, self.body_value_at_center)
        self._offset_terms = _compile_terms(self.centered_offset)
        self._pbar = float(self.body_value_at_center)
        self._body_terms = _compile_terms(body)
        self._dx_terms = _compile_terms(body.partial(body.variables[0]))
        self._dy_terms = _compile_terms(body.partial(body.variables[1]))
        self._deg = max(body.total_degree, 0)
        self._center_f = (float(self.center[0]), float(self.center[1]))

    def __repr__(self):
        return f"FunctionModel({self.kind}, {self.body}, center={self.center})"

    # -- accurate deltas (f(x) - f(center)) ----------------------------------

    def delta_at(self, cu: float, cv: float) -> float:
        """f(center + (cu, cv)) - f(center), in centered coordinates."""
        val = _eval_terms(self._offset_terms, cu, cv)
        if self.kind == SMOOTH:
            return val
        if self.body_value_at_center == 0:
            return abs(val)
        s = 1.0 if self._pbar > 0 else -1.0
        total = val + self._pbar
        if s * total >= 0.0:
            return s * val
        return abs(total) - abs(self._pbar)

    def delta_grid(self, CU: np.ndarray, CV: np.ndarray) -> np.ndarray:
        val = _eval_terms_grid(self._offset_terms, CU, CV)
        if self.kind == SMOOTH:
            return val
        if self.body_value_at_center == 0:
            return np.abs(val)
        s = 1.0 if self._pbar > 0 else -1.0
        total = val + self._pbar
        return np.where(s * total >= 0.0, s * val, np.abs(total) - abs(self._pbar))

    def delta_on_circle(self, t: float, thetas: np.ndarray) -> np.ndarray:
        return self.delta_grid(t * np.cos(thetas), t * np.sin(thetas))

    def value_at(self, x: float, y: float) -> float:
        """f at an absolute point."""
        return float(self.value_at_center) + self.delta_at(
            x - self._center_f[0], y - self._center_f[1])

    # -- nonsmooth slope ------------------------------------------------------

    def _zero_set_threshold(self, r: float) -> float:
        return ZERO_SET_TOL * (1.0 + r) ** self._deg

    def slope_at(self, x: float, y: float) -> float:
        """Minimal subgradient norm at an absolute point.

        Smooth model: the gradient norm.  Absolute-value model: the gradient
        norm of the inner polynomial off its zero set, and 0 on it (the
        subgradient segment there always contains the origin).
        """
        gx = _eval_terms(self._dx_terms, x, y)
        gy = _eval_terms(self._dy_terms, x, y)
        norm = math.hypot(gx, gy)
        if self.kind == SMOOTH:
            return norm
        pval = _eval_terms(self._body_terms, x, y)
        r = math.hypot(x - self._center_f[0], y - self._center_f[1])
        if abs(pval) <= self._zero_set_threshold(r):
            return 0.0
        return norm

    def slope_grid(self, X: np.ndarray, Y: np.ndarray) -> np.ndarray:
        gx = _eval_terms_grid(self._dx_terms, X, Y)
        gy = _eval_terms_grid(self._dy_terms, X, Y)
        norm = np.hypot(gx, gy)
        if self.kind == SMOOTH:
            return norm
        pval = _eval_terms_grid(self._body_terms, X, Y)
        r = np.hypot(X - self._center_f[0], Y - self._center_f[1])
        tol = ZERO_SET_TOL * (1.0 + r) ** self._deg
        return np.where(np.abs(pval) <= tol, 0.0, norm)

    def gradient_at(self, x: float, y: float) -> tuple[float, float]:
        return (_eval_terms(self._dx_terms, x, y),
                _eval_terms(self._dy_terms, x, y))

    def gradient_grid(self, X: np.ndarray, Y: np.ndarray):
        return (_eval_terms_grid(self._dx_terms, X, Y),
                _eval_terms_grid(self._dy_terms, X, Y))

    def body_at(self, x: float, y: float) -> float:
        """The inner polynomial itself at an absolute point (p for abs models)."""
        return _eval_terms(self._body_terms, x, y)

    def body_grid(self, X: np.ndarray, Y: np.ndarray) -> np.ndarray:
        return _eval_terms_grid(self._body_terms, X, Y)


def smooth_model(body: Polynomial, center: Sequence) -> FunctionModel:
    return FunctionModel(SMOOTH, body, center)


def abs_model(body: Polynomial, center: Sequence) -> FunctionModel:
    return FunctionModel(ABS, body, center)


def slope(model: FunctionModel, point: Sequence[float]) -> float:
    return model.slope_at(float(point[0]), float(point[1]))


@dataclass
class TangencyPolynomial:
    """g = y*dq/dx - x*dq/dy in centered coordinates (q = body recentered)."""

    g: Polynomial
    model: FunctionModel


def tangency_polynomial(model: FunctionModel) -> TangencyPolynomial:
    q = model.centered
    x_name, y_name = q.variables
    x = Polynomial.variable(q.variables, x_name)
    y = Polynomial.variable(q.variables, y_name)
    g = y * q.partial(x_name) - x * q.partial(y_name)
    return TangencyPolynomial(g=g, model=model)


# -- exact circle sections -----------------------------------------------------


def _dense_mul(a: list[Fraction], b: list[Fraction]) -> list[Fraction]:
    if not a or not b:
        return []
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, ca in enumerate(a):
        if ca == 0:
            continue
        for j, cb in enumerate(b):
            out[i + j] += ca * cb
    return out


def _dense_pow(base: list[Fraction], k: int, cache: dict) -> list[Fraction]:
    if k not in cache:
        if k == 0:
            cache[k] = [Fraction(1)]
        else:
            cache[k] = _dense_mul(_dense_pow(base, k - 1, cache), base)
    return cache[k]


def circle_section(poly: Polynomial, t: Fraction, chart: int = 1) -> UniPoly:
    """Restrict ``poly`` (centered coordinates) to the circle of radius t.

    With u = tan(theta/2) (chart=+1) the point is (t(1-u^2), 2tu)/(1+u^2);
    chart=-1 parametrizes around theta = pi instead.  The result is the
    numerator after clearing (1+u^2)**total_degree, an exact UniPoly.
    """
    if poly.is_zero:
        return UniPoly([])
    t = Fraction(t)
    m = poly.total_degree
    if chart == 1:
        A = [Fraction(1), Fraction(0), Fraction(-1)]   # 1 - u^2
        B = [Fraction(0), Fraction(2)]                 # 2u
    else:
        A = [Fraction(-1), Fraction(0), Fraction(1)]   # u^2 - 1
        B = [Fraction(0), Fraction(-2)]                # -2u
    C = [Fraction(1), Fraction(0), Fraction(1)]        # 1 + u^2
    ca: dict = {}
    cb: dict = {}
    cc: dict = {}
    acc = [Fraction(0)] * (2 * m + 1)
    for (i, j), coeff in poly.terms.items():
        part = _dense_mul(_dense_pow(A, i, ca),
                          _dense_mul(_dense_pow(B, j, cb),
                                     _dense_pow(C, m - i - j, cc)))
        scale = coeff * t ** (i + j)
        for k, c in enumerate(part):
            acc[k] += scale * c
    return UniPoly(acc)


@dataclass
class _SectionValue:
    """Exact value of the model's delta along one chart of a circle."""

    numerator: UniPoly
    den_power: int
    abs_shift: Fraction | None  # None: smooth; else |.| - abs_shift semantics

    def interval(self, box: Interval) -> Interval:
        num = self.numerator.eval_interval(box)
        den = box.power(2).shift(1).power(self.den_power)
        val = num.divide_by(den)
        if self.abs_shift is None:
            return val
        return val.abs().shift(-abs(self.abs_shift))


def _section_value(model: FunctionModel, t: Fraction, chart: int) -> _SectionValue:
    if model.kind == SMOOTH:
        num_poly = model.centered_offset
        shift = None
    else:
        num_poly = model.centered
        shift = model.body_value_at_center
    num = circle_section(num_poly, t, chart)
    return _SectionValue(num, max(num_poly.total_degree, 0), shift)


@dataclass
class TangencyPoint:
    """A certified zero of the tangency condition on one circle."""

    radius: Fraction
    angle_box: RootBox
    theta: float
    position: tuple[float, float]
    f_value: float
    f_value_box: Interval
    on_zero_set: bool
    delta: float
    delta_box: Interval
    chart: int = 1
    _isolating: UniPoly | None = field(default=None, repr=False)
    _section: _SectionValue | None = field(default=None, repr=False)

    def refine_delta_sign(self, rel_slack: Fraction = Fraction(1, 100),
                          floor: Fraction = Fraction(1, 10 ** 300),
                          max_steps: int = _MAX_REFINE_STEPS) -> int:
        """Narrow the enclosure until the sign of the exact delta is decided.

        Returns -1/0/+1; 0 means the enclosure still straddles zero at a
        resolution finer than both ``rel_slack * |delta|`` and ``floor``,
        i.e. the float delta is indistinguishable from noise.
        """
        box = self.delta_box
        if box.sign() != 0:
            return box.sign()
        if self._section is None or self._isolating is None:
            return box.sign()
        target = max(abs(Fraction(self.delta)) * rel_slack, floor)
        ivl = self.angle_box.interval
        steps = 0
        while box.sign() == 0 and box.width > target and steps < max_steps:
            ivl = _bisect(self._isolating, ivl)
            box = self._section.interval(ivl)
            steps += 1
            if ivl.lo == ivl.hi:
                break
        self.angle_box = RootBox(ivl, self.angle_box.multiplicity, float(ivl.mid))
        self.delta_box = box
        return box.sign()


def _bisect(w: UniPoly, box: Interval) -> Interval:
    if box.lo == box.hi:
        return box
    mid = box.mid
    v = w(mid)
    if v == 0:
        return Interval.point(mid)
    lo_sign = 1 if w(box.lo) > 0 else -1
    if lo_sign != (1 if v > 0 else -1):
        return Interval(box.lo, mid)
    return Interval(mid, box.hi)


def _refine_width(w: UniPoly, box: Interval, width: Fraction) -> Interval:
    while box.width > width:
        box = _bisect(w, box)
    return box


def _theta_from_chart(u: float, chart: int) -> float:
    theta = 2.0 * math.atan(u)
    if chart != 1:
        theta += math.pi
    theta %= 2.0 * math.pi
    return theta


def _position_on_circle(t: float, u: float, chart: int) -> tuple[float, float]:
    den = 1.0 + u * u
    cx = t * (1.0 - u * u) / den
    cy = 2.0 * t * u / den
    if chart != 1:
        cx, cy = -cx, -cy
    return cx, cy


def _sign_change_on(w: UniPoly, box: Interval) -> bool:
    lo, hi = w(box.lo), w(box.hi)
    if lo == 0 or hi == 0:
        return True
    return (lo > 0) != (hi > 0)


def _isolate_refined(U: UniPoly, sf: UniPoly, width: Fraction,
                     residual_target: Fraction | None = None) -> list[RootBox]:
    """Isolate the real roots of U and narrow each box.

    When ``residual_target`` is given, each box is additionally narrowed until
    the exact enclosure of U over it is that small, which bounds the value of
    the sliced polynomial at the float position reported downstream.
    """
    bound = cauchy_bound(U)
    out = []
    for box in sturm_isolate(U, Interval(-bound, bound)):
        ivl = _refine_width(sf, box.interval, width)
        if residual_target is not None:
            steps = 0
            while steps < _MAX_REFINE_STEPS and ivl.lo != ivl.hi:
                enc = U.eval_interval(ivl)
                if max(abs(enc.lo), abs(enc.hi)) <= residual_target:
                    break
                ivl = _bisect(sf, ivl)
                steps += 1
        out.append(RootBox(ivl, box.multiplicity, float(ivl.mid)))
    return out


def _disjoin_across(boxes_a: list[RootBox], sf_a: UniPoly,
                    boxes_b: list[RootBox], sf_b: UniPoly) -> None:
    """Shrink boxes from two root families until no pair of boxes overlaps."""
    changed = True
    while changed:
        changed = False
        for a in boxes_a:
            for b in boxes_b:
                if (a.interval.hi >= b.interval.lo
                        and b.interval.hi >= a.interval.lo):
                    a.interval = _bisect(sf_a, a.interval)
                    b.interval = _bisect(sf_b, b.interval)
                    a.refined = float(a.interval.mid)
                    b.refined = float(b.interval.mid)
                    changed = True


def _build_point(model: FunctionModel, t: Fraction, box: RootBox, chart: int,
                 isolating: UniPoly, section: _SectionValue, on_zero_set: bool,
                 value_tol: Fraction) -> TangencyPoint:
    u = box.refined
    theta = _theta_from_chart(u, chart)
    cx, cy = _position_on_circle(float(t), u, chart)
    position = (cx + float(model.center[0]), cy + float(model.center[1]))

    if on_zero_set:
        # the exact point satisfies p = 0, so f = |p| vanishes there exactly
        exact_delta = -abs(model.body_value_at_center)
        delta = float(exact_delta)
        dbox_out = Interval.point(exact_delta).hull(Fraction(delta))
        f_value = float(model.value_at_center) + delta
        f_box = dbox_out.shift(model.value_at_center).hull(Fraction(f_value))
        return TangencyPoint(
            radius=t, angle_box=box, theta=theta, position=position,
            f_value=f_value, f_value_box=f_box, on_zero_set=True,
            delta=delta, delta_box=dbox_out, chart=chart,
            _isolating=isolating, _section=None)

    delta = model.delta_at(cx, cy)
    ivl = box.interval
    dbox = section.interval(ivl)
    tol = value_tol * (1 + abs(Fraction(delta)))
    steps = 0
    while dbox.width > tol and steps < _MAX_REFINE_STEPS:
        ivl = _bisect(isolating, ivl)
        dbox = section.interval(ivl)
        steps += 1
        if ivl.lo == ivl.hi:
            break
    angle_box = RootBox(ivl, box.multiplicity, float(ivl.mid))

    # keep the float sample inside the certified boxes
    dbox_out = dbox.hull(Fraction(delta))
    f_value = float(model.value_at_center) + delta
    f_box = dbox_out.shift(model.value_at_center).hull(Fraction(f_value))
    return TangencyPoint(
        radius=t, angle_box=angle_box, theta=theta, position=position,
        f_value=f_value, f_value_box=f_box, on_zero_set=on_zero_set,
        delta=delta, delta_box=dbox_out, chart=chart,
        _isolating=isolating, _section=section)


def _exact_pi_point(model: FunctionModel, t: Fraction, on_zero_set: bool,
                    multiplicity: int) -> TangencyPoint:
    """The u -> infinity point (theta = pi), evaluated exactly."""
    cpt = (-t, Fraction(0))
    if model.kind == SMOOTH:
        exact_delta = model.centered_offset.evaluate(cpt)
    else:
        pval = model.centered.evaluate(cpt)
        exact_delta = abs(pval) - abs(model.body_value_at_center)
    delta = float(exact_delta)
    dbox = Interval.point(exact_delta).hull(Fraction(delta))
    f_value = float(model.value_at_center) + delta
    f_box = dbox.shift(model.value_at_center).hull(Fraction(f_value))
    position = (float(model.center[0]) - float(t), float(model.center[1]))
    return TangencyPoint(
        radius=t, angle_box=RootBox(Interval.point(0), multiplicity, 0.0),
        theta=math.pi, position=position, f_value=f_value, f_value_box=f_box,
        on_zero_set=on_zero_set, delta=delta, delta_box=dbox, chart=-1,
        _isolating=None, _section=None)


def _trailing_zero_order(p: UniPoly) -> int:
    for k, c in enumerate(p.coeffs):
        if c != 0:
            return k
    return 0


def axis_sample_point(model: FunctionModel, t) -> TangencyPoint:
    """Exact sample at theta = 0, for radially symmetric (g = 0) models."""
    t = Fraction(t)
    cpt = (t, Fraction(0))
    if model.kind == SMOOTH:
        exact_delta = model.centered_offset.evaluate(cpt)
        on_zero = False
    else:
        pval = model.centered.evaluate(cpt)
        exact_delta = abs(pval) - abs(model.body_value_at_center)
        on_zero = pval == 0
    delta = float(exact_delta)
    dbox = Interval.point(exact_delta).hull(Fraction(delta))
    f_value = float(model.value_at_center) + delta
    f_box = dbox.shift(model.value_at_center).hull(Fraction(f_value))
    position = (float(model.center[0]) + float(t), float(model.center[1]))
    return TangencyPoint(
        radius=t, angle_box=RootBox(Interval.point(0), 1, 0.0),
        theta=0.0, position=position, f_value=f_value, f_value_box=f_box,
        on_zero_set=on_zero, delta=delta, delta_box=dbox, chart=1,
        _isolating=None, _section=None)


def circle_slice(tp: TangencyPolynomial, t,
                 box_width: Fraction = _DEFAULT_BOX_WIDTH,
                 value_tol: Fraction = _DEFAULT_VALUE_TOL) -> list[TangencyPoint]:
    """All tangency points on the circle of rational radius t, sorted by angle.

    Raises DegenerateTangencyError when g is identically zero (the caller
    falls back to whole-circle handling) and DegenerateSliceError when the
    zero set of the model contains this particular circle.
    """
    t = Fraction(t)
    if t <= 0:
        raise ValueError("radius must be positive")
    model = tp.model
    if tp.g.is_zero:
        raise DegenerateTangencyError("tangency polynomial is identically zero")

    G = circle_section(tp.g, t, chart=1)
    if G.is_zero:
        raise DegenerateSliceError(t)
    section = _section_value(model, t, chart=1)
    sf_g = squarefree(G)
    # narrow enough that the tangency condition is met to high accuracy at the
    # reported float positions
    gmax = max(abs(c) for c in tp.g.terms.values())
    residual_target = (1 + gmax) * t ** tp.g.total_degree / Fraction(4 * 10 ** 10)
    g_boxes = _isolate_refined(G, sf_g, box_width, residual_target)

    p_boxes: list[RootBox] = []
    sf_p = None
    shared = None
    if model.kind == ABS:
        P = circle_section(model.centered, t, chart=1)
        if P.is_zero:
            raise DegenerateSliceError(t)
        if P.degree >= 1:
            sf_p = squarefree(P)
            p_boxes = _isolate_refined(P, sf_p, box_width)
            shared = poly_gcd(sf_g, sf_p)
            if shared.degree < 1:
                shared = None

    g_flags = [shared is not None and _sign_change_on(shared, box.interval)
               for box in g_boxes]
    remaining = [box for box in p_boxes
                 if shared is None or not _sign_change_on(shared, box.interval)]
    if remaining:
        _disjoin_across(g_boxes, sf_g, remaining, sf_p)

    points: list[TangencyPoint] = []
    for box, on_zero in zip(g_boxes, g_flags):
        points.append(_build_point(model, t, box, 1, sf_g, section,
                                   on_zero, value_tol))
    for box in remaining:
        points.append(_build_point(model, t, box, 1, sf_p, section,
                                   True, value_tol))

    # theta = pi is the point at infinity of the chart: check it exactly
    g_at_pi = tp.g.evaluate((-t, Fraction(0)))
    p_at_pi_zero = (model.kind == ABS
                    and model.centered.evaluate((-t, Fraction(0))) == 0)
    if g_at_pi == 0 or p_at_pi_zero:
        if g_at_pi == 0:
            Gv = circle_section(tp.g, t, chart=-1)
            mult = max(1, _trailing_zero_order(Gv))
        else:
            Pv = circle_section(model.centered, t, chart=-1)
            mult = max(1, _trailing_zero_order(Pv))
        points.append(_exact_pi_point(model, t, p_at_pi_zero, mult))

    points.sort(key=lambda p: p.theta)
    return points
