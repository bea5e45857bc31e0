"""Tracing tangency points across a geometric ladder of shrinking radii.

Points on consecutive circles are matched by nearest angular distance; the
matched chains are the branches of the tangency variety near the center.  The
branch structure is trusted only once the per-circle point count has been
constant over a trailing window of rungs and every chain's value sequence is
monotone (or flat): until then the ladder has not entered the radius range
where the local structure is stable, and the caller should shrink it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .expansion import CONSTANT_TOL, DEFAULT_QMAX, FitResult, SignFlipError, fit
from .tangency import (
    DegenerateSliceError,
    DegenerateTangencyError,
    FunctionModel,
    TangencyPoint,
    TangencyPolynomial,
    axis_sample_point,
    circle_slice,
)

STABLE_WINDOW = 8
AMBIGUITY_TOL = 1e-9


class NonStabilizedError(RuntimeError):
    """Branch structure not stable over the ladder; retry with smaller t0."""


class AmbiguousMatchError(RuntimeError):
    """Two candidate matches are angularly indistinguishable."""


@dataclass(frozen=True)
class RadiusLadder:
    """Geometric radius sequence t_j = t0 * rho**j."""

    t0: Fraction
    rho: Fraction
    count: int

    @property
    def radii(self) -> tuple[Fraction, ...]:
        out = []
        t = self.t0
        for _ in range(self.count):
            out.append(t)
            t = t * self.rho
        return tuple(out)


def build_ladder(t0, rho, count: int) -> RadiusLadder:
    t0 = Fraction(t0)
    rho = Fraction(rho)
    if t0 <= 0:
        raise ValueError("t0 must be positive")
    if not (0 < rho < 1):
        raise ValueError("rho must lie strictly between 0 and 1")
    if count < 1:
        raise ValueError("count must be a positive integer")
    return RadiusLadder(t0, rho, int(count))


@dataclass
class Branch:
    """One connected component of the punctured tangency variety."""

    id: int
    points: list[TangencyPoint]
    deltas: list[float]
    constant: bool
    on_zero_set: bool = False
    fit: FitResult | None = None

    @property
    def f_values(self) -> list[float]:
        return [p.f_value for p in self.points]

    @property
    def theta_start(self) -> float:
        return self.points[0].theta

    @property
    def alpha(self):
        return self.fit.alpha if self.fit else None

    @property
    def a(self):
        return self.fit.a if self.fit else None

    @property
    def a_sign(self) -> int:
        return self.fit.a_sign if self.fit else 0


@dataclass
class Trace:
    """Branches over the stabilized trailing window of a radius ladder."""

    branches: list[Branch]
    ladder: RadiusLadder
    window_start: int
    degenerate: bool
    slices: list[list[TangencyPoint]] = field(repr=False, default_factory=list)

    @property
    def window_radii(self) -> tuple[Fraction, ...]:
        return self.ladder.radii[self.window_start:]

    @property
    def trust_radius(self) -> float:
        return float(self.ladder.radii[-1])


def branch_values(model: FunctionModel, branch: Branch) -> list[float]:
    """f at each rung's point (certified enclosures ride on the points)."""
    return [p.f_value for p in branch.points]


def _ang_dist(a: float, b: float) -> float:
    d = abs(a - b) % (2.0 * math.pi)
    return min(d, 2.0 * math.pi - d)


def _min_gap(thetas: Sequence[float]) -> float:
    n = len(thetas)
    if n <= 1:
        return 2.0 * math.pi
    s = sorted(thetas)
    gaps = [s[i + 1] - s[i] for i in range(n - 1)]
    gaps.append(2.0 * math.pi - (s[-1] - s[0]))
    return min(gaps)


def match_angles(prev: Sequence[float], nxt: Sequence[float],
                 threshold: float) -> list[int]:
    """Greedy nearest-angle matching; returns nxt-index for each prev-index.

    Raises AmbiguousMatchError when the greedy choice is not angularly
    separated from a competing one, and NonStabilizedError when even the best
    available match jumps farther than ``threshold``.
    """
    if len(prev) != len(nxt):
        raise NonStabilizedError("point counts differ between rungs")
    pairs = sorted((_ang_dist(a, b), i, j)
                   for i, a in enumerate(prev) for j, b in enumerate(nxt))
    used_prev: set[int] = set()
    used_next: set[int] = set()
    out = [-1] * len(prev)
    for k, (d, i, j) in enumerate(pairs):
        if i in used_prev or j in used_next:
            continue
        for d2, i2, j2 in pairs[k + 1:]:
            if d2 - d > AMBIGUITY_TOL:
                break
            if i2 in used_prev or j2 in used_next:
                continue
            if (i2 == i) != (j2 == j):
                raise AmbiguousMatchError(
                    f"two matches within {AMBIGUITY_TOL} rad near theta={prev[i]:.6f}")
        if d > threshold:
            raise NonStabilizedError(
                f"matched angular gap {d:.3e} exceeds threshold {threshold:.3e}")
        out[i] = j
        used_prev.add(i)
        used_next.add(j)
    return out


def is_constant_deltas(deltas: Sequence[float], scale: float) -> bool:
    return all(abs(d) <= CONSTANT_TOL * scale for d in deltas)


def _check_monotone(deltas: Sequence[float], scale: float) -> bool:
    """True if flat; raises NonStabilizedError unless strictly monotone.

    ``deltas`` are ordered by decreasing radius, so a stabilized branch decays
    strictly in magnitude with constant sign.
    """
    if is_constant_deltas(deltas, scale):
        return True
    signs = {1 if d > 0 else (-1 if d < 0 else 0) for d in deltas}
    if len(signs) != 1 or 0 in signs:
        raise NonStabilizedError("branch deltas change sign inside the window")
    mags = [abs(d) for d in deltas]
    for a, b in zip(mags, mags[1:]):
        if not a > b:
            raise NonStabilizedError("branch deltas are not strictly monotone")
    return False


def trace(model: FunctionModel, tp: TangencyPolynomial, ladder: RadiusLadder,
          window: int = STABLE_WINDOW) -> Trace:
    """Slice every rung, stabilize the count, and chain points into branches."""
    radii = ladder.radii
    scale = 1.0 + abs(float(model.value_at_center))

    if tp.g.is_zero:
        # f is constant on every circle around the center (radial gradient):
        # one branch, sampled exactly at theta = 0 on each rung
        points = [axis_sample_point(model, t) for t in radii]
        deltas = [p.delta for p in points]
        constant = _check_monotone(deltas, scale)
        branch = Branch(id=1, points=points, deltas=deltas, constant=constant,
                        on_zero_set=all(p.on_zero_set for p in points))
        return Trace(branches=[branch], ladder=ladder, window_start=0,
                     degenerate=True, slices=[[p] for p in points])

    try:
        slices = [circle_slice(tp, t) for t in radii]
    except DegenerateSliceError as exc:
        raise NonStabilizedError(
            f"the zero set contains the circle of radius {exc.radius}; "
            "shrink t0") from exc

    counts = [len(s) for s in slices]
    if counts[-1] == 0:
        raise NonStabilizedError("no tangency points on the smallest circles")
    start = len(counts) - 1
    while start > 0 and counts[start - 1] == counts[-1]:
        start -= 1
    if len(counts) - start < window:
        raise NonStabilizedError(
            f"point count stabilized over only {len(counts) - start} rungs "
            f"(need {window}); counts={counts}")

    window_slices = slices[start:]
    n = counts[-1]
    chains: list[list[TangencyPoint]] = [[p] for p in window_slices[0]]
    for j in range(len(window_slices) - 1):
        prev_pts = [chains[k][-1] for k in range(n)]
        # a branch moves at most (1 - rho) * gap per rung while the nearest
        # wrong partner is a full gap away, so 3/4 of the gap separates them
        # for any rho > 1/4
        threshold = 0.75 * _min_gap([p.theta for p in window_slices[j]])
        assignment = match_angles([p.theta for p in prev_pts],
                                  [p.theta for p in window_slices[j + 1]],
                                  threshold)
        for k in range(n):
            chains[k].append(window_slices[j + 1][assignment[k]])

    branches = []
    for k, chain in enumerate(chains):
        deltas = [p.delta for p in chain]
        constant = _check_monotone(deltas, scale)
        branches.append(Branch(
            id=k + 1, points=chain, deltas=deltas, constant=constant,
            on_zero_set=all(p.on_zero_set for p in chain)))
    return Trace(branches=branches, ladder=ladder, window_start=start,
                 degenerate=False, slices=window_slices)


def fit_trace(tr: Trace, model: FunctionModel, qmax: int = DEFAULT_QMAX) -> Trace:
    """Attach a FitResult to every branch of a trace.

    The certified sign of each non-constant branch comes from refining the
    enclosure of its smallest-rung delta until zero is excluded (or until the
    enclosure is far below the float delta, in which case the sign stays 0
    and the classification will be INCONCLUSIVE).  A branch that looks flat in
    floats is confirmed against the exact enclosure at its largest rung: a
    function can sit strictly between 0 and the float noise floor, and
    flagging it constant would turn into a wrong verdict.
    """
    scale = 1.0 + abs(float(model.value_at_center))
    for branch in tr.branches:
        if branch.constant:
            sign = branch.points[0].refine_delta_sign()
            if sign == 0:
                branch.fit = fit(branch.deltas, tr.ladder, qmax,
                                 const_scale=scale,
                                 delta_enclosure=branch.points[-1].delta_box)
                continue
            # certified nonzero under the float flatness threshold: the
            # floats may still carry a clean power law, so try the fit
            branch.constant = False
            branch.points[-1].refine_delta_sign()
            note = ("branch values sit below the float flatness threshold "
                    "but are certified nonzero")
            try:
                result = fit(branch.deltas, tr.ladder, qmax,
                             const_scale=scale,
                             delta_enclosure=branch.points[-1].delta_box,
                             assume_nonconstant=True)
                branch.fit = FitResult(
                    alpha_raw=result.alpha_raw, alpha=result.alpha,
                    a=result.a, a_sign=result.a_sign,
                    residual=result.residual, constant=False,
                    warnings=result.warnings + (note,))
            except SignFlipError:
                branch.fit = FitResult(
                    alpha_raw=None, alpha=None, a=None, a_sign=sign,
                    residual=0.0, constant=False,
                    warnings=(note + "; the exponent cannot be fitted on "
                              "this ladder",))
            continue
        branch.points[-1].refine_delta_sign()
        branch.fit = fit(branch.deltas, tr.ladder, qmax, const_scale=scale,
                         delta_enclosure=branch.points[-1].delta_box)
    return tr
