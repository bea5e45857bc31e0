"""Brute-force ground truth: the minimum of f over circles around the center.

This module deliberately shares no machinery with the tangency pipeline: it
scans a dense angular grid and polishes the best local minima by golden
section.  Agreement between the traced branch minima and these scans is the
main end-to-end cross-check of the analysis.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .branchtrack import RadiusLadder
from .expansion import DEFAULT_QMAX, FitResult, fit
from .tangency import FunctionModel

DEFAULT_GRID = 4096
GOLDEN_TOL = 1e-14
_INVPHI = (math.sqrt(5.0) - 1.0) / 2.0
_REFINE_CANDIDATES = 8


@dataclass(frozen=True)
class PsiSample:
    """Minimum of f on one circle: value, location, and cancellation-free delta."""

    t: float
    psi: float
    argmin_theta: float
    delta: float


def golden_section(func, lo: float, hi: float, tol: float = GOLDEN_TOL):
    """Minimize a unimodal function on [lo, hi]; returns (x, func(x))."""
    x1 = hi - _INVPHI * (hi - lo)
    x2 = lo + _INVPHI * (hi - lo)
    f1, f2 = func(x1), func(x2)
    while hi - lo > tol:
        if f1 <= f2:
            hi, x2, f2 = x2, x1, f1
            x1 = hi - _INVPHI * (hi - lo)
            f1 = func(x1)
        else:
            lo, x1, f1 = x1, x2, f2
            x2 = lo + _INVPHI * (hi - lo)
            f2 = func(x2)
    x = 0.5 * (lo + hi)
    return x, func(x)


def psi(model: FunctionModel, t: float, grid: int = DEFAULT_GRID) -> PsiSample:
    """Scan `grid` equispaced angles, then polish the best local minima."""
    t = float(t)
    if t <= 0:
        raise ValueError("radius must be positive")
    if grid < 8:
        raise ValueError("grid too coarse")
    thetas = 2.0 * math.pi * np.arange(grid) / grid
    deltas = model.delta_on_circle(t, thetas)

    left = np.roll(deltas, 1)
    right = np.roll(deltas, -1)
    is_local_min = (deltas <= left) & (deltas <= right)
    candidates = np.nonzero(is_local_min)[0]
    if candidates.size == 0:
        candidates = np.array([int(np.argmin(deltas))])
    order = np.argsort(deltas[candidates], kind="stable")
    candidates = candidates[order[:_REFINE_CANDIDATES]]

    step = 2.0 * math.pi / grid

    def delta_of(theta: float) -> float:
        return model.delta_at(t * math.cos(theta), t * math.sin(theta))

    best_theta = float(thetas[candidates[0]])
    best_delta = float(deltas[candidates[0]])
    for idx in candidates:
        center = float(thetas[idx])
        theta, d = golden_section(delta_of, center - step, center + step)
        if d < best_delta:
            best_delta, best_theta = d, theta
    best_theta %= 2.0 * math.pi
    return PsiSample(t=t, psi=float(model.value_at_center) + best_delta,
                     argmin_theta=best_theta, delta=best_delta)


def psi_samples(model: FunctionModel, ladder: RadiusLadder,
                grid: int = DEFAULT_GRID) -> list[PsiSample]:
    return [psi(model, float(t), grid) for t in ladder.radii]


def fit_psi(model: FunctionModel, ladder: RadiusLadder,
            grid: int = DEFAULT_GRID, qmax: int = DEFAULT_QMAX) -> FitResult:
    """Fit the growth of psi(t) - f(center) over the ladder."""
    samples = psi_samples(model, ladder, grid)
    scale = 1.0 + abs(float(model.value_at_center))
    return fit([s.delta for s in samples], ladder, qmax, const_scale=scale)
