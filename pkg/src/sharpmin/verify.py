"""Empirical probes of growth, subregularity, and gradient inequalities.

Each probe samples circles of the radius ladder (equispaced angles plus any
supplied tangency angles, where the bounds are tight) and reports the infimum
of a value/bound ratio together with the log-log trend of the per-rung
infima.  A positive, flat trend supports the inequality on the sampled
region; a decaying trend falsifies it.  Probes report evidence, never proofs:
the constants in the inequalities are existential and no sampling can
certify them.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from .branchtrack import RadiusLadder
from .polynomial import Polynomial
from .tangency import FunctionModel, abs_model

GROWTH = "GROWTH"
SUBREG = "SUBREG"
LOJA = "LOJA"
BL = "BL"
DIST_RATIO = "DIST_RATIO"

PROBE_NAMES = (GROWTH, SUBREG, LOJA, BL, DIST_RATIO)
_NEEDS_ALPHA = (GROWTH, SUBREG, LOJA)

DENOM_FLOOR = 1e-300
TREND_WINDOW = 8
DEFAULT_PER_RUNG = 512
_F_FLOOR = 1e-20  # samples this close to the zero set are level-set points


@dataclass(frozen=True)
class InequalityProbe:
    """Sampled evidence for one inequality over the radius ladder."""

    name: str
    alpha: float | None
    samples: tuple[tuple[tuple[float, float], float], ...]  # per-rung witnesses
    inf_ratio: float
    trend_slope: float
    per_rung: tuple[tuple[float, float], ...]  # (t, rung infimum)
    excluded: int


def _trend_slope(per_rung: Sequence[tuple[float, float]],
                 window: int = TREND_WINDOW) -> float:
    pts = [(t, v) for t, v in per_rung if v > 0.0][-window:]
    if len(pts) < 2:
        return float("nan")
    logs_t = np.log([t for t, _ in pts])
    logs_v = np.log([v for _, v in pts])
    return float(np.polyfit(logs_t, logs_v, 1)[0])


def probe(model: FunctionModel, name: str, alpha: float | None,
          ladder: RadiusLadder, per_rung: int = DEFAULT_PER_RUNG,
          extra_angles: Mapping[int, Sequence[float]] | None = None
          ) -> InequalityProbe:
    """Sample one inequality ratio over every rung of the ladder.

    ``extra_angles`` maps rung index to tangency angles to add to the
    equispaced grid.  Samples whose denominator falls below DENOM_FLOOR are
    excluded and counted (the inequalities are stated off those sets).
    """
    if name not in (GROWTH, SUBREG, LOJA, BL):
        raise ValueError(f"unknown probe {name!r}")
    if name in _NEEDS_ALPHA:
        if alpha is None or not alpha > 0:
            raise ValueError(f"{name} probe needs alpha > 0")
        alpha = float(alpha)
    else:
        alpha = None

    cx, cy = float(model.center[0]), float(model.center[1])
    rows: list[tuple[float, float]] = []
    witnesses: list[tuple[tuple[float, float], float]] = []
    excluded = 0
    for j, t in enumerate(ladder.radii):
        tf = float(t)
        thetas = 2.0 * math.pi * np.arange(per_rung) / per_rung
        if extra_angles and j in extra_angles and len(extra_angles[j]):
            thetas = np.concatenate([thetas, np.asarray(extra_angles[j], float)])
        CU = tf * np.cos(thetas)
        CV = tf * np.sin(thetas)
        delta = model.delta_grid(CU, CV)
        if name in (GROWTH, SUBREG):
            # the power of t can underflow for extreme exponents
            den_scalar = tf ** alpha if name == GROWTH else tf ** (alpha - 1.0)
            if not den_scalar >= DENOM_FLOOR:
                excluded += len(thetas)
                continue
        if name == GROWTH:
            ratios = delta / den_scalar
            mask = np.ones_like(ratios, dtype=bool)
        else:
            m = model.slope_grid(CU + cx, CV + cy)
            if name == SUBREG:
                ratios = m / den_scalar
                mask = np.ones_like(ratios, dtype=bool)
            elif name == LOJA:
                den = np.abs(delta) ** (1.0 - 1.0 / alpha)
                mask = den >= DENOM_FLOOR
                ratios = np.where(mask, m / np.where(mask, den, 1.0), np.inf)
            else:  # BL
                den = np.abs(delta)
                mask = den >= DENOM_FLOOR
                ratios = np.where(mask, m * tf / np.where(mask, den, 1.0), np.inf)
        excluded += int((~mask).sum())
        if not mask.any():
            continue
        k = int(np.argmin(np.where(mask, ratios, np.inf)))
        rows.append((tf, float(ratios[k])))
        witnesses.append(((float(CU[k] + cx), float(CV[k] + cy)),
                          float(ratios[k])))

    inf_ratio = min((v for _, v in rows), default=float("inf"))
    return InequalityProbe(
        name=name, alpha=alpha, samples=tuple(witnesses),
        inf_ratio=float(inf_ratio), trend_slope=_trend_slope(rows),
        per_rung=tuple(rows), excluded=excluded)


# -- distance to the zero set ---------------------------------------------------


def _zero_cloud(model: FunctionModel, radii: Sequence[float],
                per_circle: int = 1024) -> np.ndarray:
    """Zero crossings of p on a family of circles (centered coordinates).

    Tangential zeros without a sign change can be missed here; the cloud only
    seeds the projection refinement, which is what produces the distances.
    """
    cx, cy = float(model.center[0]), float(model.center[1])
    pts = []
    thetas = 2.0 * math.pi * np.arange(per_circle) / per_circle
    cos_t, sin_t = np.cos(thetas), np.sin(thetas)
    for s in radii:
        pv = model.body_grid(s * cos_t + cx, s * sin_t + cy)
        sign = np.sign(pv)
        flips = np.nonzero(sign * np.roll(sign, -1) < 0)[0]
        for i in flips:
            lo = thetas[i]
            hi = thetas[i] + 2.0 * math.pi / per_circle
            flo = pv[i]
            for _ in range(50):
                mid = 0.5 * (lo + hi)
                fm = model.body_at(s * math.cos(mid) + cx, s * math.sin(mid) + cy)
                if (flo > 0) != (fm > 0):
                    hi = mid
                else:
                    lo, flo = mid, fm
            th = 0.5 * (lo + hi)
            pts.append((s * math.cos(th), s * math.sin(th)))
        for i in np.nonzero(pv == 0.0)[0]:
            pts.append((s * cos_t[i], s * sin_t[i]))
    if not pts:
        return np.empty((0, 2))
    return np.asarray(pts)


def _grad_p(model: FunctionModel, X: np.ndarray, Y: np.ndarray):
    cx, cy = float(model.center[0]), float(model.center[1])
    return model.gradient_grid(X + cx, Y + cy)


def _p_grid(model: FunctionModel, X: np.ndarray, Y: np.ndarray) -> np.ndarray:
    cx, cy = float(model.center[0]), float(model.center[1])
    return model.body_grid(X + cx, Y + cy)


def zero_set_distances(model: FunctionModel, PX: np.ndarray, PY: np.ndarray,
                       cloud: np.ndarray, iters: int = 90) -> np.ndarray:
    """Distance from centered points to {p = 0} by projection refinement.

    Seeds each query at its nearest cloud point, then alternates a Newton
    projection onto the curve with a tangential slide toward the query.
    """
    if cloud.shape[0] == 0:
        raise ValueError("zero set of p is empty near the center")
    d2 = ((PX[:, None] - cloud[None, :, 0]) ** 2
          + (PY[:, None] - cloud[None, :, 1]) ** 2)
    nearest = np.argmin(d2, axis=1)
    ZX = cloud[nearest, 0].copy()
    ZY = cloud[nearest, 1].copy()
    for _ in range(iters):
        for _ in range(3):
            pv = _p_grid(model, ZX, ZY)
            gx, gy = _grad_p(model, ZX, ZY)
            n2 = gx * gx + gy * gy
            safe = n2 > 0
            step = np.where(safe, pv / np.where(safe, n2, 1.0), 0.0)
            ZX -= step * gx
            ZY -= step * gy
        gx, gy = _grad_p(model, ZX, ZY)
        norm = np.hypot(gx, gy)
        safe = norm > 0
        tx = np.where(safe, -gy / np.where(safe, norm, 1.0), 0.0)
        ty = np.where(safe, gx / np.where(safe, norm, 1.0), 0.0)
        tau = (PX - ZX) * tx + (PY - ZY) * ty
        dist_now = np.hypot(PX - ZX, PY - ZY)
        limit = 2.0 * dist_now + 1e-300
        tau = np.clip(tau, -limit, limit)
        ZX += tau * tx
        ZY += tau * ty
    for _ in range(6):
        pv = _p_grid(model, ZX, ZY)
        gx, gy = _grad_p(model, ZX, ZY)
        n2 = gx * gx + gy * gy
        safe = n2 > 0
        step = np.where(safe, pv / np.where(safe, n2, 1.0), 0.0)
        ZX -= step * gx
        ZY -= step * gy
    return np.hypot(PX - ZX, PY - ZY)


@dataclass(frozen=True)
class CounterexampleProbe:
    """The distance-ratio probe along the vertical path, plus the growth side."""

    ratio: InequalityProbe  # name = DIST_RATIO
    rows: tuple[tuple[float, float, float, float], ...]  # (t, m, dist, ratio)
    quadratic_growth_inf: float
    quadratic_growth_excluded: int


def counterexample_probe(p: Polynomial, ladder: RadiusLadder,
                         center: Sequence = (0, 0),
                         per_rung: int = 256) -> CounterexampleProbe:
    """Probe m_f / dist(., {p=0}) along the path (0, t) for f = |p|.

    Also checks the quadratic growth side f >= c * dist^2 by sampling circles
    of radius <= 1/10 and reporting the infimum of f / dist^2 off the zero
    set.
    """
    model = abs_model(p, center)
    radii_f = [float(t) for t in ladder.radii]
    t_max, t_min = max(radii_f), min(radii_f)
    scan_radii = np.geomspace(t_min / 4.0, 4.0 * t_max, 160)
    cloud = _zero_cloud(model, scan_radii)
    if cloud.shape[0] == 0:
        raise ValueError("zero set of p is empty near the center")

    # path samples (centered coordinates)
    PX = np.zeros(len(radii_f))
    PY = np.asarray(radii_f)
    dists = zero_set_distances(model, PX, PY, cloud)
    cx, cy = float(model.center[0]), float(model.center[1])
    rows = []
    probe_rows = []
    witnesses = []
    excluded = 0
    for tf, d in zip(radii_f, dists):
        m = model.slope_at(cx, cy + tf)
        if d < DENOM_FLOOR:
            excluded += 1
            continue
        ratio = m / d
        rows.append((tf, m, float(d), ratio))
        probe_rows.append((tf, ratio))
        witnesses.append(((cx, cy + tf), ratio))

    ratio_probe = InequalityProbe(
        name=DIST_RATIO, alpha=None, samples=tuple(witnesses),
        inf_ratio=min((r for _, r in probe_rows), default=float("inf")),
        trend_slope=_trend_slope(probe_rows), per_rung=tuple(probe_rows),
        excluded=excluded)

    # quadratic growth side on the ball of radius 1/10
    qx, qy = [], []
    for tf in radii_f:
        if tf > 0.1:
            continue
        thetas = 2.0 * math.pi * np.arange(per_rung) / per_rung
        qx.append(tf * np.cos(thetas))
        qy.append(tf * np.sin(thetas))
    q_inf = float("inf")
    q_excluded = 0
    if qx:
        QX = np.concatenate(qx)
        QY = np.concatenate(qy)
        f_vals = model.delta_grid(QX, QY) + float(model.value_at_center)
        r = np.hypot(QX, QY)
        floor = _F_FLOOR * (1.0 + r) ** max(p.total_degree, 0)
        keep = f_vals > floor
        q_excluded = int((~keep).sum())
        if keep.any():
            qd = zero_set_distances(model, QX[keep], QY[keep], cloud)
            ok = qd >= DENOM_FLOOR
            q_excluded += int((~ok).sum())
            if ok.any():
                q_inf = float(np.min(f_vals[keep][ok] / qd[ok] ** 2))

    return CounterexampleProbe(ratio=ratio_probe, rows=tuple(rows),
                               quadratic_growth_inf=q_inf,
                               quadratic_growth_excluded=q_excluded)
