"""Fitting the leading growth term a * t**alpha of branch value sequences.

The estimator works on successive ratios: for deltas d_j sampled at radii
t_j = t0 * rho**j, the quantity log(d_{j+1}/d_j)/log(rho) converges to the
exponent geometrically fast as t -> 0, which a global log-log regression does
not (the o(t**alpha) tail biases it).  The exponent of a semi-algebraic branch
is a rational number, so the raw estimate is snapped to a nearby fraction
with a small denominator; refusing to snap is reported rather than hidden.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .polynomial import Interval

CONSTANT_TOL = 1e-12
SNAP_TOL = 0.02
DEFAULT_QMAX = 12


class SignFlipError(ValueError):
    """Branch deltas change sign inside the fit window."""


@dataclass(frozen=True)
class FitResult:
    """Leading-term fit of one branch value sequence."""

    alpha_raw: float | None
    alpha: Fraction | None
    a: float | None
    a_sign: int
    residual: float
    constant: bool
    warnings: tuple[str, ...] = ()

    @property
    def certified(self) -> bool:
        """True when the branch can be used for a definite verdict."""
        if self.constant:
            return True
        return self.alpha is not None and self.a_sign != 0


def snap_rational(x: float, qmax: int = DEFAULT_QMAX) -> Fraction:
    """Best rational p/q with q <= qmax; ties go to the smaller denominator."""
    if not math.isfinite(x):
        raise ValueError("cannot snap a non-finite value")
    best = None
    best_err = None
    # ascending q with strict improvement: ties keep the smaller denominator
    for q in range(1, max(1, int(qmax)) + 1):
        p = round(x * q)
        err = abs(x - p / q)
        if best is None or err < best_err:
            best, best_err = Fraction(p, q), err
    return best


def fit(branch_deltas: Sequence[float], ladder, qmax: int = DEFAULT_QMAX,
        const_scale: float = 1.0,
        delta_enclosure: Interval | None = None,
        assume_nonconstant: bool = False) -> FitResult:
    """Fit d_j ~ a * t_j**alpha over the stabilized window.

    ``branch_deltas`` line up with the trailing rungs of ``ladder``.  The
    certified sign comes only from ``delta_enclosure`` (the exact enclosure of
    the smallest-rung delta); without one, or when the enclosure straddles
    zero, the sign stays 0 and a warning is attached.  ``assume_nonconstant``
    skips the flatness shortcut, for callers who already certified that the
    branch is nonzero even though it sits below the float noise threshold.
    """
    deltas = [float(d) for d in branch_deltas]
    n = len(deltas)
    if n < 6:
        raise ValueError(f"need at least 6 rungs to fit, got {n}")
    radii = [float(t) for t in ladder.radii[-n:]]
    warnings: list[str] = []

    if not assume_nonconstant and all(
            abs(d) <= CONSTANT_TOL * const_scale for d in deltas):
        return FitResult(alpha_raw=None, alpha=None, a=None, a_sign=0,
                         residual=0.0, constant=True)

    signs = {1 if d > 0 else (-1 if d < 0 else 0) for d in deltas}
    if len(signs) != 1 or 0 in signs:
        raise SignFlipError("zero or sign-flipping deltas inside the window")
    sign = signs.pop()

    log_rho = math.log(float(ladder.rho))
    ratios = [math.log(abs(deltas[j + 1] / deltas[j])) / log_rho
              for j in range(n - 1)]
    half = max(1, (n - 1) // 2)
    tail = ratios[-half:]
    alpha_raw = sum(tail) / len(tail)

    alpha = snap_rational(alpha_raw, qmax)
    if abs(float(alpha) - alpha_raw) > SNAP_TOL:
        warnings.append(
            f"no rational with denominator <= {qmax} within {SNAP_TOL} of "
            f"{alpha_raw:.6f}; exponent left unsnapped")
        alpha = None
    exponent = float(alpha) if alpha is not None else alpha_raw

    last4 = min(4, n)
    logs = [math.log(abs(deltas[-k])) - exponent * math.log(radii[-k])
            for k in range(1, last4 + 1)]
    a = sign * math.exp(sum(logs) / len(logs))

    residual = 0.0
    for j in range(n - max(half, last4), n):
        model = a * radii[j] ** exponent
        if model == 0.0 or not math.isfinite(model):
            warnings.append("model value under/overflowed inside the window")
            break
        residual = max(residual, abs(deltas[j] - model) / abs(model))

    if delta_enclosure is None:
        a_sign = 0
        warnings.append("no certified enclosure for the smallest-rung delta")
    else:
        a_sign = delta_enclosure.sign()
        if a_sign == 0:
            warnings.append(
                "certified enclosure of the smallest-rung delta straddles zero")
        elif a_sign != sign:
            warnings.append(
                "certified sign disagrees with the float deltas")

    return FitResult(alpha_raw=alpha_raw, alpha=alpha, a=a, a_sign=a_sign,
                     residual=residual, constant=False,
                     warnings=tuple(warnings))
