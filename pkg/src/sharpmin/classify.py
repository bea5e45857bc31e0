"""Minimality verdicts from fitted branch expansions.

The center is a local minimizer exactly when no branch decreases (all leading
coefficients nonnegative), and an isolated one exactly when every branch
strictly increases.  For isolated minimizers the largest branch exponent is
the sharp growth order; it also fixes the Lojasiewicz exponent 1 - 1/alpha
and the subregularity order alpha - 1 of the subdifferential.  A branch whose
sign could not be certified makes the verdict INCONCLUSIVE rather than
guessed.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

NOT_LOCAL_MIN = "NOT_LOCAL_MIN"
LOCAL_MIN_NONISOLATED = "LOCAL_MIN_NONISOLATED"
ISOLATED_LOCAL_MIN = "ISOLATED_LOCAL_MIN"
INCONCLUSIVE = "INCONCLUSIVE"

CERTIFICATE_FACTOR = 0.9


@dataclass(frozen=True)
class BranchSummary:
    id: int
    alpha: Fraction | None
    a: float | None
    a_sign: int
    constant: bool


@dataclass(frozen=True)
class ClassificationReport:
    verdict: str
    alpha_star: Fraction | None
    a_star: float | None
    lojasiewicz_exponent: float | None
    subregularity_order: Fraction | None
    certificate: tuple[float, float] | None  # (c, epsilon)
    trust_radius: float
    branch_table: tuple[BranchSummary, ...]
    warnings: tuple[str, ...] = ()


def classify(branches: Sequence, trust_radius: float) -> ClassificationReport:
    """Aggregate fitted branches into a verdict.

    ``branches`` need ``.id``, ``.constant`` and an attached ``.fit``.
    Precedence: one certified negative branch already rules out minimality;
    otherwise any uncertified branch blocks a verdict.
    """
    rows = []
    warnings: list[str] = []
    for b in branches:
        fit = b.fit
        if fit is None:
            raise ValueError(f"branch {b.id} has no fit attached")
        rows.append(BranchSummary(b.id, fit.alpha, fit.a, fit.a_sign,
                                  fit.constant))
        warnings.extend(f"branch {b.id}: {w}" for w in fit.warnings)
    table = tuple(rows)

    def report(verdict, alpha_star=None, a_star=None):
        loja = subreg = cert = None
        if alpha_star is not None:
            loja = 1.0 - 1.0 / float(alpha_star)
            subreg = alpha_star - 1
            cert = (CERTIFICATE_FACTOR * a_star, trust_radius)
        return ClassificationReport(
            verdict=verdict, alpha_star=alpha_star, a_star=a_star,
            lojasiewicz_exponent=loja, subregularity_order=subreg,
            certificate=cert, trust_radius=trust_radius, branch_table=table,
            warnings=tuple(warnings))

    if any(r.a_sign == -1 for r in rows):
        return report(NOT_LOCAL_MIN)
    if any(not r.constant and (r.alpha is None or r.a_sign == 0) for r in rows):
        return report(INCONCLUSIVE)

    moving = [r for r in rows if not r.constant]
    if not moving:
        # every branch sits at the center value: minima on each small circle
        # are attained with equality
        return report(LOCAL_MIN_NONISOLATED)
    if any(r.constant for r in rows):
        return report(LOCAL_MIN_NONISOLATED)

    alpha_star = max(r.alpha for r in moving)
    a_star = min(r.a for r in moving if r.alpha == alpha_star)
    return report(ISOLATED_LOCAL_MIN, alpha_star, a_star)


def sharp_order_test(report: ClassificationReport, alpha) -> bool:
    """Whether the center is a sharp local minimizer of the given order."""
    if report.verdict != ISOLATED_LOCAL_MIN:
        raise ValueError(
            f"sharp order is defined only for {ISOLATED_LOCAL_MIN}, "
            f"verdict is {report.verdict}")
    return Fraction(alpha) >= report.alpha_star
