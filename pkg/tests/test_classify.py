from fractions import Fraction

import pytest

from sharpmin.branchtrack import Branch
from sharpmin.classify import (
    INCONCLUSIVE,
    ISOLATED_LOCAL_MIN,
    LOCAL_MIN_NONISOLATED,
    NOT_LOCAL_MIN,
    classify,
    sharp_order_test,
)
from sharpmin.expansion import FitResult


def branch(bid, alpha=None, a=None, sign=0, constant=False, warnings=()):
    fit = FitResult(alpha_raw=float(alpha) if alpha is not None else None,
                    alpha=Fraction(alpha) if alpha is not None else None,
                    a=a, a_sign=sign, residual=0.0, constant=constant,
                    warnings=tuple(warnings))
    return Branch(id=bid, points=[], deltas=[], constant=constant, fit=fit)


def test_not_local_min_cubic_example():
    branches = [branch(1, 3, -2.0, -1), branch(2, 3, 2.0, 1),
                branch(3, 2, 3.0, 1), branch(4, 2, 3.0, 1)]
    rep = classify(branches, 1e-7)
    assert rep.verdict == NOT_LOCAL_MIN
    assert rep.alpha_star is None
    assert rep.certificate is None


def test_nonisolated_example():
    branches = [branch(1, constant=True), branch(2, constant=True),
                branch(3, 2, 1.0, 1), branch(4, 2, 1.0, 1)]
    rep = classify(branches, 1e-7)
    assert rep.verdict == LOCAL_MIN_NONISOLATED
    assert rep.alpha_star is None


def test_isolated_example():
    branches = [branch(1, 4, 1.0, 1), branch(2, 4, 1.0, 1),
                branch(3, 2, 2.0, 1), branch(4, 2, 2.0, 1)]
    rep = classify(branches, 1e-7)
    assert rep.verdict == ISOLATED_LOCAL_MIN
    assert rep.alpha_star == Fraction(4)
    assert rep.a_star == pytest.approx(1.0)
    assert rep.lojasiewicz_exponent == pytest.approx(0.75)
    assert rep.subregularity_order == Fraction(3)
    c, eps = rep.certificate
    assert c == pytest.approx(0.9)
    assert eps == 1e-7


def test_negative_branch_beats_uncertified():
    branches = [branch(1, 3, -2.0, -1), branch(2, 3, 1.0, 0)]
    assert classify(branches, 1e-7).verdict == NOT_LOCAL_MIN


def test_uncertified_branch_inconclusive():
    branches = [branch(1, 2, 1.0, 1), branch(2, 2, 1.0, 0)]
    assert classify(branches, 1e-7).verdict == INCONCLUSIVE
    branches = [branch(1, 2, 1.0, 1), branch(2, None, 1.0, 1)]
    assert classify(branches, 1e-7).verdict == INCONCLUSIVE


def test_all_constant_is_nonisolated():
    branches = [branch(1, constant=True)]
    assert classify(branches, 1e-7).verdict == LOCAL_MIN_NONISOLATED


def test_sign_flip_sanity():
    ups = [branch(1, 2, 1.0, 1), branch(2, 2, 1.0, 1)]
    downs = [branch(1, 2, -1.0, -1), branch(2, 2, -1.0, -1)]
    assert classify(ups, 1e-7).verdict == ISOLATED_LOCAL_MIN
    assert classify(downs, 1e-7).verdict == NOT_LOCAL_MIN


def test_scale_invariance_of_summary():
    base = [branch(1, 4, 1.0, 1), branch(2, 2, 2.0, 1)]
    scaled = [branch(1, 4, 3.0, 1), branch(2, 2, 6.0, 1)]
    r1 = classify(base, 1e-7)
    r2 = classify(scaled, 1e-7)
    assert r1.verdict == r2.verdict == ISOLATED_LOCAL_MIN
    assert r1.alpha_star == r2.alpha_star
    assert r2.a_star == pytest.approx(3.0 * r1.a_star)


def test_lojasiewicz_exponent_below_one():
    for alpha in [Fraction(1, 2), Fraction(2), Fraction(17, 3), Fraction(64)]:
        rep = classify([branch(1, alpha, 1.0, 1)], 1e-7)
        assert rep.verdict == ISOLATED_LOCAL_MIN
        assert 0.0 <= rep.lojasiewicz_exponent < 1.0 or alpha < 1


def test_sharp_order_test():
    rep = classify([branch(1, 4, 1.0, 1), branch(2, 2, 2.0, 1)], 1e-7)
    assert sharp_order_test(rep, 4)
    assert sharp_order_test(rep, Fraction(9, 2))
    assert not sharp_order_test(rep, 2)
    assert sharp_order_test(rep, rep.alpha_star)


def test_sharp_order_test_wrong_verdict():
    rep = classify([branch(1, 3, -1.0, -1)], 1e-7)
    with pytest.raises(ValueError):
        sharp_order_test(rep, 4)


def test_branch_warnings_propagate():
    b = branch(1, 2, 1.0, 0, warnings=("enclosure straddles zero",))
    rep = classify([b], 1e-7)
    assert rep.verdict == INCONCLUSIVE
    assert any("straddles" in w for w in rep.warnings)
