"""Exact isolation and refinement of real roots of univariate rational polynomials.

Isolation runs entirely in rational arithmetic (Sturm sequences with content
clearing), so no real root is ever silently dropped or invented: tangential
(even-multiplicity) zeros matter downstream and a floating filter could lose
them.  Floats appear only in the ``refined`` approximation of each root box.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .polynomial import Interval


class RealRootError(ValueError):
    pass


class UniPoly:
    """Dense univariate polynomial over the rationals; index = degree."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Sequence):
        cs = [Fraction(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self.coeffs = cs

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def leading(self) -> Fraction:
        if not self.coeffs:
            raise RealRootError("zero polynomial has no leading coefficient")
        return self.coeffs[-1]

    def __eq__(self, other):
        return isinstance(other, UniPoly) and self.coeffs == other.coeffs

    def __call__(self, x) -> Fraction:
        x = Fraction(x)
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def eval_float(self, x: float) -> float:
        acc = 0.0
        for c in reversed(self.coeffs):
            acc = acc * x + float(c)
        return acc

    def eval_interval(self, box: Interval) -> Interval:
        """Enclosure of the polynomial's range over ``box`` (monomial-wise)."""
        total = Interval.point(0)
        for k, c in enumerate(self.coeffs):
            if c != 0:
                total = total + box.power(k).scale(c)
        return total

    def derivative(self) -> "UniPoly":
        return UniPoly([c * k for k, c in enumerate(self.coeffs)][1:])

    def __neg__(self) -> "UniPoly":
        return UniPoly([-c for c in self.coeffs])

    def __mul__(self, other: "UniPoly") -> "UniPoly":
        if self.is_zero or other.is_zero:
            return UniPoly([])
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return UniPoly(out)

    def divmod(self, divisor: "UniPoly"):
        """Exact polynomial long division: returns (quotient, remainder)."""
        if divisor.is_zero:
            raise ZeroDivisionError("division by zero polynomial")
        rem = list(self.coeffs)
        d = divisor.degree
        lead = divisor.leading
        quot = [Fraction(0)] * max(0, len(rem) - d)
        while len(rem) - 1 >= d and any(c != 0 for c in rem):
            while rem and rem[-1] == 0:
                rem.pop()
            if len(rem) - 1 < d:
                break
            k = len(rem) - 1 - d
            factor = rem[-1] / lead
            quot[k] = factor
            for i in range(d + 1):
                rem[k + i] -= factor * divisor.coeffs[i]
            rem.pop()
        return UniPoly(quot), UniPoly(rem)

    def exact_div(self, divisor: "UniPoly") -> "UniPoly":
        q, r = self.divmod(divisor)
        if not r.is_zero:
            raise RealRootError("division is not exact")
        return q

    def primitive(self) -> "UniPoly":
        """Scale by a positive rational so coefficients are coprime integers."""
        if self.is_zero:
            return self
        den = math.lcm(*(c.denominator for c in self.coeffs))
        ints = [int(c * den) for c in self.coeffs]
        g = math.gcd(*(abs(v) for v in ints))
        return UniPoly([Fraction(v, g) for v in ints])

    def monic(self) -> "UniPoly":
        if self.is_zero:
            return self
        lead = self.leading
        return UniPoly([c / lead for c in self.coeffs])

    def __repr__(self):
        return f"UniPoly({[str(c) for c in self.coeffs]})"


@dataclass
class RootBox:
    """Certified isolating interval for one real root."""

    interval: Interval
    multiplicity: int
    refined: float

    @property
    def is_point(self) -> bool:
        return self.interval.lo == self.interval.hi


def poly_gcd(a: UniPoly, b: UniPoly) -> UniPoly:
    """Monic gcd by the Euclidean algorithm, content-cleared at each step."""
    a, b = a.primitive(), b.primitive()
    while not b.is_zero:
        _, r = a.divmod(b)
        a, b = b, r.primitive() if not r.is_zero else r
    if a.is_zero:
        return a
    return a.monic()


def squarefree(u: UniPoly) -> UniPoly:
    """u / gcd(u, u'): same real roots, all simple."""
    if u.is_zero:
        raise RealRootError("zero polynomial")
    if u.degree == 0:
        return UniPoly([1])
    g = poly_gcd(u, u.derivative())
    if g.degree == 0:
        return u.primitive()
    return u.exact_div(g).primitive()


def squarefree_decomposition(u: UniPoly) -> list[tuple[UniPoly, int]]:
    """Yun's algorithm: u = c * prod(a_i ** i) with a_i square-free, coprime."""
    if u.is_zero:
        raise RealRootError("zero polynomial")
    if u.degree == 0:
        return []
    g = poly_gcd(u, u.derivative())
    if g.degree == 0:
        return [(u.primitive(), 1)]
    w = u.exact_div(g)
    y = u.derivative().exact_div(g)
    z = _sub(y, w.derivative())
    out = []
    i = 1
    while w.degree > 0:
        if i > u.degree + 1:
            raise RealRootError("square-free decomposition did not terminate")
        a = poly_gcd(w, z) if not z.is_zero else w.monic()
        if a.degree > 0:
            out.append((a.primitive(), i))
        w = w.exact_div(a)
        y = z.exact_div(a) if not z.is_zero else z
        z = _sub(y, w.derivative())
        i += 1
    return out


def _sub(a: UniPoly, b: UniPoly) -> UniPoly:
    n = max(len(a.coeffs), len(b.coeffs))
    out = [Fraction(0)] * n
    for i, c in enumerate(a.coeffs):
        out[i] += c
    for i, c in enumerate(b.coeffs):
        out[i] -= c
    return UniPoly(out)


def cauchy_bound(u: UniPoly) -> Fraction:
    """Rational bound B with every real root of u strictly inside (-B, B)."""
    if u.is_zero or u.degree == 0:
        return Fraction(1)
    lead = abs(u.leading)
    return 2 + max(abs(c) / lead for c in u.coeffs[:-1])


def sturm_chain(w: UniPoly) -> list[UniPoly]:
    """Sturm sequence of a square-free polynomial, content-cleared per step."""
    chain = [w.primitive()]
    d = w.derivative()
    if d.is_zero:
        return chain
    chain.append(d.primitive())
    while chain[-1].degree > 0:
        _, r = chain[-2].divmod(chain[-1])
        if r.is_zero:
            break
        chain.append((-r).primitive())
    return chain


def sign_variations(chain: list[UniPoly], x: Fraction) -> int:
    signs = []
    for p in chain:
        v = p(x)
        if v != 0:
            signs.append(1 if v > 0 else -1)
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def _nonroot_point(w: UniPoly, lo: Fraction, hi: Fraction) -> Fraction:
    """A point strictly inside (lo, hi), roughly central, where w != 0."""
    mid = (lo + hi) / 2
    if w(mid) != 0:
        return mid
    # w has at most deg(w) roots: some nearby subdivision point is root-free
    denom = w.degree + 2
    for k in range(1, denom):
        candidate = lo + (hi - lo) * Fraction(2 * k + 1, 2 * denom)
        if w(candidate) != 0:
            return candidate
    raise RealRootError("could not find a root-free split point")


def _isolate_squarefree(w: UniPoly, lo: Fraction, hi: Fraction) -> list[Interval]:
    """Disjoint isolating intervals for the roots of square-free w in [lo, hi].

    Endpoint roots come back as point intervals; interior roots as open-style
    intervals whose endpoints are not roots.
    """
    out: list[Interval] = []
    if w(lo) == 0:
        out.append(Interval.point(lo))
        w = w.exact_div(UniPoly([-lo, 1]))
    if hi > lo and w(hi) == 0:
        out.append(Interval.point(hi))
        w = w.exact_div(UniPoly([-hi, 1]))
    if w.degree < 1 or lo == hi:
        return out

    chain = sturm_chain(w)
    cache: dict[Fraction, int] = {}

    def variations(x: Fraction) -> int:
        if x not in cache:
            cache[x] = sign_variations(chain, x)
        return cache[x]

    def recurse(a: Fraction, b: Fraction, count: int):
        if count == 0:
            return
        if count == 1:
            out.append(Interval(a, b))
            return
        m = _nonroot_point(w, a, b)
        left = variations(a) - variations(m)
        recurse(a, m, left)
        recurse(m, b, count - left)

    total = variations(lo) - variations(hi)
    recurse(lo, hi, total)
    return out


def _count_on(w: UniPoly, interval: Interval) -> int:
    """Number of roots of square-free w in the closed interval (internal check)."""
    extra = 0
    if w(interval.lo) == 0:
        extra += 1
        w = w.exact_div(UniPoly([-interval.lo, 1]))
    if interval.hi > interval.lo and w(interval.hi) == 0:
        extra += 1
        w = w.exact_div(UniPoly([-interval.hi, 1]))
    if w.degree < 1:
        return extra
    chain = sturm_chain(w)
    return extra + sign_variations(chain, interval.lo) - sign_variations(chain, interval.hi)


def _bisect_interval(factor: UniPoly, box: Interval) -> Interval:
    """One exact bisection step; collapses to a point if the split hits the root."""
    if box.lo == box.hi:
        return box
    mid = (box.lo + box.hi) / 2
    v = factor(mid)
    if v == 0:
        return Interval.point(mid)
    lo_sign = 1 if factor(box.lo) > 0 else -1
    mid_sign = 1 if v > 0 else -1
    if lo_sign != mid_sign:
        return Interval(box.lo, mid)
    return Interval(mid, box.hi)


def sturm_isolate(u: UniPoly, search: Interval) -> list[RootBox]:
    """Isolate every real root of u in the closed interval ``search``.

    Returns pairwise-disjoint boxes sorted by position.  Multiplicities come
    from the square-free decomposition, so tangential roots are reported with
    their true order rather than dropped.
    """
    if u.is_zero:
        raise RealRootError("zero polynomial")
    if u.degree == 0:
        return []

    factors = squarefree_decomposition(u)
    boxes: list[tuple[Interval, int, UniPoly]] = []
    for factor, mult in factors:
        if factor.degree < 1:
            continue
        for ivl in _isolate_squarefree(factor, search.lo, search.hi):
            boxes.append((ivl, mult, factor))

    # Roots of distinct factors are distinct: shrink until the closed boxes
    # are pairwise disjoint, so no box endpoint is another box's root.
    changed = True
    while changed:
        changed = False
        boxes.sort(key=lambda item: (item[0].lo, item[0].hi))
        for i in range(len(boxes) - 1):
            a, ma, fa = boxes[i]
            b, mb, fb = boxes[i + 1]
            if a.hi >= b.lo:
                boxes[i] = (_bisect_interval(fa, a), ma, fa)
                boxes[i + 1] = (_bisect_interval(fb, b), mb, fb)
                changed = True

    w = squarefree(u)
    assert len(boxes) == _count_on(w, search), \
        "isolated root count disagrees with Sturm count"

    return [RootBox(ivl, mult, float(ivl.mid)) for ivl, mult, _ in boxes]


def refine(u: UniPoly, box: RootBox, width) -> RootBox:
    """Shrink an isolating box below ``width`` by exact-sign bisection."""
    width = Fraction(width)
    w = squarefree(u)
    ivl = box.interval
    if not ivl.lo == ivl.hi:
        if w(ivl.lo) == 0:
            ivl = Interval.point(ivl.lo)
        elif w(ivl.hi) == 0:
            ivl = Interval.point(ivl.hi)
    while ivl.width > width:
        ivl = _bisect_interval(w, ivl)
    return RootBox(ivl, box.multiplicity, float(ivl.mid))
