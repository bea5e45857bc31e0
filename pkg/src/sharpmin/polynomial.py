"""Exact sparse multivariate polynomial arithmetic over the rationals.

A polynomial is a map from exponent tuples (one non-negative integer per
variable) to nonzero Fraction coefficients.  All arithmetic is exact; floats
only enter through the dedicated floating evaluators.  Exactness is what makes
the sign decisions downstream (root isolation, branch coefficient signs)
certifiable instead of heuristic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

Rational = Fraction

# Expressions beyond this total degree are rejected at parse time; the tool is
# meant for desk-scale analysis, not bulk computer algebra.
MAX_PARSE_DEGREE = 64


class PolynomialError(ValueError):
    pass


class ParseError(PolynomialError):
    """Syntax or semantic error in a polynomial expression."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


@dataclass(frozen=True)
class Interval:
    """Closed rational interval [lo, hi], used for certified enclosures."""

    lo: Fraction
    hi: Fraction

    def __post_init__(self):
        if self.lo > self.hi:
            raise ValueError(f"empty interval: [{self.lo}, {self.hi}]")

    @staticmethod
    def point(value) -> "Interval":
        v = Fraction(value)
        return Interval(v, v)

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    @property
    def mid(self) -> Fraction:
        return (self.lo + self.hi) / 2

    def contains(self, value) -> bool:
        return self.lo <= value <= self.hi

    def sign(self) -> int:
        """-1 / +1 if the interval excludes zero, else 0."""
        if self.hi < 0:
            return -1
        if self.lo > 0:
            return 1
        return 0

    def __add__(self, other: "Interval") -> "Interval":
        return Interval(self.lo + other.lo, self.hi + other.hi)

    def __sub__(self, other: "Interval") -> "Interval":
        return Interval(self.lo - other.hi, self.hi - other.lo)

    def __neg__(self) -> "Interval":
        return Interval(-self.hi, -self.lo)

    def __mul__(self, other: "Interval") -> "Interval":
        products = (self.lo * other.lo, self.lo * other.hi,
                    self.hi * other.lo, self.hi * other.hi)
        return Interval(min(products), max(products))

    def shift(self, c) -> "Interval":
        c = Fraction(c)
        return Interval(self.lo + c, self.hi + c)

    def scale(self, c) -> "Interval":
        c = Fraction(c)
        if c >= 0:
            return Interval(self.lo * c, self.hi * c)
        return Interval(self.hi * c, self.lo * c)

    def power(self, k: int) -> "Interval":
        if k == 0:
            return Interval.point(1)
        if k % 2 == 1 or self.lo >= 0:
            return Interval(self.lo ** k, self.hi ** k)
        if self.hi <= 0:
            return Interval(self.hi ** k, self.lo ** k)
        # even power over an interval straddling zero
        return Interval(Fraction(0), max(self.lo ** k, self.hi ** k))

    def abs(self) -> "Interval":
        if self.lo >= 0:
            return self
        if self.hi <= 0:
            return Interval(-self.hi, -self.lo)
        return Interval(Fraction(0), max(-self.lo, self.hi))

    def divide_by(self, other: "Interval") -> "Interval":
        """Division by an interval excluding zero."""
        if other.sign() == 0:
            raise ZeroDivisionError("divisor interval contains zero")
        quotients = (self.lo / other.lo, self.lo / other.hi,
                     self.hi / other.lo, self.hi / other.hi)
        return Interval(min(quotients), max(quotients))

    def hull(self, value) -> "Interval":
        v = Fraction(value)
        return Interval(min(self.lo, v), max(self.hi, v))


class Polynomial:
    """Sparse multivariate polynomial with exact rational coefficients.

    ``variables`` is an ordered tuple of names; ``terms`` maps exponent
    tuples to nonzero Fractions.  Instances are treated as immutable:
    every operation returns a new polynomial in canonical form (no stored
    zero coefficients).
    """

    __slots__ = ("variables", "terms")

    def __init__(self, variables: Sequence[str], terms: Mapping[tuple, object] | None = None):
        object.__setattr__(self, "variables", tuple(variables))
        n = len(self.variables)
        canonical = {}
        for exps, coeff in (terms or {}).items():
            exps = tuple(int(e) for e in exps)
            if len(exps) != n:
                raise PolynomialError(
                    f"exponent tuple {exps} does not match {n} variables")
            if any(e < 0 for e in exps):
                raise PolynomialError(f"negative exponent in {exps}")
            c = Fraction(coeff)
            if c != 0:
                canonical[exps] = canonical.get(exps, Fraction(0)) + c
        object.__setattr__(self, "terms",
                           {e: c for e, c in canonical.items() if c != 0})

    def __setattr__(self, name, value):
        raise AttributeError("Polynomial is immutable")

    # -- constructors -------------------------------------------------------

    @classmethod
    def zero(cls, variables: Sequence[str]) -> "Polynomial":
        return cls(variables, {})

    @classmethod
    def constant(cls, variables: Sequence[str], value) -> "Polynomial":
        n = len(variables)
        return cls(variables, {(0,) * n: Fraction(value)})

    @classmethod
    def variable(cls, variables: Sequence[str], name: str) -> "Polynomial":
        variables = tuple(variables)
        if name not in variables:
            raise PolynomialError(f"unknown variable {name!r}")
        exps = tuple(1 if v == name else 0 for v in variables)
        return cls(variables, {exps: Fraction(1)})

    # -- basic queries -------------------------------------------------------

    @property
    def is_zero(self) -> bool:
        return not self.terms

    @property
    def total_degree(self) -> int:
        """Max total degree over terms; -1 for the zero polynomial."""
        if not self.terms:
            return -1
        return max(sum(e) for e in self.terms)

    def coefficient(self, exps: tuple) -> Fraction:
        return self.terms.get(tuple(exps), Fraction(0))

    def constant_term(self) -> Fraction:
        return self.terms.get((0,) * len(self.variables), Fraction(0))

    def __eq__(self, other) -> bool:
        return (isinstance(other, Polynomial)
                and self.variables == other.variables
                and self.terms == other.terms)

    def __hash__(self):
        return hash((self.variables, frozenset(self.terms.items())))

    # -- ring operations -----------------------------------------------------

    def _check_same_ring(self, other: "Polynomial"):
        if self.variables != other.variables:
            raise PolynomialError(
                f"variable lists differ: {self.variables} vs {other.variables}")

    def __add__(self, other: "Polynomial") -> "Polynomial":
        self._check_same_ring(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = out.get(e, Fraction(0)) + c
        return Polynomial(self.variables, out)

    def __sub__(self, other: "Polynomial") -> "Polynomial":
        self._check_same_ring(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = out.get(e, Fraction(0)) - c
        return Polynomial(self.variables, out)

    def __neg__(self) -> "Polynomial":
        return Polynomial(self.variables, {e: -c for e, c in self.terms.items()})

    def __mul__(self, other: "Polynomial") -> "Polynomial":
        self._check_same_ring(other)
        out: dict = {}
        for ea, ca in self.terms.items():
            for eb, cb in other.terms.items():
                key = tuple(i + j for i, j in zip(ea, eb))
                out[key] = out.get(key, Fraction(0)) + ca * cb
        return Polynomial(self.variables, out)

    def scale(self, c) -> "Polynomial":
        c = Fraction(c)
        return Polynomial(self.variables, {e: k * c for e, k in self.terms.items()})

    # -- calculus / substitution ---------------------------------------------

    def partial(self, var: str) -> "Polynomial":
        """Exact formal partial derivative with respect to ``var``."""
        if var not in self.variables:
            raise PolynomialError(f"unknown variable {var!r}")
        idx = self.variables.index(var)
        out: dict = {}
        for exps, coeff in self.terms.items():
            e = exps[idx]
            if e == 0:
                continue
            new = list(exps)
            new[idx] = e - 1
            out[tuple(new)] = coeff * e
        return Polynomial(self.variables, out)

    def shift(self, center: Sequence) -> "Polynomial":
        """Return q with q(u) = self(u + center), expanded exactly."""
        center = [Fraction(c) for c in center]
        if len(center) != len(self.variables):
            raise PolynomialError(
                f"center has {len(center)} entries for {len(self.variables)} variables")
        result = self
        for idx, c in enumerate(center):
            if c != 0:
                result = result._shift_one(idx, c)
        return result

    def _shift_one(self, idx: int, c: Fraction) -> "Polynomial":
        out: dict = {}
        for exps, coeff in self.terms.items():
            e = exps[idx]
            powers = [c ** (e - k) * math.comb(e, k) for k in range(e + 1)]
            for k in range(e + 1):
                new = list(exps)
                new[idx] = k
                key = tuple(new)
                out[key] = out.get(key, Fraction(0)) + coeff * powers[k]
        return Polynomial(self.variables, out)

    # -- evaluation ----------------------------------------------------------

    def evaluate(self, point: Sequence) -> Fraction:
        """Exact value at a rational point."""
        point = [Fraction(p) for p in point]
        if len(point) != len(self.variables):
            raise PolynomialError(
                f"point has {len(point)} entries for {len(self.variables)} variables")
        # cache powers per variable so each is computed once
        caches: list[dict] = [{0: Fraction(1)} for _ in point]
        total = Fraction(0)
        for exps, coeff in self.terms.items():
            prod = coeff
            for i, e in enumerate(exps):
                cache = caches[i]
                if e not in cache:
                    cache[e] = point[i] ** e
                prod *= cache[e]
            total += prod
        return total

    def evaluate_float(self, point: Sequence[float]) -> float:
        """Floating evaluation (standard double rounding)."""
        if len(point) != len(self.variables):
            raise PolynomialError(
                f"point has {len(point)} entries for {len(self.variables)} variables")
        point = [float(p) for p in point]
        caches: list[dict] = [{0: 1.0} for _ in point]
        total = 0.0
        for exps, coeff in self.terms.items():
            prod = float(coeff)
            for i, e in enumerate(exps):
                cache = caches[i]
                if e not in cache:
                    cache[e] = point[i] ** e
                prod *= cache[e]
            total += prod
        return total

    # -- printing ------------------------------------------------------------

    def _sorted_terms(self):
        return sorted(self.terms.items(),
                      key=lambda item: (-sum(item[0]), tuple(-e for e in item[0])))

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for exps, coeff in self._sorted_terms():
            factors = []
            for name, e in zip(self.variables, exps):
                if e == 1:
                    factors.append(name)
                elif e > 1:
                    factors.append(f"{name}^{e}")
            mag = abs(coeff)
            if not factors:
                body = str(mag)
            elif mag == 1:
                body = "*".join(factors)
            else:
                body = "*".join([str(mag)] + factors)
            if not parts:
                parts.append(body if coeff > 0 else f"-{body}")
            else:
                parts.append(f"+ {body}" if coeff > 0 else f"- {body}")
        return " ".join(parts)

    def __repr__(self) -> str:
        return f"Polynomial({list(self.variables)}, {self})"


# -- parser -------------------------------------------------------------------
#
# Grammar (documented interface; whitespace ignored):
#   expr   := ['-'] term (('+'|'-') term)*
#   term   := factor ('*' factor)*
#   factor := base ('^' uint)?
#   base   := number | var | '(' expr ')'
# A number is an integer, a decimal fraction (converted exactly, 0.5 -> 1/2),
# or a rational literal p/q.  Unary minus is allowed only at the head of an
# expression, which includes the position just after '('.


class _Parser:
    def __init__(self, text: str, variables: Sequence[str]):
        self.text = text
        self.variables = tuple(variables)
        self.pos = 0

    def error(self, message: str):
        raise ParseError(message, self.pos)

    def skip_ws(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str:
        self.skip_ws()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def expect(self, ch: str):
        if self.peek() != ch:
            self.error(f"expected {ch!r}")
        self.pos += 1

    def parse(self) -> Polynomial:
        result = self.parse_expr()
        if self.peek():
            self.error(f"unexpected {self.peek()!r}")
        degree = result.total_degree
        if degree > MAX_PARSE_DEGREE:
            raise ParseError(
                f"total degree {degree} exceeds the supported maximum {MAX_PARSE_DEGREE}", 0)
        return result

    def parse_expr(self) -> Polynomial:
        negate = False
        if self.peek() == "-":
            self.pos += 1
            negate = True
        result = self.parse_term()
        if negate:
            result = -result
        while True:
            op = self.peek()
            if op == "+":
                self.pos += 1
                result = result + self.parse_term()
            elif op == "-":
                self.pos += 1
                result = result - self.parse_term()
            else:
                return result

    def parse_term(self) -> Polynomial:
        result = self.parse_factor()
        while self.peek() == "*":
            self.pos += 1
            result = result * self.parse_factor()
        return result

    def parse_factor(self) -> Polynomial:
        base = self.parse_base()
        if self.peek() != "^":
            return base
        self.pos += 1
        exp_pos = self.pos
        ch = self.peek()
        if ch == "-":
            raise ParseError("negative exponent not allowed", exp_pos)
        if not ch.isdigit():
            raise ParseError("exponent must be an unsigned integer", exp_pos)
        number, kind = self.read_number()
        if kind != "int":
            raise ParseError("fractional exponent not allowed", exp_pos)
        e = int(number)
        if e > MAX_PARSE_DEGREE:
            raise ParseError(
                f"exponent {e} exceeds the supported maximum {MAX_PARSE_DEGREE}", exp_pos)
        result = Polynomial.constant(self.variables, 1)
        for _ in range(e):
            result = result * base
        return result

    def parse_base(self) -> Polynomial:
        ch = self.peek()
        if ch == "(":
            self.pos += 1
            inner = self.parse_expr()
            self.expect(")")
            return inner
        if ch.isdigit() or ch == ".":
            value, _ = self.read_number()
            return Polynomial.constant(self.variables, value)
        if ch.isalpha() or ch == "_":
            name = self.read_name()
            if name not in self.variables:
                raise ParseError(f"unknown variable {name!r}",
                                 self.pos - len(name))
            return Polynomial.variable(self.variables, name)
        if ch == "":
            self.error("unexpected end of expression")
        self.error(f"unexpected {ch!r}")

    def read_name(self) -> str:
        self.skip_ws()
        start = self.pos
        while self.pos < len(self.text) and (self.text[self.pos].isalnum()
                                             or self.text[self.pos] == "_"):
            self.pos += 1
        return self.text[start:self.pos]

    def read_number(self):
        """Return (Fraction value, 'int'|'frac')."""
        self.skip_ws()
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        if self.pos < len(self.text) and self.text[self.pos] == ".":
            self.pos += 1
            dec_start = self.pos
            while self.pos < len(self.text) and self.text[self.pos].isdigit():
                self.pos += 1
            if self.pos == dec_start and start == self.pos - 1:
                raise ParseError("malformed number", start)
            return Fraction(self.text[start:self.pos]), "frac"
        if start == self.pos:
            raise ParseError("expected a number", start)
        if self.pos < len(self.text) and self.text[self.pos] == "/":
            save = self.pos
            self.pos += 1
            den_start = self.pos
            while self.pos < len(self.text) and self.text[self.pos].isdigit():
                self.pos += 1
            if self.pos == den_start:
                self.pos = save
                return Fraction(self.text[start:save]), "int"
            den = int(self.text[den_start:self.pos])
            if den == 0:
                raise ParseError("zero denominator", den_start)
            return Fraction(int(self.text[start:save]), den), "frac"
        return Fraction(self.text[start:self.pos]), "int"


def parse(text: str, variables: Sequence[str]) -> Polynomial:
    """Parse an expression into a canonical Polynomial.

    Decimal constants are converted exactly (0.5 -> 1/2); rational literals
    p/q are accepted so printed polynomials re-parse to themselves.
    """
    return _Parser(text, variables).parse()


def parse_rational(text: str) -> Fraction:
    """Parse a rational literal: '3', '-1/2', or '0.25' (exact)."""
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise ParseError(f"invalid rational literal {text!r}: {exc}", 0) from None
