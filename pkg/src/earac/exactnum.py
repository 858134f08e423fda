"""Exact arithmetic in the ring Q[sqrt2, sqrt3].

Every value is c1 + c2*sqrt2 + c3*sqrt3 + c6*sqrt6 with rational
coefficients.  The basis {1, sqrt2, sqrt3, sqrt6} is linearly independent
over Q, so the representation is unique and equality is coefficient-wise.
This ring contains every success probability and every path advantage
2^(-k/2) * 3^(-j/2) that concatenated codes produce.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from decimal import Decimal, localcontext
from fractions import Fraction
from math import isqrt

_Rat = int | Fraction


@dataclass(frozen=True)
class ExactValue:
    c1: Fraction = Fraction(0)
    c2: Fraction = Fraction(0)
    c3: Fraction = Fraction(0)
    c6: Fraction = Fraction(0)

    def __post_init__(self):
        for name in ("c1", "c2", "c3", "c6"):
            v = getattr(self, name)
            if not isinstance(v, Fraction):
                object.__setattr__(self, name, Fraction(v))

    # -- ring operations -------------------------------------------------

    def __add__(self, other: "ExactValue") -> "ExactValue":
        if not isinstance(other, ExactValue):
            return NotImplemented
        return ExactValue(self.c1 + other.c1, self.c2 + other.c2,
                          self.c3 + other.c3, self.c6 + other.c6)

    def __sub__(self, other: "ExactValue") -> "ExactValue":
        if not isinstance(other, ExactValue):
            return NotImplemented
        return ExactValue(self.c1 - other.c1, self.c2 - other.c2,
                          self.c3 - other.c3, self.c6 - other.c6)

    def __neg__(self) -> "ExactValue":
        return ExactValue(-self.c1, -self.c2, -self.c3, -self.c6)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            q = Fraction(other)
            return ExactValue(self.c1 * q, self.c2 * q, self.c3 * q, self.c6 * q)
        if not isinstance(other, ExactValue):
            return NotImplemented
        a1, a2, a3, a6 = self.c1, self.c2, self.c3, self.c6
        b1, b2, b3, b6 = other.c1, other.c2, other.c3, other.c6
        # sqrt2*sqrt3 = sqrt6, sqrt2*sqrt6 = 2*sqrt3, sqrt3*sqrt6 = 3*sqrt2
        return ExactValue(
            a1 * b1 + 2 * a2 * b2 + 3 * a3 * b3 + 6 * a6 * b6,
            a1 * b2 + a2 * b1 + 3 * (a3 * b6 + a6 * b3),
            a1 * b3 + a3 * b1 + 2 * (a2 * b6 + a6 * b2),
            a1 * b6 + a6 * b1 + a2 * b3 + a3 * b2,
        )

    __rmul__ = __mul__

    def scale(self, q: _Rat) -> "ExactValue":
        """Multiply by a rational (the only division the artifact needs)."""
        return self * Fraction(q)

    # -- comparisons ------------------------------------------------------

    def sign(self) -> int:
        """Exact sign, -1/0/+1.

        Zero iff all coefficients are zero (basis independence); otherwise
        adaptive-precision interval refinement terminates.
        """
        if self.c1 == 0 and self.c2 == 0 and self.c3 == 0 and self.c6 == 0:
            return 0
        digits = 20
        while True:
            lo, hi = self.bounds(digits)
            if lo > 0:
                return 1
            if hi < 0:
                return -1
            digits *= 2

    def bounds(self, digits: int) -> tuple[Fraction, Fraction]:
        """Rational lower/upper bounds accurate to ~`digits` decimals."""
        lo = hi = self.c1
        for coef, m in ((self.c2, 2), (self.c3, 3), (self.c6, 6)):
            if coef == 0:
                continue
            slo, shi = _sqrt_bounds(m, digits)
            if coef > 0:
                lo += coef * slo
                hi += coef * shi
            else:
                lo += coef * shi
                hi += coef * slo
        return lo, hi

    def compare(self, other: "ExactValue") -> int:
        if (self.c1, self.c2, self.c3, self.c6) == (other.c1, other.c2, other.c3, other.c6):
            return 0
        return (self - other).sign()

    def __lt__(self, other):
        return self.compare(other) < 0

    def __le__(self, other):
        return self.compare(other) <= 0

    def __gt__(self, other):
        return self.compare(other) > 0

    def __ge__(self, other):
        return self.compare(other) >= 0

    # -- conversion / rendering -------------------------------------------

    def to_decimal(self) -> float:
        lo, hi = self.bounds(40)
        return float((lo + hi) / 2)

    def to_decimal_str(self, digits: int = 20) -> str:
        lo, hi = self.bounds(digits + 10)
        mid = (lo + hi) / 2
        with localcontext() as ctx:
            ctx.prec = digits
            return str(Decimal(mid.numerator) / Decimal(mid.denominator))

    def render(self) -> str:
        parts = []
        for coef, tag in ((self.c1, ""), (self.c2, "sqrt2"),
                          (self.c3, "sqrt3"), (self.c6, "sqrt6")):
            if coef == 0:
                continue
            mag = abs(coef)
            body = str(mag.numerator) if mag.denominator == 1 else f"{mag.numerator}/{mag.denominator}"
            if tag:
                body = f"{body}*{tag}"
            parts.append(("-" if coef < 0 else "+", body))
        if not parts:
            return "0"
        sign, body = parts[0]
        out = ("-" if sign == "-" else "") + body
        for sign, body in parts[1:]:
            out += f" {sign} {body}"
        return out

    def __str__(self):
        return self.render()


def _sqrt_bounds(m: int, digits: int) -> tuple[Fraction, Fraction]:
    scale = 10 ** digits
    s = isqrt(m * scale * scale)
    return Fraction(s, scale), Fraction(s + 1, scale)


ZERO = ExactValue()
ONE = ExactValue(Fraction(1))
HALF = ExactValue(Fraction(1, 2))
SQRT2 = ExactValue(c2=Fraction(1))
SQRT3 = ExactValue(c3=Fraction(1))
SQRT6 = ExactValue(c6=Fraction(1))
# 1/sqrt2 and 1/sqrt3, used when dividing path advantages by root factors
INV_SQRT2 = ExactValue(c2=Fraction(1, 2))
INV_SQRT3 = ExactValue(c3=Fraction(1, 3))


def from_rational(q: _Rat) -> ExactValue:
    return ExactValue(Fraction(q))


def delta(k: int, j: int) -> ExactValue:
    """The path advantage 2^(-k/2) * 3^(-j/2), exactly."""
    if k < 0 or j < 0:
        raise ValueError("exponent counts must be nonnegative")
    base = Fraction(1, 2 ** (k // 2) * 3 ** (j // 2))
    if k % 2 == 0 and j % 2 == 0:
        return ExactValue(c1=base)
    if k % 2 == 1 and j % 2 == 0:
        return ExactValue(c2=base / 2)
    if k % 2 == 0:
        return ExactValue(c3=base / 3)
    return ExactValue(c6=base / 6)


def compare(x: ExactValue, y: ExactValue) -> int:
    return x.compare(y)


def to_decimal(x: ExactValue) -> float:
    return x.to_decimal()


_TERM_RE = re.compile(
    r"^(?:(?P<num>-?\d+)(?:/(?P<den>\d+))?(?:\*sqrt(?P<rad>[236]))?"
    r"|(?P<neg>-?)sqrt(?P<rad2>[236]))$"
)


class ParseError(ValueError):
    pass


def parse(text: str) -> ExactValue:
    """Inverse of render: 'a/b + c/d*sqrt2 + e/f*sqrt3 + g/h*sqrt6'."""
    s = text.strip()
    if not s:
        raise ParseError("empty value")
    if s == "0":
        return ZERO
    # split into signed terms
    s = s.replace(" ", "")
    terms = re.findall(r"[+-]?[^+-]+", s)
    if "".join(terms) != s:
        raise ParseError(f"malformed value: {text!r}")
    coeffs = {None: Fraction(0), "2": Fraction(0), "3": Fraction(0), "6": Fraction(0)}
    for term in terms:
        sign = Fraction(1)
        body = term
        if body[0] in "+-":
            if body[0] == "-":
                sign = Fraction(-1)
            body = body[1:]
        m = _TERM_RE.match(body)
        if not m:
            raise ParseError(f"malformed term {term!r} in {text!r}")
        if m.group("rad2") is not None:
            rad = m.group("rad2")
            coef = Fraction(-1) if m.group("neg") == "-" else Fraction(1)
        else:
            rad = m.group("rad")
            coef = Fraction(int(m.group("num")), int(m.group("den") or 1))
        coeffs[rad] += sign * coef
    return ExactValue(coeffs[None], coeffs["2"], coeffs["3"], coeffs["6"])
