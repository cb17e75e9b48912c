"""Exact arithmetic in a real quadratic extension Q(sqrt(d)).

Used where eigenvalues of exact rational maps are irrational but live in a
degree-2 extension (the invariant-line computation of the 4D frame).  Every
element is a + b*sqrt(d) with a, b rational and d a fixed positive rational
that is not a perfect square.  Sign tests are exact, so ordering decisions
never touch floating point.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Union

Rationalish = Union[int, Fraction]


def _is_square(f: Fraction) -> bool:
    if f < 0:
        return False
    rn = math.isqrt(f.numerator)
    rd = math.isqrt(f.denominator)
    return rn * rn == f.numerator and rd * rd == f.denominator


def sqrt_exact(f: Rationalish) -> Union[Fraction, "QuadExt"]:
    """Exact square root of a nonnegative rational.

    Returns a Fraction when f is a perfect square, else a QuadExt over d = f.
    """
    f = Fraction(f)
    if f < 0:
        raise ValueError("negative radicand")
    if _is_square(f):
        return Fraction(math.isqrt(f.numerator), math.isqrt(f.denominator))
    return QuadExt(0, 1, f)


class QuadExt:
    """a + b*sqrt(d), immutable, with exact field arithmetic."""

    __slots__ = ("a", "b", "d")

    def __init__(self, a: Rationalish, b: Rationalish, d: Rationalish):
        self.a = Fraction(a)
        self.b = Fraction(b)
        self.d = Fraction(d)
        if self.d <= 0 or _is_square(self.d):
            raise ValueError(f"d = {self.d} must be positive and not a perfect square")

    # -- helpers ------------------------------------------------------------

    def _coerce(self, other) -> "QuadExt":
        if isinstance(other, QuadExt):
            if other.d != self.d:
                raise ValueError(f"mixed extensions sqrt({self.d}) vs sqrt({other.d})")
            return other
        return QuadExt(Fraction(other), 0, self.d)

    def is_rational(self) -> bool:
        return self.b == 0

    def as_fraction(self) -> Fraction:
        if self.b != 0:
            raise ValueError("not rational")
        return self.a

    def conjugate(self) -> "QuadExt":
        return QuadExt(self.a, -self.b, self.d)

    # -- arithmetic ----------------------------------------------------------

    def __add__(self, other):
        o = self._coerce(other)
        return QuadExt(self.a + o.a, self.b + o.b, self.d)

    __radd__ = __add__

    def __neg__(self):
        return QuadExt(-self.a, -self.b, self.d)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        o = self._coerce(other)
        return QuadExt(
            self.a * o.a + self.b * o.b * self.d,
            self.a * o.b + self.b * o.a,
            self.d,
        )

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        norm = o.a * o.a - o.b * o.b * self.d
        if norm == 0:
            raise ZeroDivisionError("division by zero in Q(sqrt(d))")
        return self * QuadExt(o.a / norm, -o.b / norm, self.d)

    def __rtruediv__(self, other):
        return self._coerce(other) / self

    # -- comparisons ----------------------------------------------------------

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.b == 0 and self.a == other
        if isinstance(other, QuadExt):
            return self.d == other.d and self.a == other.a and self.b == other.b
        return NotImplemented

    def __hash__(self):
        if self.b == 0:
            return hash(self.a)
        return hash((self.a, self.b, self.d))

    def __bool__(self):
        return self.a != 0 or self.b != 0

    def sign(self) -> int:
        """Exact sign of a + b*sqrt(d) with d > 0."""
        a, b = self.a, self.b
        if b == 0:
            return -1 if a < 0 else (1 if a > 0 else 0)
        if a == 0:
            return 1 if b > 0 else -1
        if a > 0 and b > 0:
            return 1
        if a < 0 and b < 0:
            return -1
        # opposite signs: compare a^2 against b^2 d
        lhs = a * a
        rhs = b * b * self.d
        if a > 0:  # b < 0
            return 1 if lhs > rhs else (-1 if lhs < rhs else 0)
        return 1 if lhs < rhs else (-1 if lhs > rhs else 0)

    def __lt__(self, other):
        return (self - self._coerce(other)).sign() < 0

    def __le__(self, other):
        return (self - self._coerce(other)).sign() <= 0

    def __gt__(self, other):
        return (self - self._coerce(other)).sign() > 0

    def __ge__(self, other):
        return (self - self._coerce(other)).sign() >= 0

    def __repr__(self):
        return f"QuadExt({self.a}, {self.b}, sqrt({self.d}))"

    def __str__(self):
        if self.b == 0:
            return str(self.a)
        if self.a == 0:
            return f"{self.b}*sqrt({self.d})"
        op = "+" if self.b > 0 else "-"
        return f"{self.a} {op} {abs(self.b)}*sqrt({self.d})"
