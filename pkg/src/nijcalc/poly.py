"""Exact multivariate polynomial arithmetic over rationals.

Polynomials are dictionaries mapping exponent tuples to nonzero Fraction
coefficients.  The zero polynomial is the empty dict, so structural equality
is mathematical equality.  Exponent tuples are dense: every key has length
num_vars, and variables are 1-indexed (x1 .. xN) to match the text grammar.

Also provides vectors of polynomials (polynomial vector fields on a chart)
and their Lie bracket, which everything downstream is built on.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Dict, List, Sequence, Tuple, Union

Exponent = Tuple[int, ...]
Poly = Dict[Exponent, Fraction]
PolyVec = List[Poly]  # vector field: component i is a Poly
Scalar = Union[int, Fraction]


class PolyError(ValueError):
    """Dimension mismatch or malformed polynomial input."""


# ---------------------------------------------------------------------------
# construction
# ---------------------------------------------------------------------------

def zero() -> Poly:
    return {}


def const(c: Scalar, num_vars: int) -> Poly:
    c = Fraction(c)
    if c == 0:
        return {}
    return {(0,) * num_vars: c}


def var(index: int, num_vars: int) -> Poly:
    """The coordinate polynomial x_index, 1-indexed."""
    if not 1 <= index <= num_vars:
        raise PolyError(f"variable index {index} out of range 1..{num_vars}")
    exp = [0] * num_vars
    exp[index - 1] = 1
    return {tuple(exp): Fraction(1)}


def monomial(exponent: Sequence[int], coeff: Scalar) -> Poly:
    c = Fraction(coeff)
    if c == 0:
        return {}
    return {tuple(exponent): c}


# ---------------------------------------------------------------------------
# ring operations
# ---------------------------------------------------------------------------

def _check_compatible(p: Poly, q: Poly) -> None:
    if p and q:
        ep = next(iter(p))
        eq = next(iter(q))
        if len(ep) != len(eq):
            raise PolyError(f"mixed variable counts: {len(ep)} vs {len(eq)}")


def add(p: Poly, q: Poly) -> Poly:
    _check_compatible(p, q)
    out = dict(p)
    for e, c in q.items():
        s = out.get(e, Fraction(0)) + c
        if s:
            out[e] = s
        else:
            out.pop(e, None)
    return out


def neg(p: Poly) -> Poly:
    return {e: -c for e, c in p.items()}


def sub(p: Poly, q: Poly) -> Poly:
    return add(p, neg(q))


def mul(p: Poly, q: Poly) -> Poly:
    _check_compatible(p, q)
    out: Poly = {}
    for e1, c1 in p.items():
        for e2, c2 in q.items():
            e = tuple(a + b for a, b in zip(e1, e2))
            s = out.get(e, Fraction(0)) + c1 * c2
            if s:
                out[e] = s
            else:
                out.pop(e, None)
    return out


def scale(p: Poly, c: Scalar) -> Poly:
    c = Fraction(c)
    if c == 0:
        return {}
    return {e: c * k for e, k in p.items()}


def is_zero(p: Poly) -> bool:
    return not p


def equal(p: Poly, q: Poly) -> bool:
    return p == q


def total_degree(p: Poly) -> int:
    """Degree of the zero polynomial is -1 by convention here."""
    if not p:
        return -1
    return max(sum(e) for e in p)


def truncate(p: Poly, max_degree: int) -> Poly:
    """Drop all terms of total degree > max_degree."""
    return {e: c for e, c in p.items() if sum(e) <= max_degree}


def low_degree_part(p: Poly, degree: int) -> Poly:
    """The homogeneous part of the given total degree."""
    return {e: c for e, c in p.items() if sum(e) == degree}


# ---------------------------------------------------------------------------
# calculus and evaluation
# ---------------------------------------------------------------------------

def diff(p: Poly, var_index: int) -> Poly:
    """Exact partial derivative with respect to x_var_index (1-indexed)."""
    if p:
        n = len(next(iter(p)))
        if not 1 <= var_index <= n:
            raise PolyError(f"variable index {var_index} out of range 1..{n}")
    i = var_index - 1
    out: Poly = {}
    for e, c in p.items():
        if e[i] == 0:
            continue
        new_e = list(e)
        new_e[i] -= 1
        out[tuple(new_e)] = c * e[i]
    return out


def eval_poly(p: Poly, point: Sequence[Scalar]) -> Fraction:
    pt = [Fraction(v) for v in point]
    if p:
        n = len(next(iter(p)))
        if len(pt) != n:
            raise PolyError(f"point has length {len(pt)}, expected {n}")
    total = Fraction(0)
    for e, c in p.items():
        term = c
        for x, k in zip(pt, e):
            if k:
                term *= x ** k
        total += term
    return total


def substitute(p: Poly, replacements: Sequence[Poly], out_num_vars: int) -> Poly:
    """Substitute replacements[i] for variable i+1.  Exact composition.

    The replacements are polynomials in out_num_vars variables.
    """
    if not p:
        return {}
    n = len(next(iter(p)))
    if len(replacements) != n:
        raise PolyError(f"{len(replacements)} replacements for {n} variables")
    out: Poly = {}
    for e, c in p.items():
        term = const(c, out_num_vars)
        for rep, k in zip(replacements, e):
            for _ in range(k):
                term = mul(term, rep)
        out = add(out, term)
    return out


# ---------------------------------------------------------------------------
# polynomial vectors (vector fields in chart coordinates)
# ---------------------------------------------------------------------------

def vec_zero(dim: int) -> PolyVec:
    return [{} for _ in range(dim)]


def vec_from_constant(v: Sequence[Scalar], num_vars: int) -> PolyVec:
    return [const(c, num_vars) for c in v]


def vec_add(u: PolyVec, v: PolyVec) -> PolyVec:
    return [add(a, b) for a, b in zip(u, v)]


def vec_sub(u: PolyVec, v: PolyVec) -> PolyVec:
    return [sub(a, b) for a, b in zip(u, v)]


def vec_scale(u: PolyVec, c: Scalar) -> PolyVec:
    return [scale(a, c) for a in u]


def vec_scale_poly(u: PolyVec, p: Poly) -> PolyVec:
    return [mul(a, p) for a in u]


def vec_eval(u: PolyVec, point: Sequence[Scalar]) -> List[Fraction]:
    return [eval_poly(a, point) for a in u]


def vec_is_zero(u: PolyVec) -> bool:
    return all(not a for a in u)


def lie_bracket(x: PolyVec, y: PolyVec, num_vars: int) -> PolyVec:
    """[X, Y]^i = sum_a X^a dY^i/dx_a - Y^a dX^i/dx_a, exact."""
    out: PolyVec = []
    for i in range(len(y)):
        acc: Poly = {}
        for a in range(num_vars):
            acc = add(acc, mul(x[a], diff(y[i], a + 1)))
            acc = sub(acc, mul(y[a], diff(x[i], a + 1)))
        out.append(acc)
    return out


# ---------------------------------------------------------------------------
# text format: expr := term (('+'|'-') term)*; term := factor ('*' factor)*;
# factor := rational | var | var '^' posint | '(' expr ')' | '-' factor
# ---------------------------------------------------------------------------

def parse_poly(text: str, num_vars: int) -> Poly:
    """Parse the expression grammar above into a canonical Poly.

    Raises PolyError with the character position on bad input.
    """
    parser = _Parser(text, num_vars)
    result = parser.parse_expr()
    parser.skip_ws()
    if parser.pos != len(parser.text):
        raise PolyError(f"unexpected character {text[parser.pos]!r} at position {parser.pos}")
    return result


class _Parser:
    def __init__(self, text: str, num_vars: int):
        self.text = text
        self.num_vars = num_vars
        self.pos = 0

    def skip_ws(self) -> None:
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str:
        self.skip_ws()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def error(self, message: str) -> PolyError:
        return PolyError(f"{message} at position {self.pos}")

    def parse_expr(self) -> Poly:
        result = self.parse_term()
        while True:
            ch = self.peek()
            if ch == "+":
                self.pos += 1
                result = add(result, self.parse_term())
            elif ch == "-":
                self.pos += 1
                result = sub(result, self.parse_term())
            else:
                return result

    def parse_term(self) -> Poly:
        result = self.parse_factor()
        while self.peek() == "*":
            self.pos += 1
            result = mul(result, self.parse_factor())
        return result

    def parse_factor(self) -> Poly:
        ch = self.peek()
        if ch == "-":
            self.pos += 1
            return neg(self.parse_factor())
        if ch == "(":
            self.pos += 1
            inner = self.parse_expr()
            if self.peek() != ")":
                raise self.error("expected ')'")
            self.pos += 1
            return self.maybe_power(inner)
        if ch == "x":
            return self.parse_var()
        if ch.isdigit():
            return self.parse_rational()
        raise self.error(f"expected a factor, found {ch!r}" if ch else "unexpected end of input")

    def maybe_power(self, base: Poly) -> Poly:
        if self.peek() != "^":
            return base
        self.pos += 1
        k = self.parse_int()
        out = const(1, self.num_vars)
        for _ in range(k):
            out = mul(out, base)
        return out

    def parse_var(self) -> Poly:
        self.skip_ws()
        start = self.pos
        self.pos += 1  # consume 'x'
        if self.pos >= len(self.text) or not self.text[self.pos].isdigit():
            self.pos = start
            raise self.error("expected variable index after 'x'")
        index = self.parse_int()
        if not 1 <= index <= self.num_vars:
            self.pos = start
            raise self.error(f"variable x{index} out of range for {self.num_vars} variables")
        return self.maybe_power(var(index, self.num_vars))

    def parse_rational(self) -> Poly:
        numer = self.parse_int()
        self.skip_ws()
        if self.pos < len(self.text) and self.text[self.pos] == "/":
            self.pos += 1
            denom_pos = self.pos
            denom = self.parse_int()
            if denom == 0:
                self.pos = denom_pos
                raise self.error("zero denominator")
            base = const(Fraction(numer, denom), self.num_vars)
        else:
            base = const(numer, self.num_vars)
        return self.maybe_power(base)

    def parse_int(self) -> int:
        self.skip_ws()
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        if self.pos == start:
            raise self.error("expected an integer")
        return int(self.text[start:self.pos])


def format_rational(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def format_poly(p: Poly) -> str:
    """Canonical text form; parse_poly(format_poly(p)) == p."""
    if not p:
        return "0"
    # graded lexicographic, highest degree first, for a stable leading term
    keys = sorted(p, key=lambda e: (sum(e), e), reverse=True)
    pieces: List[str] = []
    for e in keys:
        c = p[e]
        factors = []
        for i, k in enumerate(e):
            if k == 1:
                factors.append(f"x{i + 1}")
            elif k > 1:
                factors.append(f"x{i + 1}^{k}")
        coeff = abs(c)
        if coeff != 1 or not factors:
            factors.insert(0, format_rational(coeff))
        body = "*".join(factors)
        if not pieces:
            pieces.append(body if c > 0 else "-" + body)
        else:
            pieces.append(("+ " if c > 0 else "- ") + body)
    return " ".join(pieces)
