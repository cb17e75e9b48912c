"""Polynomial ring basics: arithmetic, calculus, parsing, formatting."""

from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from nijcalc import poly


def p(text, n=4):
    return poly.parse_poly(text, n)


def test_zero_is_empty_dict():
    assert poly.zero() == {}
    assert poly.const(0, 3) == {}
    assert poly.is_zero(poly.sub(p("x1"), p("x1")))


def test_product_of_variables():
    # 1) x1 * x1 = x1^2
    assert poly.mul(p("x1"), p("x1")) == p("x1^2")
    # 2) additive identity
    assert poly.add(p("x2^2"), poly.zero()) == p("x2^2")
    # 3) difference of squares
    assert poly.mul(p("x1+x2"), p("x1-x2")) == p("x1^2-x2^2")


def test_mixed_num_vars_rejected():
    with pytest.raises(poly.PolyError):
        poly.add(poly.var(1, 2), poly.var(1, 4))


def test_diff_power_rule():
    assert poly.diff(p("x2^2"), 2) == p("2*x2")
    assert poly.diff(poly.const(5, 4), 1) == {}
    # f = x5 + eps*x5^2 with eps = 1/3
    f = poly.parse_poly("x5 + 1/3*x5^2", 6)
    assert poly.diff(f, 5) == poly.parse_poly("1 + 2/3*x5", 6)


def test_eval_exact():
    assert poly.eval_poly(p("x2^2"), [0, 3, 0, 0]) == 9
    assert poly.eval_poly(p("x1*x2"), [0, 0, 0, 0]) == 0
    assert poly.eval_poly(p("x2"), [0, Fraction(1, 2), 0, 0]) == Fraction(1, 2)


def test_parse_examples():
    assert p("x2^2") == {(0, 2, 0, 0): Fraction(1)}
    assert p("-1") == {(0, 0, 0, 0): Fraction(-1)}
    manual = poly.add(
        poly.monomial((1, 0, 1, 0), Fraction(1, 2)),
        poly.monomial((0, 1, 0, 0), Fraction(-1)),
    )
    assert p("1/2*x1*x3 - x2") == manual


def test_parse_errors_have_positions():
    with pytest.raises(poly.PolyError, match="position"):
        p("x1 +")
    with pytest.raises(poly.PolyError, match="x9"):
        p("x9")
    with pytest.raises(poly.PolyError):
        p("x1 ** 2")
    with pytest.raises(poly.PolyError):
        p("1/0")


def test_parse_parentheses_and_powers():
    assert p("(x1+x2)^2") == p("x1^2 + 2*x1*x2 + x2^2")
    assert p("-(x1 - 2)*x3") == p("2*x3 - x1*x3")
    assert p("2^3") == poly.const(8, 4)


def test_substitute_composes():
    # p(x1,x2) = x1^2 + x2 with x1 <- y1+y2, x2 <- y1*y2 (in 2 ambient vars)
    q = poly.parse_poly("x1^2 + x2", 2)
    reps = [poly.parse_poly("x1+x2", 2), poly.parse_poly("x1*x2", 2)]
    assert poly.substitute(q, reps, 2) == poly.parse_poly("x1^2 + 2*x1*x2 + x2^2 + x1*x2", 2)


def test_truncate_and_degree():
    q = p("1 + x1 + x1*x2 + x3^3")
    assert poly.total_degree(q) == 3
    assert poly.truncate(q, 1) == p("1 + x1")
    assert poly.low_degree_part(q, 2) == p("x1*x2")
    assert poly.total_degree(poly.zero()) == -1


small_coeff = st.integers(min_value=-4, max_value=4)


@st.composite
def polys(draw, num_vars=3, max_terms=4, max_exp=2):
    terms = draw(st.lists(
        st.tuples(
            st.tuples(*[st.integers(0, max_exp) for _ in range(num_vars)]),
            small_coeff,
        ),
        max_size=max_terms,
    ))
    out = {}
    for e, c in terms:
        if c:
            out[e] = out.get(e, Fraction(0)) + Fraction(c)
    return {e: c for e, c in out.items() if c}


@given(polys(), polys(), polys())
def test_ring_axioms(a, b, c):
    assert poly.add(a, b) == poly.add(b, a)
    assert poly.mul(a, b) == poly.mul(b, a)
    assert poly.mul(a, poly.add(b, c)) == poly.add(poly.mul(a, b), poly.mul(a, c))
    assert poly.mul(poly.mul(a, b), c) == poly.mul(a, poly.mul(b, c))


@given(polys(), polys())
def test_eval_is_ring_homomorphism(a, b):
    pt = [Fraction(1, 2), Fraction(-2), Fraction(3)]
    assert poly.eval_poly(poly.mul(a, b), pt) == poly.eval_poly(a, pt) * poly.eval_poly(b, pt)
    assert poly.eval_poly(poly.add(a, b), pt) == poly.eval_poly(a, pt) + poly.eval_poly(b, pt)


@given(polys())
def test_mixed_partials_commute(a):
    d12 = poly.diff(poly.diff(a, 1), 2)
    d21 = poly.diff(poly.diff(a, 2), 1)
    assert d12 == d21


@given(polys())
def test_parse_of_format_roundtrips(a):
    assert poly.parse_poly(poly.format_poly(a), 3) == a


def test_lie_bracket_basic():
    # [d1, x1*d2] = d2
    n = 2
    x = [poly.const(1, n), poly.zero()]
    y = [poly.zero(), poly.var(1, n)]
    assert poly.lie_bracket(x, y, n) == [poly.zero(), poly.const(1, n)]
    # antisymmetry on a random pair
    u = [poly.parse_poly("x1*x2", n), poly.parse_poly("x2^2", n)]
    v = [poly.parse_poly("x1+x2", n), poly.parse_poly("x1", n)]
    lhs = poly.lie_bracket(u, v, n)
    rhs = poly.vec_scale(poly.lie_bracket(v, u, n), -1)
    assert lhs == rhs
