"""Structure fields: constructors, validation, realization, random generators."""

from fractions import Fraction

import pytest

from nijcalc import poly
from nijcalc.structures import (
    LieAlgebraSpec,
    StructureError,
    StructureField,
    ValidationReport,
    example_structure,
    from_anticommuting_part,
    left_invariant_structure,
    linear_membership_violation,
    linear_nijenhuis_from_free_data,
    random_linear_nijenhuis,
    random_structure,
    realize_nijenhuis,
    standard_matrix,
    standard_structure,
    validate,
    vanishing_order,
)
from nijcalc.tensor import PointTensor


def as_matrix(j):
    return [[j.entry(i, k) for k in range(j.dim)] for i in range(j.dim)]


def test_standard_structure():
    j0 = standard_structure(2)
    assert j0.dim == 4
    # e1 -> e2, e2 -> -e1, e3 -> e4, e4 -> -e3
    assert j0.eval_matrix([0, 0, 0, 0]) == standard_matrix(2)
    rep = validate(j0)
    assert rep == ValidationReport("exact")


def test_standard_structure_rejects_bad_n():
    with pytest.raises(StructureError):
        standard_structure(0)


def test_example_ex2_columns():
    """Column check: J e3 = e4 + x2 e1 and J e4 = -e3 - x2 e2."""
    j = example_structure("ex2")
    x2 = poly.var(2, 4)
    assert j.column(0) == [poly.zero(), poly.const(1, 4), poly.zero(), poly.zero()]
    assert j.column(2) == [x2, poly.zero(), poly.zero(), poly.const(1, 4)]
    assert j.column(3) == [poly.zero(), poly.neg(x2), poly.const(-1, 4), poly.zero()]
    assert validate(j).status == "exact"


def test_example_ex5():
    j1 = example_structure("ex5", eps=1)
    assert validate(j1).status == "exact"
    f = poly.parse_poly("x2^2", 4)
    g = poly.parse_poly("x3^2", 4)
    assert j1.entry(0, 2) == f
    assert j1.entry(1, 2) == g
    assert j1.entry(0, 3) == g
    assert j1.entry(1, 3) == poly.neg(f)
    j0 = example_structure("ex5", eps=0)
    assert poly.is_zero(j0.entry(1, 2))
    assert validate(j0).status == "exact"


def test_example_ex6():
    j = example_structure("ex6", f_text="x5 + x5^2")
    assert j.dim == 6
    assert validate(j).status == "exact"
    f = poly.parse_poly("x5 + x5^2", 6)
    assert j.entry(0, 2) == f
    assert j.entry(1, 3) == poly.neg(f)
    # last complex line untouched
    assert j.entry(5, 4) == poly.const(1, 6)
    with pytest.raises(StructureError):
        example_structure("ex6", f_text="1 + x5")
    with pytest.raises(StructureError):
        example_structure("nope")


def test_validate_reports_order():
    """A^2 with linear A vanishes to order 2; off origin it need not vanish."""
    x1 = poly.var(1, 2)
    a_col = [x1, poly.zero()]
    j = from_anticommuting_part([a_col])
    rep = validate(j)
    assert rep.status == "valid_mod_order_k"
    assert rep.order == 2
    rep2 = validate(j, base_point=[1, 0])
    assert rep2.status == "invalid"
    assert rep2.order == 0
    assert rep2.failing_entry is not None
    # requesting more than the true order fails too
    rep3 = validate(j, order=3)
    assert rep3.status == "invalid"
    assert rep3.order == 2


def test_vanishing_order_shifts_base_point():
    p = poly.parse_poly("x1^2 - 2*x1*x2 + x2^2", 2)  # (x1 - x2)^2
    assert vanishing_order(p, [0, 0], 2) == 2
    assert vanishing_order(p, [1, 1], 2) == 2
    assert vanishing_order(p, [1, 0], 2) == 0
    assert vanishing_order(poly.zero(), [0, 0], 2) is None


def test_apply_to_field():
    j = example_structure("ex2")
    x = [poly.zero(), poly.zero(), poly.var(1, 4), poly.zero()]
    out = j.apply_to_field(x)
    # J (x1 e3) = x1 e4 + x1 x2 e1
    assert out[0] == poly.parse_poly("x1*x2", 4)
    assert out[3] == poly.var(1, 4)
    assert poly.is_zero(out[1]) and poly.is_zero(out[2])


def test_negated_structure():
    j = example_structure("ex2")
    m = j.negated()
    assert validate(m).status == "exact"
    assert m.entry(0, 2) == poly.neg(j.entry(0, 2))


def test_lie_algebra_bracket_and_jacobi():
    g = LieAlgebraSpec(2, {(0, 1): [1, 0]})  # [e1, e2] = e1
    assert g.bracket([1, 0], [0, 1]) == [Fraction(1), Fraction(0)]
    assert g.bracket([0, 1], [1, 0]) == [Fraction(-1), Fraction(0)]
    assert g.bracket([2, 0], [0, 3]) == [Fraction(6), Fraction(0)]
    with pytest.raises(StructureError):
        LieAlgebraSpec(3, {(0, 1): [0, 0, 1], (0, 2): [1, 0, 0]})


def test_left_invariant_structure_values():
    """1. N((e1,0),(e2,0)) = (-e1, e1); 2. N((e1,0),(0,e2)) = (e1, e1);
    3. the block structure squares to -I; 4. antisymmetry."""
    g = LieAlgebraSpec(2, {(0, 1): [1, 0]})
    out = left_invariant_structure(g)
    n = out["nijenhuis_at_identity"]
    e = lambda k: [Fraction(1) if i == k else Fraction(0) for i in range(4)]
    assert n.apply([e(0), e(1)]) == [Fraction(-1), Fraction(0), Fraction(1), Fraction(0)]
    assert n.apply([e(0), e(3)]) == [Fraction(1), Fraction(0), Fraction(1), Fraction(0)]
    assert n.is_antisymmetric_in(0, 1)
    jm = out["j"].to_matrix()
    sq = [[sum(jm[i][k] * jm[k][j] for k in range(4)) for j in range(4)] for i in range(4)]
    assert sq == [[-(i == j) for j in range(4)] for i in range(4)]
    # abelian algebra: everything vanishes
    ab = LieAlgebraSpec(2, {})
    assert left_invariant_structure(ab)["nijenhuis_at_identity"].is_zero()


def test_linear_nijenhuis_from_free_data():
    c = [Fraction(1), Fraction(2), Fraction(3), Fraction(4)]
    n = linear_nijenhuis_from_free_data(2, {(0, 1): c})
    e = lambda k: [Fraction(1) if i == k else Fraction(0) for i in range(4)]
    assert n.apply([e(0), e(2)]) == c
    minus_j0_c = [Fraction(2), Fraction(-1), Fraction(4), Fraction(-3)]
    assert n.apply([e(1), e(2)]) == minus_j0_c
    assert n.apply([e(0), e(3)]) == minus_j0_c
    assert n.apply([e(1), e(3)]) == [-x for x in c]
    assert n.apply([e(0), e(1)]) == [Fraction(0)] * 4
    j0 = PointTensor.from_matrix(standard_matrix(2))
    assert linear_membership_violation(n, j0) is None


def test_random_linear_nijenhuis_membership():
    j0 = {n: PointTensor.from_matrix(standard_matrix(n)) for n in (2, 3)}
    for n in (2, 3):
        for seed in range(5):
            t = random_linear_nijenhuis(n, seed)
            assert t.is_antisymmetric_in(0, 1)
            assert linear_membership_violation(t, j0[n]) is None
    assert random_linear_nijenhuis(2, 7) == random_linear_nijenhuis(2, 7)


def test_realize_nijenhuis_columns():
    c = [Fraction(1), Fraction(2), Fraction(3), Fraction(4)]
    n = linear_nijenhuis_from_free_data(2, {(0, 1): c})
    j = realize_nijenhuis(n)
    assert j.validity_degree == 2
    x2 = poly.var(2, 4)
    # A e3 = x2 * c on top of j0 e3 = e4
    assert j.entry(0, 2) == x2
    assert j.entry(1, 2) == poly.scale(x2, 2)
    assert j.entry(2, 2) == poly.scale(x2, 3)
    assert j.entry(3, 2) == poly.add(poly.const(1, 4), poly.scale(x2, 4))
    # A e4 = -j0 (x2 c): components (2, -1, 4, -3) x2
    assert j.entry(0, 3) == poly.scale(x2, 2)
    assert j.entry(1, 3) == poly.neg(x2)
    rep = validate(j)
    assert rep.status == "valid_mod_order_k" and rep.order == 2


def test_realize_nijenhuis_rejects_bad_input():
    dim = 4
    zero = [Fraction(0)] * dim
    e1 = [Fraction(1), Fraction(0), Fraction(0), Fraction(0)]

    def skew_only(idx):
        if idx == (0, 2):
            return e1
        if idx == (2, 0):
            return [-x for x in e1]
        return list(zero)

    bad = PointTensor.from_function(dim, dim, 2, skew_only)
    with pytest.raises(StructureError, match="antilinearity"):
        realize_nijenhuis(bad)

    def not_skew(idx):
        return e1 if idx == (0, 2) else list(zero)

    with pytest.raises(StructureError, match="antisymmetric"):
        realize_nijenhuis(PointTensor.from_function(dim, dim, 2, not_skew))


def test_random_structure_exact():
    for n in (2, 3):
        for seed in (0, 1, 2, 3, 4):
            j = random_structure(n, seed)
            assert validate(j).status == "exact"
            assert j.max_entry_degree() <= 2
    a = random_structure(2, 11)
    b = random_structure(2, 11)
    assert a == b
