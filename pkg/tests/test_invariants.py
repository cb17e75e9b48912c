"""Torsion tensors, the arity-4 invariant, the linear space, identities."""

import itertools
from fractions import Fraction

import pytest

from nijcalc import poly
from nijcalc.invariants import (
    InternalInconsistencyError,
    basis_vec,
    compatibility_nijenhuis,
    dj_field,
    first_differential_antilinearity_defect,
    higher_nijenhuis,
    higher_nijenhuis_bracket,
    higher_nijenhuis_differential,
    nijenhuis_differential,
    nijenhuis_field_bracket,
    nijenhuis_field_first_differential,
    nijenhuis_space_basis,
    nijenhuis_tensor,
    second_differential_identity_defect,
    standard_point_structure,
    structure_as_field,
)
from nijcalc.structures import (
    example_structure,
    linear_membership_violation,
    linear_nijenhuis_from_free_data,
    random_linear_nijenhuis,
    random_structure,
    realize_nijenhuis,
    standard_structure,
)
from nijcalc.tensor import kernel_dim

E = lambda dim, k: [Fraction(1) if i == k else Fraction(0) for i in range(dim)]

POINTS4 = ([0, 0, 0, 0], [0, 1, 0, 0], [Fraction(1, 2), -2, 3, Fraction(1, 3)])


def test_standard_structure_is_torsion_free():
    j0 = standard_structure(2)
    n = nijenhuis_tensor(j0, [0, 0, 0, 0])
    assert n.is_zero()
    assert higher_nijenhuis(j0, [1, 2, 3, 4]).is_zero()


def test_ex2_table():
    """The six table values, as polynomial identities over sample points."""
    j = example_structure("ex2")
    for pt in POINTS4:
        n = nijenhuis_tensor(j, pt)
        e = lambda k: E(4, k)
        x2 = Fraction(pt[1])
        assert n.apply([e(0), e(1)]) == [0, 0, 0, 0]
        assert n.apply([e(2), e(3)]) == [x2, 0, 0, 0]
        assert n.apply([e(0), e(2)]) == [1, 0, 0, 0]
        assert n.apply([e(1), e(3)]) == [-1, 0, 0, 0]
        assert n.apply([e(1), e(2)]) == [0, -1, 0, 0]
        assert n.apply([e(0), e(3)]) == [0, -1, 0, 0]


def test_ex2_field_entries():
    nf = nijenhuis_field_bracket(example_structure("ex2"))
    assert nf.entries[(2, 3)] == [poly.var(2, 4), poly.zero(), poly.zero(), poly.zero()]
    assert nf.entries[(0, 2)] == [poly.const(1, 4), poly.zero(), poly.zero(), poly.zero()]
    # route two agrees as polynomials, not just at points
    nf9 = nijenhuis_field_first_differential(example_structure("ex2"))
    for idx in nf.entries:
        assert nf.entries[idx] == nf9.entries[idx]


def test_ex2_higher_values():
    """1. value on (e1, e3, e3, e4) is -e1; 2. the j e3 contraction vanishes;
    both checked through the cross-checking entry point at several points."""
    j = example_structure("ex2")
    for pt in POINTS4:
        t = higher_nijenhuis(j, pt)
        e = lambda k: E(4, k)
        assert t.apply([e(0), e(2), e(2), e(3)]) == [-1, 0, 0, 0]
        je3 = [Fraction(pt[1]), Fraction(0), Fraction(0), Fraction(1)]
        assert t.apply([e(0), e(2), je3, e(3)]) == [0, 0, 0, 0]
        assert t.has_pair_pattern()


def test_higher_routes_disagreement_detection():
    """Truncating one route must trip the cross-check, not pass silently."""
    j = example_structure("ex2")
    a = higher_nijenhuis_bracket(j, [0, 1, 0, 0])
    b = higher_nijenhuis_differential(j, [0, 1, 0, 0])
    assert a == b
    bad = b.scale(Fraction(2))
    assert bad != a  # the invariant is nonzero here, so scaling changes it


def test_dual_route_cross_check_on_examples():
    for j in (example_structure("ex5", eps=1), example_structure("ex6"),
              example_structure("ex6", f_text="x5 + x5^2")):
        pt = [0] * j.dim
        nijenhuis_tensor(j, pt)
        higher_nijenhuis(j, pt)


def test_ex6_table():
    """Nonzero pairs are (e3, e5) type with derivative coefficients."""
    j = example_structure("ex6", f_text="x5 + x5^2")
    for pt in ([0] * 6, [0, 0, 0, 0, Fraction(1, 2), 0]):
        n = nijenhuis_tensor(j, pt)
        e = lambda k: E(6, k)
        fprime = 1 + 2 * Fraction(pt[4])
        assert n.apply([e(2), e(4)]) == [0, fprime, 0, 0, 0, 0]
        assert n.apply([e(3), e(5)]) == [0, -fprime, 0, 0, 0, 0]
        assert n.apply([e(2), e(5)]) == [fprime, 0, 0, 0, 0, 0]
        assert n.apply([e(3), e(4)]) == [fprime, 0, 0, 0, 0, 0]
        assert n.apply([e(2), e(3)]) == [0] * 6
        assert n.apply([e(4), e(5)]) == [0] * 6
        for k in range(6):
            assert n.apply([e(0), e(k)]) == [0] * 6
            assert n.apply([e(1), e(k)]) == [0] * 6


def test_identities_on_random_structures():
    """1. dj antilinearity; 2. the second-differential identity;
    3. pointwise membership of the torsion in the linear space;
    4. sign rules under j -> -j; 5. kernel dimension is j-invariant."""
    for n, seed in ((2, 3), (2, 8), (3, 5)):
        j = random_structure(n, seed)
        pt = [Fraction(k + 1, 3) for k in range(j.dim)]
        assert first_differential_antilinearity_defect(j, pt) is None
        assert second_differential_identity_defect(j, pt) is None
        n_pt = nijenhuis_tensor(j, pt)
        j_pt = j.at_point(pt)
        assert linear_membership_violation(n_pt, j_pt) is None
        m = j.negated()
        assert nijenhuis_tensor(m, pt) == n_pt
        t = higher_nijenhuis(j, pt)
        assert higher_nijenhuis(m, pt) == t.scale(Fraction(-1))
        for k in range(j.dim):
            xi = basis_vec(j.dim, k)
            jxi = j_pt.apply([xi])
            assert kernel_dim(n_pt, xi) == kernel_dim(n_pt, jxi)


def test_space_basis_dimensions():
    assert len(nijenhuis_space_basis(1)) == 0
    assert len(nijenhuis_space_basis(2)) == 4
    assert len(nijenhuis_space_basis(3)) == 18


def test_space_basis_membership_and_span():
    """Every solver basis element satisfies the relations, and the span equals
    the span of the direct free-data construction."""
    for n in (2, 3):
        dim = 2 * n
        j0 = standard_point_structure(n)
        basis = nijenhuis_space_basis(n)
        for t in basis:
            assert t.is_antisymmetric_in(0, 1)
            assert linear_membership_violation(t, j0) is None

        def flatten(t):
            return [x for idx in sorted(t.entries) for x in t.entries[idx]]

        direct = []
        for s in range(n):
            for tt in range(s + 1, n):
                for i in range(dim):
                    c = [Fraction(1) if k == i else Fraction(0) for k in range(dim)]
                    direct.append(linear_nijenhuis_from_free_data(n, {(s, tt): c}))
        from nijcalc.linalg import span_basis
        assert span_basis([flatten(t) for t in basis]) == \
            span_basis([flatten(t) for t in direct])


def test_realize_round_trip():
    for n, seed in ((2, 0), (2, 1), (2, 2), (3, 0), (3, 1)):
        target = random_linear_nijenhuis(n, seed)
        j = realize_nijenhuis(target)
        got = nijenhuis_tensor(j, [0] * 2 * n)
        assert got == target


def test_realized_structure_membership_of_random_space_element():
    t = random_linear_nijenhuis(2, 9)
    j0 = standard_point_structure(2)
    assert linear_membership_violation(t, j0) is None


def test_compatibility_is_deformation_linear_part():
    """Exact decomposition: torsion of j0 + A equals the compatibility
    expression plus the part quadratic in A, namely
    [AX, AY] - A[AX, Y] - A[X, AY] on constant basis fields."""
    j = example_structure("ex2")
    j0 = standard_structure(2)
    delta = [[poly.sub(j.cols[a][i], j0.cols[a][i]) for i in range(4)]
             for a in range(4)]
    compat = compatibility_nijenhuis(j0.cols, delta, 4)
    full = nijenhuis_field_bracket(j)

    def dmul(x):
        out = poly.vec_zero(4)
        for k in range(4):
            if not poly.is_zero(x[k]):
                out = poly.vec_add(out, poly.vec_scale_poly(delta[k], x[k]))
        return out

    for a in range(4):
        for b in range(4):
            ea = [poly.const(1, 4) if i == a else poly.zero() for i in range(4)]
            eb = [poly.const(1, 4) if i == b else poly.zero() for i in range(4)]
            quad = poly.lie_bracket(delta[a], delta[b], 4)
            quad = poly.vec_sub(quad, dmul(poly.lie_bracket(delta[a], eb, 4)))
            quad = poly.vec_sub(quad, dmul(poly.lie_bracket(ea, delta[b], 4)))
            assert full.entries[(a, b)] == poly.vec_add(compat.entries[(a, b)], quad)


def test_compatibility_congruence_for_second_order_deformation():
    """For A of second order the quadratic remainder has order at least
    three, so torsion and compatibility expression agree to degree 2."""
    j = example_structure("ex5", eps=0)
    j0 = standard_structure(2)
    delta = [[poly.sub(j.cols[a][i], j0.cols[a][i]) for i in range(4)]
             for a in range(4)]
    compat = compatibility_nijenhuis(j0.cols, delta, 4)
    full = nijenhuis_field_bracket(j)
    for idx in full.entries:
        lhs = [poly.truncate(p, 2) for p in full.entries[idx]]
        rhs = [poly.truncate(p, 2) for p in compat.entries[idx]]
        assert lhs == rhs


def test_nijenhuis_differential():
    j = example_structure("ex2")
    d1 = nijenhuis_differential(j, 1, [0, 0, 0, 0])
    e = lambda k: E(4, k)
    # N(e3, e4) = x2 e1, so its derivative in direction e2 is e1
    assert d1.apply([e(2), e(3), e(1)]) == [1, 0, 0, 0]
    assert d1.apply([e(2), e(3), e(0)]) == [0, 0, 0, 0]
    # derivative slots of a second differential commute
    jf = structure_as_field(example_structure("ex5", eps=1))
    d2 = jf.differential(2, [0, 0, 0, 0])
    assert d2.is_symmetric_in(1, 2)


def test_dj_field_values():
    j = example_structure("ex2")
    dj = dj_field(j).at_point([0, 0, 0, 0])
    e = lambda k: E(4, k)
    # only x2 appears, in column 3: dj(e3, e2) = e1
    assert dj.apply([e(2), e(1)]) == [1, 0, 0, 0]
    assert dj.apply([e(3), e(1)]) == [0, -1, 0, 0]
    assert dj.apply([e(2), e(0)]) == [0, 0, 0, 0]
