"""Almost complex structure fields on a chart and their construction.

A StructureField is a 2n x 2n matrix of polynomials in the chart
coordinates x1..x2n; column j is the image of the basis field e_{j+1}.
The defining identity J^2 = -I either holds exactly or all entries of
J^2 + I vanish to a declared order at a base point (validity_degree),
which is exactly what the jet-level computations need.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple, Union

from . import linalg, poly
from .poly import Poly, PolyVec
from .tensor import PointTensor

Validity = Union[str, int]  # "exact" or an integer order


class StructureError(ValueError):
    """Malformed or invalid structure input."""


class StructureField:
    """Polynomial matrix field J(x) with J(x)^2 = -I (exactly or to order)."""

    def __init__(self, cols: List[PolyVec], name: str = "",
                 validity_degree: Validity = "exact"):
        dim = len(cols)
        if dim % 2 != 0 or dim == 0:
            raise StructureError(f"dimension {dim} is not a positive even number")
        for c in cols:
            if len(c) != dim:
                raise StructureError("matrix is not square")
        self.dim = dim
        self.cols = cols
        self.name = name
        self.validity_degree = validity_degree

    # column j (0-based) = J e_{j+1}
    def column(self, j: int) -> PolyVec:
        return self.cols[j]

    def entry(self, i: int, j: int) -> Poly:
        return self.cols[j][i]

    def apply_to_field(self, x: PolyVec) -> PolyVec:
        """J X for a polynomial vector field X, exact."""
        out = poly.vec_zero(self.dim)
        for j in range(self.dim):
            if poly.is_zero(x[j]):
                continue
            out = poly.vec_add(out, poly.vec_scale_poly(self.cols[j], x[j]))
        return out

    def eval_matrix(self, point: Sequence) -> List[List[Fraction]]:
        return [[poly.eval_poly(self.cols[j][i], point) for j in range(self.dim)]
                for i in range(self.dim)]

    def at_point(self, point: Sequence) -> PointTensor:
        return PointTensor.from_matrix(self.eval_matrix(point))

    def negated(self) -> "StructureField":
        cols = [[poly.neg(p) for p in col] for col in self.cols]
        name = f"-({self.name})" if self.name else ""
        return StructureField(cols, name=name, validity_degree=self.validity_degree)

    def square_plus_identity(self) -> List[List[Poly]]:
        """Entries of J^2 + I as polynomials, [i][j]."""
        n = self.dim
        out = [[poly.zero() for _ in range(n)] for _ in range(n)]
        for j in range(n):
            jj_col = self.apply_to_field(self.cols[j])  # J (J e_j)
            for i in range(n):
                e = jj_col[i]
                if i == j:
                    e = poly.add(e, poly.const(1, n))
                out[i][j] = e
        return out

    def max_entry_degree(self) -> int:
        return max((poly.total_degree(p) for col in self.cols for p in col), default=-1)

    def __eq__(self, other):
        if not isinstance(other, StructureField):
            return NotImplemented
        return self.dim == other.dim and self.cols == other.cols

    __hash__ = None


@dataclass(frozen=True)
class ValidationReport:
    status: str                  # "exact" | "valid_mod_order_k" | "invalid"
    order: Optional[int] = None  # vanishing order of J^2 + I at the base point
    failing_entry: Optional[Tuple[int, int]] = None


def vanishing_order(p: Poly, point: Sequence, num_vars: int) -> Optional[int]:
    """Order of vanishing of p at the point (None for the zero polynomial)."""
    if poly.is_zero(p):
        return None
    shifted = poly.substitute(
        p,
        [poly.add(poly.var(i + 1, num_vars), poly.const(point[i], num_vars))
         for i in range(num_vars)],
        num_vars,
    )
    return min(sum(e) for e in shifted)


def validate(j: StructureField, base_point: Optional[Sequence] = None,
             order: Optional[int] = None) -> ValidationReport:
    """Check J^2 = -I exactly, or modulo the requested vanishing order."""
    pt = list(base_point) if base_point is not None else [Fraction(0)] * j.dim
    err = j.square_plus_identity()
    worst: Optional[int] = None
    worst_entry = None
    for i in range(j.dim):
        for k in range(j.dim):
            o = vanishing_order(err[i][k], pt, j.dim)
            if o is None:
                continue
            if worst is None or o < worst:
                worst = o
                worst_entry = (i, k)
    if worst is None:
        return ValidationReport("exact")
    if worst == 0:
        return ValidationReport("invalid", order=0, failing_entry=worst_entry)
    if order is not None and worst < order:
        return ValidationReport("invalid", order=worst, failing_entry=worst_entry)
    return ValidationReport("valid_mod_order_k", order=worst)


# ---------------------------------------------------------------------------
# constructions
# ---------------------------------------------------------------------------

def standard_matrix(n: int) -> List[List[Fraction]]:
    m = [[Fraction(0)] * (2 * n) for _ in range(2 * n)]
    for r in range(n):
        m[2 * r + 1][2 * r] = Fraction(1)
        m[2 * r][2 * r + 1] = Fraction(-1)
    return m


def standard_structure(n: int) -> StructureField:
    """j0: e_{2r-1} -> e_{2r}, e_{2r} -> -e_{2r-1}, constant coefficients."""
    if n < 1:
        raise StructureError("n must be at least 1")
    dim = 2 * n
    m = standard_matrix(n)
    cols = [[poly.const(m[i][j], dim) for i in range(dim)] for j in range(dim)]
    return StructureField(cols, name=f"standard j0 on R^{dim}")


def standard_apply(v: Sequence[Fraction]) -> List[Fraction]:
    """j0 applied to a constant vector (dimension inferred)."""
    out = [Fraction(0)] * len(v)
    for r in range(len(v) // 2):
        out[2 * r + 1] = Fraction(v[2 * r])
        out[2 * r] = -Fraction(v[2 * r + 1])
    return out


def from_anticommuting_part(a_odd_cols: List[PolyVec], name: str = "",
                            validity_degree: Validity = "exact") -> StructureField:
    """J = j0 + A from the odd columns of A; even columns forced to -j0 A e_odd.

    a_odd_cols[t] is the column A e_{2t+1}.  The even-column relation is the
    unique one making A anticommute with j0, so J^2 + I = A^2.
    """
    n = len(a_odd_cols)
    dim = 2 * n
    m0 = standard_matrix(n)
    cols: List[PolyVec] = []
    for t in range(n):
        odd = a_odd_cols[t]
        if len(odd) != dim:
            raise StructureError("column length mismatch")
        # -j0 applied to the odd column, entrywise on polynomial coefficients
        even: PolyVec = [poly.zero() for _ in range(dim)]
        for r in range(n):
            even[2 * r] = odd[2 * r + 1]
            even[2 * r + 1] = poly.neg(odd[2 * r])
        col_odd = [poly.add(poly.const(m0[i][2 * t], dim), odd[i]) for i in range(dim)]
        col_even = [poly.add(poly.const(m0[i][2 * t + 1], dim), even[i]) for i in range(dim)]
        cols.append(col_odd)
        cols.append(col_even)
    # interleave: we appended odd, even per t in order, which is already 0..dim-1
    return StructureField(cols, name=name, validity_degree=validity_degree)


def example_structure(which: str, eps: Union[int, Fraction] = 0,
                      f_text: str = "x5") -> StructureField:
    """Bundled example structures: ex2, ex5(eps), ex6(f-text)."""
    if which == "ex2":
        a_col = [poly.var(2, 4), poly.zero(), poly.zero(), poly.zero()]
        zero_col = poly.vec_zero(4)
        return from_anticommuting_part([zero_col, a_col], name="ex2")
    if which == "ex5":
        eps = Fraction(eps)
        f = poly.parse_poly("x2^2", 4)
        g = poly.scale(poly.parse_poly("x3^2", 4), eps)
        a_col = [f, g, poly.zero(), poly.zero()]
        zero_col = poly.vec_zero(4)
        return from_anticommuting_part([zero_col, a_col], name=f"ex5(eps={eps})")
    if which == "ex6":
        f = poly.parse_poly(f_text, 6)
        if poly.eval_poly(f, [0] * 6) != 0:
            raise StructureError("ex6 needs f(0) = 0 so that a(0) = 0")
        a_col = [f, poly.zero(), poly.zero(), poly.zero(), poly.zero(), poly.zero()]
        zero_col = poly.vec_zero(6)
        return from_anticommuting_part([zero_col, a_col, zero_col],
                                       name=f"ex6(f={f_text})")
    raise StructureError(f"unknown example {which!r}")


# ---------------------------------------------------------------------------
# Nijenhuis-data realization
# ---------------------------------------------------------------------------

def linear_membership_violation(n_tensor: PointTensor,
                                j_map: PointTensor) -> Optional[Tuple]:
    """First index pair where N(j a, b) = N(a, j b) = -j N(a, b) fails, or None."""
    dim = n_tensor.dim_in
    jm = j_map.to_matrix()
    for a in range(dim):
        for b in range(dim):
            ea = [Fraction(1) if i == a else Fraction(0) for i in range(dim)]
            eb = [Fraction(1) if i == b else Fraction(0) for i in range(dim)]
            ja = [jm[i][a] for i in range(dim)]
            jb = [jm[i][b] for i in range(dim)]
            base = n_tensor.apply([ea, eb])
            minus_j_base = [-x for x in linalg.mat_vec(jm, base)]
            if n_tensor.apply([ja, eb]) != minus_j_base:
                return (a, b, "N(j a, b)")
            if n_tensor.apply([ea, jb]) != minus_j_base:
                return (a, b, "N(a, j b)")
    return None


def realize_nijenhuis(n_tensor: PointTensor) -> StructureField:
    """A structure J with J(0) = j0 and Nijenhuis tensor at 0 equal to the input.

    Input must be antisymmetric and satisfy the antilinearity relations for
    the standard structure.  The output has linear coefficients and
    J^2 + I vanishing to order 2 at 0, which pins the full 1-jet of J and
    hence the Nijenhuis tensor at the origin.
    """
    dim = n_tensor.dim_in
    if dim % 2 != 0 or n_tensor.dim_out != dim or n_tensor.arity != 2:
        raise StructureError("need an arity-2 tensor on an even-dimensional space")
    if not n_tensor.is_antisymmetric_in(0, 1):
        raise StructureError("tensor is not antisymmetric")
    n = dim // 2
    viol = linear_membership_violation(n_tensor, PointTensor.from_matrix(standard_matrix(n)))
    if viol is not None:
        raise StructureError(f"antilinearity fails at basis pair {viol[:2]} ({viol[2]})")
    # free data: c_{s,t} = N(e_{2s-1}, e_{2t-1}) for s < t; odd columns of A
    # get a_{2t} = sum_{s<t} c_{s,t} x^{2s}, even columns follow by
    # anticommutation with j0.
    a_odd_cols: List[PolyVec] = []
    for t in range(n):
        col = poly.vec_zero(dim)
        for s in range(t):
            c = n_tensor.entries[(2 * s, 2 * t)]
            exp = tuple(1 if k == 2 * s + 1 else 0 for k in range(dim))
            col = poly.vec_add(col, [poly.monomial(exp, ci) for ci in c])
        a_odd_cols.append(col)
    return from_anticommuting_part(a_odd_cols, name="realized", validity_degree=2)


# ---------------------------------------------------------------------------
# Lie algebra data and the doubled-group tensor
# ---------------------------------------------------------------------------

class LieAlgebraSpec:
    """Structure constants c^k_{ij} for a real Lie algebra, exact."""

    def __init__(self, dim: int, constants: Dict[Tuple[int, int], Sequence]):
        """constants[(i, j)] for i < j is the vector [e_i, e_j], 0-based."""
        self.dim = dim
        self.table: Dict[Tuple[int, int], List[Fraction]] = {}
        zero = [Fraction(0)] * dim
        for i in range(dim):
            for j in range(dim):
                if i == j:
                    continue
                if (i, j) in constants:
                    v = [Fraction(x) for x in constants[(i, j)]]
                elif (j, i) in constants:
                    v = [-Fraction(x) for x in constants[(j, i)]]
                else:
                    v = list(zero)
                self.table[(i, j)] = v
        jac = self.jacobi_violation()
        if jac is not None:
            raise StructureError(f"Jacobi identity fails on basis triple {jac}")

    def bracket(self, x: Sequence, y: Sequence) -> List[Fraction]:
        out = [Fraction(0)] * self.dim
        for i in range(self.dim):
            if x[i] == 0:
                continue
            for j in range(self.dim):
                if y[j] == 0 or i == j:
                    continue
                c = self.table[(i, j)]
                f = Fraction(x[i]) * Fraction(y[j])
                for k in range(self.dim):
                    if c[k]:
                        out[k] += f * c[k]
        return out

    def jacobi_violation(self) -> Optional[Tuple[int, int, int]]:
        basis = [[Fraction(1) if i == k else Fraction(0) for i in range(self.dim)]
                 for k in range(self.dim)]
        for a, b, c in itertools.combinations(range(self.dim), 3):
            total = [Fraction(0)] * self.dim
            for x, y, z in ((a, b, c), (b, c, a), (c, a, b)):
                inner = self.bracket(basis[y], basis[z])
                total = linalg.vec_add(total, self.bracket(basis[x], inner))
            if not linalg.vec_is_zero(total):
                return (a, b, c)
        return None


def doubled_block_j(n: int) -> PointTensor:
    """j(xi, eta) = (-eta, xi) on R^n + R^n in block coordinates."""
    dim = 2 * n
    m = [[Fraction(0)] * dim for _ in range(dim)]
    for i in range(n):
        m[i][n + i] = Fraction(-1)
        m[n + i][i] = Fraction(1)
    return PointTensor.from_matrix(m)


def left_invariant_structure(g: LieAlgebraSpec) -> Dict[str, PointTensor]:
    """The invariant Nijenhuis data of the doubled group at the identity.

    Block coordinates: first n components are the first summand.  Values
    follow from bilinearity of the four generating identities:
      N((xi,0),(eta,0)) = (-[xi,eta], [xi,eta])
      N((0,xi),(0,eta)) = ([xi,eta], -[xi,eta])
      N((xi,0),(0,eta)) = N((0,xi),(eta,0)) = ([xi,eta], [xi,eta])
    """
    n = g.dim
    dim = 2 * n

    def fn(idx):
        a, b = idx
        xa, ba = a % n, a // n
        xb, bb = b % n, b // n
        ea = [Fraction(1) if i == xa else Fraction(0) for i in range(n)]
        eb = [Fraction(1) if i == xb else Fraction(0) for i in range(n)]
        br = g.bracket(ea, eb)
        if ba == 0 and bb == 0:
            first, second = [-x for x in br], br
        elif ba == 1 and bb == 1:
            first, second = br, [-x for x in br]
        else:
            first, second = br, br
        return [*first, *second]

    tensor_n = PointTensor.from_function(dim, dim, 2, fn)
    return {"nijenhuis_at_identity": tensor_n, "j": doubled_block_j(n)}


# ---------------------------------------------------------------------------
# seeded random generators (exact by construction)
# ---------------------------------------------------------------------------

def random_structure(n: int, seed: int, degree: int = 2) -> StructureField:
    """Seeded random structure with exact J^2 = -I and entries of degree <= degree.

    Construction: deformation j0 + A where A has image inside the first
    complex coordinate plane and kernel containing it (so A^2 = 0 and
    anticommutation kills the cross terms), then a constant rational
    conjugation to mix all entries.
    """
    if n < 1:
        raise StructureError("n must be at least 1")
    rng = random.Random(seed)
    dim = 2 * n

    def rand_poly() -> Poly:
        out = poly.zero()
        for _ in range(rng.randint(1, 3)):
            exp = [0] * dim
            for _ in range(rng.randint(0, degree)):
                exp[rng.randrange(dim)] += 1
            c = rng.randint(-3, 3)
            out = poly.add(out, poly.monomial(tuple(exp), c))
        return out

    a_odd_cols: List[PolyVec] = [poly.vec_zero(dim)]  # A kills the target plane
    for _t in range(1, n):
        col = poly.vec_zero(dim)
        col[0] = rand_poly()
        col[1] = rand_poly()
        a_odd_cols.append(col)
    plain = from_anticommuting_part(a_odd_cols)

    # constant conjugation T J T^{-1}; retry until T is invertible
    while True:
        t = [[Fraction(rng.randint(-2, 2)) for _ in range(dim)] for _ in range(dim)]
        if linalg.det(t) != 0:
            break
    t_inv = linalg.inverse(t)
    # entries of T J(x) T^{-1}: polynomial combination of the old columns
    cols: List[PolyVec] = []
    for j in range(dim):
        col = poly.vec_zero(dim)
        # new column j: sum_k T . J_col(k) . t_inv[k][j]
        for k in range(dim):
            if t_inv[k][j] == 0:
                continue
            jk = plain.cols[k]
            t_jk = [poly.zero() for _ in range(dim)]
            for i in range(dim):
                acc = poly.zero()
                for r in range(dim):
                    if t[i][r] != 0 and not poly.is_zero(jk[r]):
                        acc = poly.add(acc, poly.scale(jk[r], t[i][r]))
                t_jk[i] = acc
            col = poly.vec_add(col, poly.vec_scale(t_jk, t_inv[k][j]))
        cols.append(col)
    return StructureField(cols, name=f"random(n={n}, seed={seed})")


def random_linear_nijenhuis(n: int, seed: int, coeff_bound: int = 3) -> PointTensor:
    """Seeded random element of the linear space for j0 on R^{2n}.

    Free data: the values on (e_{2s-1}, e_{2t-1}) for s < t; everything else
    follows from antisymmetry and the antilinearity relations.
    """
    rng = random.Random(seed)
    dim = 2 * n
    free: Dict[Tuple[int, int], List[Fraction]] = {}
    for s in range(n):
        for t in range(s + 1, n):
            free[(s, t)] = [Fraction(rng.randint(-coeff_bound, coeff_bound))
                            for _ in range(dim)]
    return linear_nijenhuis_from_free_data(n, free)


def linear_nijenhuis_from_free_data(n: int, free: Dict[Tuple[int, int], List[Fraction]]) -> PointTensor:
    """Assemble the full tensor from values on odd-odd pairs (s < t, 0-based)."""
    dim = 2 * n
    zero = [Fraction(0)] * dim

    def j0(v):
        return standard_apply(v)

    def value(a: int, b: int) -> List[Fraction]:
        if a == b:
            return list(zero)
        if a > b:
            return [-x for x in value(b, a)]
        s, sa = a // 2, a % 2
        t, tb = b // 2, b % 2
        if s == t:
            return list(zero)  # complex line: N(e, j0 e) = 0
        c = free.get((s, t), zero)
        if sa == 0 and tb == 0:
            return list(c)
        if sa == 0 and tb == 1:
            return [-x for x in j0(c)]
        if sa == 1 and tb == 0:
            return [-x for x in j0(c)]
        return [-x for x in c]

    return PointTensor.from_function(dim, dim, 2, lambda idx: value(idx[0], idx[1]))
