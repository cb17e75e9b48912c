"""Pointwise classification data extracted from the torsion of a structure.

Four-dimensional structures with nonzero torsion carry a flag of
distributions: the image plane of the torsion tensor, its first derived
space, and (when the flag keeps growing) the full tangent space.  From the
flag one builds an adapted frame (xi1..xi4) normalized by the relations

    N(xi1, xi3) = xi1,   N(xi2, xi3) = -xi2,
    N(xi1, xi4) = xi2,   N(xi2, xi4) = xi1,        xi2 = j xi1,

together with the line pair (U1, U2), affine normalization data for the
xi3 and xi4 directions, and orientation signs.  The eigenline step may
leave the rationals; scalars are then exact elements of a quadratic
extension Q(sqrt(d)).

Separately, lie_check decides whether the torsion product N(., .) obeys
the composition law N(x, N(y, z)) = 0, reporting the image span, the
annihilator, a filtration by images of torsion derivatives, and graded
bracket constants.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple, Union

from . import linalg, poly
from .invariants import (InternalInconsistencyError, nijenhuis_differential,
                         nijenhuis_field_bracket, nijenhuis_tensor)
from .quadext import QuadExt, sqrt_exact
from .structures import StructureError, StructureField
from .tensor import PointTensor

Scalar = Union[Fraction, QuadExt]
Vec = List[Scalar]


class HypothesisError(StructureError):
    """A construction hypothesis fails at the point; `stage` says which.

    stage is "torsion" (the torsion tensor vanishes), "derived" (the first
    derived space does not have dimension 3), or "second_derived" (the
    flag stops before filling the tangent space).
    """

    def __init__(self, stage: str, message: str):
        super().__init__(message)
        self.stage = stage


# ---------------------------------------------------------------------------
# scalar helpers: Fraction and QuadExt mix via the reflected operators
# ---------------------------------------------------------------------------

def _sign(s: Scalar) -> int:
    if isinstance(s, QuadExt):
        return s.sign()
    return -1 if s < 0 else (1 if s > 0 else 0)


def _vec_add(u: Sequence[Scalar], v: Sequence[Scalar]) -> Vec:
    return [a + b for a, b in zip(u, v)]


def _vec_scale(u: Sequence[Scalar], c: Scalar) -> Vec:
    return [c * a for a in u]


def _vec_eq(u: Sequence[Scalar], v: Sequence[Scalar]) -> bool:
    return all(a == b for a, b in zip(u, v))


def _vec_is_zero(u: Sequence[Scalar]) -> bool:
    return all(a == 0 for a in u)


def _field_solve(rows: List[Vec], rhs: Vec) -> Optional[Vec]:
    """Particular solution of (rows) x = rhs, free unknowns set to zero.

    Plain elimination; pivots only need to be nonzero, so entries may live
    in any exact field (here: rationals or one quadratic extension).
    """
    m = [list(r) + [b] for r, b in zip(rows, rhs)]
    nrows, ncols = len(m), len(m[0]) - 1
    pivots: List[Tuple[int, int]] = []
    r = 0
    for c in range(ncols):
        pr = next((i for i in range(r, nrows) if m[i][c] != 0), None)
        if pr is None:
            continue
        m[r], m[pr] = m[pr], m[r]
        inv = m[r][c]
        m[r] = [e / inv for e in m[r]]
        for i in range(nrows):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append((r, c))
        r += 1
        if r == nrows:
            break
    for i in range(r, nrows):
        if m[i][ncols] != 0:
            return None
    x: Vec = [Fraction(0)] * ncols
    for pr, pc in pivots:
        x[pc] = m[pr][ncols]
    return x


def _coords_in(basis: List[Sequence[Scalar]],
               target: Sequence[Scalar]) -> Optional[Vec]:
    """target = sum c_i basis[i], or None."""
    rows = [[b[i] for b in basis] for i in range(len(target))]
    return _field_solve(rows, list(target))


def _apply_columns(cols: List[Sequence[Fraction]], v: Sequence[Scalar]) -> Vec:
    out: Vec = [Fraction(0)] * len(cols[0])
    for a, comp in enumerate(v):
        if comp == 0:
            continue
        for i in range(len(out)):
            if cols[a][i]:
                out[i] = out[i] + comp * cols[a][i]
    return out


def _torsion_pair(n_at: PointTensor, x: Sequence[Scalar],
                  y: Sequence[Scalar]) -> Vec:
    """N(x, y) for vectors over the working field; N itself is rational."""
    dim = n_at.dim_in
    out: Vec = [Fraction(0)] * dim
    for (a, b), value in n_at.entries.items():
        coeff = x[a] * y[b]
        if coeff == 0:
            continue
        for i in range(dim):
            if value[i]:
                out[i] = out[i] + coeff * value[i]
    return out


# ---------------------------------------------------------------------------
# distributions
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Distribution:
    """A module of polynomial vector fields with its fiber at a base point."""

    rank: int
    generators: Tuple[Tuple[poly.Poly, ...], ...]
    fiber: Tuple[Tuple[Fraction, ...], ...]
    base_point: Tuple[Fraction, ...]
    dim: int

    def fiber_at(self, point: Sequence) -> List[List[Fraction]]:
        return linalg.span_basis([poly.vec_eval(list(g), point)
                                  for g in self.generators])

    def rank_at(self, point: Sequence) -> int:
        return len(self.fiber_at(point))


def make_distribution(generators: Sequence[Sequence[poly.Poly]],
                      point: Sequence) -> Distribution:
    """Bundle polynomial generator fields with their evaluated fiber."""
    gens = tuple(tuple(g) for g in generators if not poly.vec_is_zero(list(g)))
    if not gens:
        raise StructureError("no nonzero generators")
    dim = len(gens[0])
    fiber = linalg.span_basis([poly.vec_eval(list(g), point) for g in gens])
    return Distribution(rank=len(fiber), generators=gens,
                        fiber=tuple(tuple(v) for v in fiber),
                        base_point=tuple(Fraction(c) for c in point), dim=dim)


def _torsion_generators(j: StructureField) -> List[List[poly.Poly]]:
    nf = nijenhuis_field_bracket(j)
    gens = []
    for a in range(j.dim):
        for b in range(a + 1, j.dim):
            g = nf.entries[(a, b)]
            if not poly.vec_is_zero(g):
                gens.append(g)
    return gens


def pi2(j: StructureField, point: Sequence) -> Distribution:
    """Image plane of the torsion tensor as a distribution, at a point.

    Needs a four-dimensional structure whose torsion does not vanish at
    the point.  The image span is then two-dimensional and closed under
    j; both facts follow from the pair symmetries and are asserted.
    """
    if j.dim != 4:
        raise StructureError("the image-plane construction needs dimension 4")
    gens = _torsion_generators(j)
    if not gens:
        raise HypothesisError("torsion", "torsion vanishes identically")
    dist = make_distribution(gens, point)
    if dist.rank == 0:
        raise HypothesisError("torsion", "torsion vanishes at the point")
    if dist.rank != 2:
        raise InternalInconsistencyError(
            f"torsion image has rank {dist.rank}, expected 2")
    jm = j.eval_matrix(point)
    fiber = [list(v) for v in dist.fiber]
    for v in fiber:
        if not linalg.in_span(linalg.mat_vec(jm, v), fiber):
            raise InternalInconsistencyError("torsion image is not j-closed")
    return dist


def derived_distribution(dist: Distribution, point: Sequence) -> Distribution:
    """D + [D, D], with the fiber taken at the point.

    Brackets of the listed generators suffice: bracketing f X with g Y
    differs from fg [X, Y] by terms valued in the module itself, so the
    fiber needs no products with coordinate functions and no degree cap.
    """
    gens = [list(g) for g in dist.generators]
    out = list(gens)
    for i in range(len(gens)):
        for k in range(i + 1, len(gens)):
            br = poly.lie_bracket(gens[i], gens[k], dist.dim)
            if not poly.vec_is_zero(br):
                out.append(br)
    return make_distribution(out, point)


def _weak_derived_step(base: List[List[poly.Poly]],
                       current: List[List[poly.Poly]],
                       dim: int) -> List[List[poly.Poly]]:
    """current + [base, current]; the flag rule brackets against level one."""
    out = list(current)
    for g in base:
        for h in current:
            br = poly.lie_bracket(g, h, dim)
            if not poly.vec_is_zero(br):
                out.append(br)
    return out


# ---------------------------------------------------------------------------
# the adapted frame
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class UTXiFrame:
    """Adapted frame at a point: lines, normalization data, signs.

    xi3 is pinned up to shifts by the image plane and the half-space sign;
    t_metric stores the chosen representative (the invariant datum is the
    affine pair +-xi3 + plane).  xi4 is pinned by N(xi1, xi4) = xi2 up to
    plane shifts; xi_metric stores the representative.  Scalars live in Q,
    or in Q(sqrt(d)) with d = field_discriminant.
    """

    xi1: Tuple[Scalar, ...]
    xi2: Tuple[Scalar, ...]
    xi3: Tuple[Scalar, ...]
    xi4: Tuple[Scalar, ...]
    u1: Tuple[Scalar, ...]
    u2: Tuple[Scalar, ...]
    t_metric: Tuple[Scalar, ...]
    xi_metric: Tuple[Scalar, ...]
    t_orientation: int
    xi_orientation: int
    plane: Tuple[Tuple[Fraction, ...], ...]
    field_discriminant: Optional[Fraction]
    base_point: Tuple[Fraction, ...]


def _eigvec(m: List[List[Fraction]], lam: Scalar) -> Vec:
    w: Vec = [m[0][1], lam - m[0][0]]
    if _vec_is_zero(w):
        w = [lam - m[1][1], m[1][0]]
    return w


def _frame_ingredients(j: StructureField, point: Sequence):
    """Shared start of the frame ops: plane, raw xi3, pairing matrix."""
    plane = pi2(j, point)
    derived = derived_distribution(plane, point)
    if derived.rank == 2:
        raise HypothesisError(
            "derived", "the first derived space equals the image plane")
    if derived.rank == 4:
        raise HypothesisError(
            "derived", "the first derived space already fills the tangent "
            "space; the frame construction needs the corank-1 case")
    fiber = [list(v) for v in plane.fiber]
    xi3_raw = next(list(v) for v in derived.fiber
                   if not linalg.in_span(list(v), fiber))
    n_at = nijenhuis_tensor(j, point)
    b1, b2 = fiber
    m_cols = []
    for b in (b1, b2):
        coords = _coords_in([b1, b2], n_at.apply([b, xi3_raw]))
        if coords is None:
            raise InternalInconsistencyError(
                "pairing against the derived direction leaves the plane")
        m_cols.append(coords)
    m = [[m_cols[0][0], m_cols[1][0]], [m_cols[0][1], m_cols[1][1]]]
    return plane, xi3_raw, n_at, m


def utxi_invariant(j: StructureField, point: Sequence,
                   xi3_choice: Optional[Sequence] = None) -> UTXiFrame:
    """Adapted frame from the torsion flag at a point.

    Hypotheses (a HypothesisError names the failing stage): nonzero
    torsion at the point, and a three-dimensional first derived space of
    the image plane.  The two invariant lines of eta -> N(eta, xi3) on
    the plane fix xi1 and xi2 = j xi1; the positive eigenvalue rescales
    xi3; xi4 solves N(xi1, xi4) = xi2 and never lies in the derived
    space, so it completes the basis.

    xi3_choice overrides the canonical derived-direction pick; it must
    lie in the derived space but not in the plane.  Shifting the choice
    by plane vectors changes nothing but the stored representative;
    choosing the opposite half-space interchanges the lines U1 and U2.
    """
    plane, xi3_raw, n_at, m = _frame_ingredients(j, point)
    b1, b2 = [list(v) for v in plane.fiber]
    if m[0][0] + m[1][1] != 0:
        raise InternalInconsistencyError("plane pairing map has a trace")
    det = m[0][0] * m[1][1] - m[0][1] * m[1][0]
    if det >= 0:
        raise InternalInconsistencyError(
            "plane pairing map does not reverse orientation")
    lam = sqrt_exact(-det)
    disc = lam.d if isinstance(lam, QuadExt) else None

    if xi3_choice is None:
        chosen: Vec = list(xi3_raw)
    else:
        if len(xi3_choice) != 4:
            raise StructureError("xi3 choice has wrong length")
        chosen = [c if isinstance(c, QuadExt) else Fraction(c)
                  for c in xi3_choice]
    coords = _coords_in([b1, b2, xi3_raw], chosen)
    if coords is None:
        raise StructureError("xi3 choice is outside the derived space")
    alpha = coords[2]
    if alpha == 0:
        raise StructureError("xi3 choice lies in the image plane")
    orient = _sign(alpha)
    target = lam if orient > 0 else -1 * lam

    w = _eigvec(m, target)
    xi1 = _vec_add(_vec_scale(b1, w[0]), _vec_scale(b2, w[1]))
    lead = next(c for c in xi1 if c != 0)
    xi1 = _vec_scale(xi1, 1 / lead)
    jmat = j.eval_matrix(point)
    jm_cols = [[jmat[i][a] for i in range(4)] for a in range(4)]
    xi2 = _apply_columns(jm_cols, xi1)

    scale = (alpha if orient > 0 else -1 * alpha) * lam
    xi3 = _vec_scale(chosen, 1 / scale)

    image_cols = []
    for c in range(4):
        e = [Fraction(0)] * 4
        e[c] = Fraction(1)
        image_cols.append(_torsion_pair(n_at, xi1, e))
    rows = [[image_cols[c][i] for c in range(4)] for i in range(4)]
    xi4 = _field_solve(rows, list(xi2))
    if xi4 is None:
        raise InternalInconsistencyError("no solution for the fourth frame vector")
    if _coords_in([b1, b2, xi3_raw], xi4) is not None:
        raise InternalInconsistencyError(
            "fourth frame vector fell inside the derived space")

    checks = [
        (_torsion_pair(n_at, xi1, xi3), list(xi1)),
        (_torsion_pair(n_at, xi2, xi3), _vec_scale(xi2, Fraction(-1))),
        (_torsion_pair(n_at, xi1, xi4), list(xi2)),
        (_torsion_pair(n_at, xi2, xi4), list(xi1)),
    ]
    for got, want in checks:
        if not _vec_eq(got, want):
            raise InternalInconsistencyError("frame relation failed exactly")

    return UTXiFrame(
        xi1=tuple(xi1), xi2=tuple(xi2), xi3=tuple(xi3), xi4=tuple(xi4),
        u1=tuple(xi1), u2=tuple(xi2),
        t_metric=tuple(xi3), xi_metric=tuple(xi4),
        t_orientation=orient, xi_orientation=1,
        plane=tuple(tuple(v) for v in plane.fiber),
        field_discriminant=disc,
        base_point=tuple(Fraction(c) for c in point))


# ---------------------------------------------------------------------------
# graded bracket forms on the full flag
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class TanakaForms:
    """Frame scalars of the two bracket-induced forms on the flag.

    omega2 is the single scalar of the pairing U1 x U2 into the level-3
    direction; omega1 holds the values on xi1 and xi2 of the pairing
    against the level-3 direction into the top quotient line.
    """

    omega2: Scalar
    omega1: Tuple[Scalar, Scalar]
    frame: UTXiFrame


def _bracket_scalar(fields_a: List[List[poly.Poly]], coeffs_a: Vec,
                    fields_b: List[List[poly.Poly]], coeffs_b: Vec,
                    point: Sequence, frame_basis: List[Vec],
                    component: int) -> Scalar:
    """Frame component of [sum a_i A_i, sum b_k B_k] at the point.

    Constant coefficients keep the bracket bilinear, so the value is a
    double sum of coefficient products against rational bracket values.
    """
    dim = len(frame_basis[0])
    total: Scalar = Fraction(0)
    for i, ca in enumerate(coeffs_a):
        if ca == 0:
            continue
        for k, cb in enumerate(coeffs_b):
            if cb == 0:
                continue
            val = poly.vec_eval(
                poly.lie_bracket(fields_a[i], fields_b[k], dim), point)
            if all(c == 0 for c in val):
                continue
            coords = _coords_in(frame_basis, val)
            if coords is None:
                raise InternalInconsistencyError(
                    "bracket value outside the frame span")
            total = total + ca * cb * coords[component]
    return total


def tanaka_forms(j: StructureField, point: Sequence,
                 xi3_choice: Optional[Sequence] = None) -> TanakaForms:
    """Bracket-induced forms on the flag, as exact frame scalars.

    Needs the full flag: plane of rank 2, first derived space of rank 3,
    second step filling the tangent space; a HypothesisError names the
    first failing stage.  omega2 is the xi3-component of a bracket of
    plane sections through xi1 and xi2; omega1 pairs plane sections
    against a section through xi3 and reads the xi4-component.  Both are
    fiber values, independent of the section choices.
    """
    frame = utxi_invariant(j, point, xi3_choice=xi3_choice)
    gens = _torsion_generators(j)
    d1 = _weak_derived_step(gens, gens, 4)
    d2 = _weak_derived_step(gens, d1, 4)
    fib2 = linalg.span_basis([poly.vec_eval(g, point) for g in d2])
    if len(fib2) != 4:
        raise HypothesisError(
            "second_derived", "the flag stops before filling the tangent space")

    frame_basis: List[Vec] = [list(frame.xi1), list(frame.xi2),
                              list(frame.xi3), list(frame.xi4)]
    gen_vals = [poly.vec_eval(g, point) for g in gens]
    rows_g = [[v[i] for v in gen_vals] for i in range(4)]
    c1 = _field_solve(rows_g, list(frame.xi1))
    c2 = _field_solve(rows_g, list(frame.xi2))
    if c1 is None or c2 is None:
        raise InternalInconsistencyError("frame vectors escape the plane module")
    omega2 = _bracket_scalar(gens, c1, gens, c2, point, frame_basis, 2)

    d1_vals = [poly.vec_eval(g, point) for g in d1]
    rows_d = [[v[i] for v in d1_vals] for i in range(4)]
    c3 = _field_solve(rows_d, list(frame.xi3))
    if c3 is None:
        raise InternalInconsistencyError("xi3 escapes the derived module")
    w1 = _bracket_scalar(gens, c1, d1, c3, point, frame_basis, 3)
    w2 = _bracket_scalar(gens, c2, d1, c3, point, frame_basis, 3)
    return TanakaForms(omega2=omega2, omega1=(w1, w2), frame=frame)


# ---------------------------------------------------------------------------
# the Lie verdict
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class LieWitness:
    """A failing instance N(e_a, N(e_b, e_c)) != 0 with an evaluation point."""

    indices: Tuple[int, int, int]
    point: Tuple[Fraction, ...]
    value: Tuple[Fraction, ...]


@dataclass(frozen=True)
class LieReport:
    is_lie: bool
    pi_basis: Tuple[Tuple[Fraction, ...], ...]
    annihilator_basis: Tuple[Tuple[Fraction, ...], ...]
    filtration: Optional[Tuple[Tuple[Tuple[Fraction, ...], ...], ...]]
    graded_levels: Optional[Tuple[int, ...]]
    graded_brackets: Optional[Dict[Tuple[int, int], Tuple[Fraction, ...]]]
    witness: Optional[LieWitness]


def _witness_point(residual: List[poly.Poly], samples: List[List[Fraction]],
                   dim: int) -> Tuple[List[Fraction], List[Fraction]]:
    for pt in samples:
        val = poly.vec_eval(residual, pt)
        if any(val):
            return [Fraction(c) for c in pt], val
    # a nonzero polynomial of total degree k cannot vanish on {0..k}^dim
    deg = max(poly.total_degree(p) for p in residual)
    for pt in itertools.product(range(deg + 1), repeat=dim):
        val = poly.vec_eval(residual, pt)
        if any(val):
            return [Fraction(c) for c in pt], val
    raise InternalInconsistencyError("nonzero residual with no witness point")


def _basis_list(dim: int) -> List[List[Fraction]]:
    return [[Fraction(1) if i == a else Fraction(0) for i in range(dim)]
            for a in range(dim)]


def _annihilator(n_at: PointTensor) -> List[List[Fraction]]:
    """{x : N(x, .) = 0} at a point, as a basis."""
    dim = n_at.dim_in
    rows = []
    for b in range(dim):
        for i in range(dim):
            rows.append([n_at.entries[(a, b)][i] for a in range(dim)])
    return linalg.nullspace(rows)


def _product_vanishes_at(n_at: PointTensor) -> bool:
    dim = n_at.dim_in
    for b in range(dim):
        for c in range(b + 1, dim):
            inner = n_at.entries[(b, c)]
            if not any(inner):
                continue
            for a in range(dim):
                e = [Fraction(1) if i == a else Fraction(0) for i in range(dim)]
                if any(_torsion_pair(n_at, e, inner)):
                    return False
    return True


def lie_check(j: StructureField, sample_points: Sequence[Sequence]) -> LieReport:
    """Decide whether the torsion product satisfies N(x, N(y, z)) = 0.

    The product of the polynomial entry fields is expanded symbolically,
    so the verdict is exact rather than sampled.  At each sample point
    the report also checks the pointwise equivalence with the inclusion
    of the image span in the annihilator, which is the algebraic form of
    the same law.  On a Lie verdict the filtration by images of torsion
    derivatives at the first sample point is returned, with the graded
    bracket constants and the rank-2 solvability check.
    """
    if not sample_points:
        raise StructureError("need at least one sample point")
    dim = j.dim
    nf = nijenhuis_field_bracket(j)
    is_lie = True
    witness = None
    for a in range(dim):
        for b in range(dim):
            for c in range(b + 1, dim):
                inner = nf.entries[(b, c)]
                residual = poly.vec_zero(dim)
                for i in range(dim):
                    if poly.is_zero(inner[i]):
                        continue
                    residual = poly.vec_add(
                        residual,
                        [poly.mul(inner[i], comp)
                         for comp in nf.entries[(a, i)]])
                if not poly.vec_is_zero(residual):
                    is_lie = False
                    pt, val = _witness_point(
                        residual, [list(p) for p in sample_points], dim)
                    witness = LieWitness(indices=(a, b, c), point=tuple(pt),
                                         value=tuple(val))
                    break
            if witness:
                break
        if witness:
            break

    for pt in sample_points:
        n_at = nijenhuis_tensor(j, pt)
        image = linalg.span_basis(
            [n_at.entries[(a, b)] for a in range(dim)
             for b in range(a + 1, dim)])
        ann = _annihilator(n_at)
        included = all(linalg.in_span(list(v), ann) for v in image)
        if included != _product_vanishes_at(n_at):
            raise InternalInconsistencyError(
                "pointwise product law disagrees with the inclusion test")

    first = list(sample_points[0])
    n_first = nijenhuis_tensor(j, first)
    pi_basis = linalg.span_basis(
        [n_first.entries[(a, b)] for a in range(dim)
         for b in range(a + 1, dim)])
    ann_basis = _annihilator(n_first)

    filtration = levels = brackets = None
    if is_lie:
        filtration, levels, brackets = _graded_report(j, first, n_first)
    return LieReport(
        is_lie=is_lie,
        pi_basis=tuple(tuple(v) for v in pi_basis),
        annihilator_basis=tuple(tuple(v) for v in ann_basis),
        filtration=filtration, graded_levels=levels, graded_brackets=brackets,
        witness=witness)


def bracket_identity_report(j: StructureField) -> Dict[str, bool]:
    """Graded-bracket identities that characterize the Lie verdict.

    The calibration anchor (the insertion-square of the structure form is
    twice the torsion form) holds for every structure; the remaining four
    identities hold exactly when the torsion product obeys the composition
    law, so they double-check a Lie verdict by a different route.
    """
    from .forms import VectorForm, algebraic_bracket, fn_bracket
    jf = VectorForm.from_structure(j)
    nf = VectorForm.from_pair_entries(j.dim, nijenhuis_field_bracket(j).entries)
    return {
        "jj_algebraic_zero": algebraic_bracket(jf, jf).is_zero(),
        "jj_fn_is_twice_torsion": fn_bracket(jf, jf).eq(nf.scale(Fraction(2))),
        "nn_algebraic_zero": algebraic_bracket(nf, nf).is_zero(),
        "nn_fn_zero": fn_bracket(nf, nf).is_zero(),
        "jn_fn_zero": fn_bracket(jf, nf).is_zero(),
    }


def _graded_report(j: StructureField, point: Sequence, n_at: PointTensor):
    """Filtration by images of torsion derivatives, plus bracket constants.

    Level k collects the image spans of the derivative tensors up to
    order k; the filtration stabilizes once k passes the entry degree of
    the torsion field.  Bracket constants expand N on lifted level
    representatives over the lifted basis.  A Lie verdict forces the
    second commutant span N(Im N, Im N) to vanish, asserted at the end.
    """
    dim = j.dim
    nf = nijenhuis_field_bracket(j)
    max_deg = max((poly.total_degree(p) for e in nf.entries.values()
                   for p in e if not poly.is_zero(p)), default=0)
    spans: List[List[List[Fraction]]] = []
    current: List[List[Fraction]] = []
    for k in range(max_deg + 1):
        d = nijenhuis_differential(j, k, point) if k else n_at
        vals = [v for v in d.entries.values() if any(v)]
        current = linalg.span_basis(current + vals)
        spans.append(current)
        if len(current) == dim:
            break
    lifted: List[List[Fraction]] = []
    levels: List[int] = []
    for k, basis in enumerate(spans):
        for v in basis:
            if not linalg.in_span(v, lifted):
                lifted.append(v)
                levels.append(k)
    brackets: Dict[Tuple[int, int], Tuple[Fraction, ...]] = {}
    for i in range(len(lifted)):
        for k in range(len(lifted)):
            val = n_at.apply([lifted[i], lifted[k]])
            if not any(val):
                continue
            coords = linalg.solve(
                [[u[r] for u in lifted] for r in range(dim)], val)
            if coords is None:
                raise InternalInconsistencyError(
                    "graded bracket value escapes the filtration")
            brackets[(i, k)] = tuple(coords)
    image = [list(v) for v in spans[0]]
    for u in image:
        for v in image:
            if any(n_at.apply([u, v])):
                raise InternalInconsistencyError(
                    "second commutant of a Lie verdict is nonzero")
    return (tuple(tuple(tuple(c) for c in s) for s in spans),
            tuple(levels), brackets)
