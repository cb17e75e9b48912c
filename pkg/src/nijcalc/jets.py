"""Order-by-order lifting for the Cauchy-Riemann compatibility of maps.

A truncated map is a base-point pair plus fully symmetric symbols
(Phi, Phi^(2), ..., Phi^(k)).  The order-k coefficient of
j_M o u_* - u_* o j_L is an exact expression in the symbols and the
structure derivatives; once the lower orders vanish it reduces to the
linear equation zeta(Phi^(k)) = P_k, where P_k collects every term built
from lower symbols.  Solvability of that equation is cut out by three
exact conditions on P_k, and the failing one carries the geometric
obstruction.  This module assembles the residual, the defect tensor P_k,
a canonical symmetric solution, and the order-2/3 obstruction tensors.
"""

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterator, List, Optional, Sequence, Tuple, Union

from . import linalg
from .invariants import (InternalInconsistencyError, higher_nijenhuis,
                         nijenhuis_tensor, structure_as_field)
from .structures import StructureError, StructureField
from .tensor import (PointTensor, compose_linear, post_compose,
                     precompose_all, slot_compose)

Index = Tuple[int, ...]
Vector = List[Fraction]

DEFAULT_MAX_ORDER = 4


class DefectConditionError(StructureError):
    """The defect tensor fails one of the three solvability conditions.

    ``condition`` is one of "antilinearity", "swap_conjugation",
    "trailing_symmetry"; ``defect`` is the tensor that should have been
    zero.  Only swap_conjugation can fail for a map whose lower-order
    residuals vanish; it is the invariant content of the condition set.
    """

    def __init__(self, condition: str, defect: PointTensor, message: str):
        super().__init__(message)
        self.condition = condition
        self.defect = defect


# -- jet data ----------------------------------------------------------------

@dataclass(frozen=True)
class JetSymbol:
    """Order-k symbol: a fully symmetric k-linear map between the charts."""

    k: int
    tensor: PointTensor

    def __post_init__(self):
        if self.k < 1:
            raise StructureError(f"symbol order {self.k} < 1")
        if self.tensor.arity != self.k:
            raise StructureError(
                f"order-{self.k} symbol carries an arity-{self.tensor.arity} tensor")
        if not self.tensor.is_fully_symmetric():
            raise StructureError(f"order-{self.k} symbol is not fully symmetric")


@dataclass(frozen=True)
class TruncatedMap:
    """Base points plus consecutive symbols Phi^(1), ..., Phi^(k)."""

    x: Tuple[Fraction, ...]
    y: Tuple[Fraction, ...]
    symbols: Tuple[JetSymbol, ...]
    require_nonzero_first: bool = False

    def __post_init__(self):
        object.__setattr__(self, "x", tuple(Fraction(c) for c in self.x))
        object.__setattr__(self, "y", tuple(Fraction(c) for c in self.y))
        object.__setattr__(self, "symbols", tuple(self.symbols))
        if not self.symbols:
            raise StructureError("a truncated map needs at least the order-1 symbol")
        for r, s in enumerate(self.symbols, start=1):
            if s.k != r:
                raise StructureError(f"symbol orders not consecutive from 1 at {s.k}")
            if s.tensor.dim_in != self.dim_in or s.tensor.dim_out != self.dim_out:
                raise StructureError(f"order-{s.k} symbol has mismatched dimensions")
        if len(self.x) != self.dim_in or len(self.y) != self.dim_out:
            raise StructureError("base point lengths do not match the symbol charts")
        if self.require_nonzero_first and self.symbols[0].tensor.is_zero():
            raise StructureError("order-1 symbol is zero but was flagged nondegenerate")

    @property
    def order(self) -> int:
        return len(self.symbols)

    @property
    def dim_in(self) -> int:
        return self.symbols[0].tensor.dim_in

    @property
    def dim_out(self) -> int:
        return self.symbols[0].tensor.dim_out

    def symbol(self, k: int) -> JetSymbol:
        return self.symbols[k - 1]

    def with_symbol(self, sym: JetSymbol) -> "TruncatedMap":
        return TruncatedMap(self.x, self.y, self.symbols + (sym,),
                            self.require_nonzero_first)


def truncate(u: TruncatedMap, order: int) -> TruncatedMap:
    """Forget the symbols above the given order."""
    if not 1 <= order <= u.order:
        raise StructureError(f"cannot truncate an order-{u.order} map to {order}")
    return TruncatedMap(u.x, u.y, u.symbols[:order], u.require_nonzero_first)


@dataclass(frozen=True)
class Obstruction:
    order: int
    residual: PointTensor
    vanishes: bool

    @classmethod
    def from_residual(cls, order: int, residual: PointTensor) -> "Obstruction":
        return cls(order, residual, residual.is_zero())


@dataclass(frozen=True)
class LiftResult:
    """Outcome of a lifting step: the extended map, or the blocking tensor."""

    lifted: Optional[TruncatedMap]
    obstruction: Optional[Obstruction]

    @property
    def ok(self) -> bool:
        return self.obstruction is None


# -- partition enumeration ----------------------------------------------------

def set_partitions(k: int) -> Iterator[List[Index]]:
    """Partitions of range(k); blocks increasing, ordered by least element."""
    if k == 0:
        yield []
        return

    def rec(i: int, blocks: List[List[int]]) -> Iterator[List[Index]]:
        if i == k:
            yield [tuple(b) for b in blocks]
            return
        for b in blocks:
            b.append(i)
            yield from rec(i + 1, blocks)
            b.pop()
        blocks.append([i])
        yield from rec(i + 1, blocks)
        blocks.pop()

    yield from rec(1, [[0]])


# -- sparse evaluation helpers -------------------------------------------------

def _nonzero_entries(t: PointTensor) -> Dict[Index, Vector]:
    return {idx: v for idx, v in t.entries.items() if any(c != 0 for c in v)}

def _apply_entries(entries: Dict[Index, Vector], args: Sequence[Vector],
                   dim_out: int) -> Vector:
    out = [Fraction(0)] * dim_out
    for idx, value in entries.items():
        coeff = Fraction(1)
        for a, j in zip(args, idx):
            c = a[j]
            if c == 0:
                coeff = Fraction(0)
                break
            coeff *= c
        if coeff == 0:
            continue
        for i in range(dim_out):
            if value[i]:
                out[i] += coeff * value[i]
    return out


def _vec_add(u: Vector, v: Vector) -> Vector:
    return [a + b for a, b in zip(u, v)]


def _vec_sub(u: Vector, v: Vector) -> Vector:
    return [a - b for a, b in zip(u, v)]


def _structure_at(j, point) -> PointTensor:
    if isinstance(j, StructureField):
        if point is None:
            raise StructureError("a structure field needs a base point")
        return j.at_point(point)
    if isinstance(j, PointTensor):
        return j
    return PointTensor.from_matrix(j)


def _symbol_tensor(phi) -> PointTensor:
    if isinstance(phi, JetSymbol):
        return phi.tensor
    if isinstance(phi, PointTensor):
        return phi
    return PointTensor.from_matrix(phi)


# -- the compatibility residual -------------------------------------------------

def zeta(psi: PointTensor, j_l_at: PointTensor, j_m_at: PointTensor) -> PointTensor:
    """j_M o psi - psi o (j_L (x) 1^(k-1)): the symbol of the residual."""
    return post_compose(j_m_at, psi).sub(slot_compose(psi, j_l_at, 0))


def _differential_tower(j: StructureField, point, top: int) -> List[Dict[Index, Vector]]:
    """Sparse d^(p-1) j at the point for p = 1..top; slot 0 is the matrix
    argument, the remaining p-1 slots are derivative directions."""
    fld = structure_as_field(j)
    tower: List[Dict[Index, Vector]] = [dict()]
    for p in range(1, top + 1):
        tower.append(_nonzero_entries(fld.differential(p - 1, list(point))))
    return tower


def _residual_terms(u: TruncatedMap, j_l: StructureField, j_m: StructureField,
                    skip_top: bool) -> PointTensor:
    """Order-k coefficient of j_M o u_* - u_* o j_L.

    With skip_top the terms containing the order-k symbol are dropped and
    the sign is flipped, which turns the residual into the defect tensor
    P_k that a new order-k symbol must reproduce.
    """
    k = u.order + 1 if skip_top else u.order
    l_dim, m_dim = u.dim_in, u.dim_out
    d_l = _differential_tower(j_l, u.x, k)
    d_m = _differential_tower(j_m, u.y, k)
    sym = {s.k: s.tensor.entries for s in u.symbols}
    parts = [blocks for blocks in set_partitions(k)
             if not (skip_top and len(blocks) == 1)]
    zero = [Fraction(0)] * m_dim

    def entry(idx: Index) -> Vector:
        out = list(zero)
        for blocks in parts:
            p = len(blocks)
            vals = [sym[len(b)][tuple(idx[i] for i in b)] for b in blocks]
            out = _vec_add(out, _apply_entries(d_m[p], vals, m_dim))
        for p in range(1, k + 1):
            if skip_top and p == 1:
                continue
            r = k - p + 1
            for s in itertools.combinations(range(1, k), p - 1):
                head = (idx[0],) + tuple(idx[i] for i in s)
                v = d_l[p].get(head)
                rest = tuple(idx[i] for i in range(1, k) if i not in s)
                if v is None:
                    continue
                term = zero
                some = False
                for i0, c in enumerate(v):
                    if c == 0:
                        continue
                    w = sym[r][(i0,) + rest]
                    if not some:
                        term = [c * a for a in w]
                        some = True
                    else:
                        term = [t + c * a for t, a in zip(term, w)]
                out = _vec_sub(out, term)
        return out if not skip_top else [-c for c in out]

    return PointTensor.from_function(l_dim, m_dim, k, entry)


def cr_residual(u: TruncatedMap, j_l: StructureField,
                j_m: StructureField) -> PointTensor:
    """Order-k coefficient of j_M o u_* - u_* o j_L for k = u.order.

    Zero at every order r <= k exactly when the map conjugates the
    structures modulo terms of order k.  At k = 1 this is the pointwise
    commutator j_M(y) Phi - Phi j_L(x).
    """
    _check_charts(u, j_l, j_m)
    return _residual_terms(u, j_l, j_m, skip_top=False)


def _check_charts(u: TruncatedMap, j_l: StructureField, j_m: StructureField) -> None:
    if u.dim_in != j_l.dim or u.dim_out != j_m.dim:
        raise StructureError("map charts do not match the structure dimensions")


def _require_membership(u: TruncatedMap, j_l: StructureField,
                        j_m: StructureField) -> None:
    for r in range(1, u.order + 1):
        if not cr_residual(truncate(u, r), j_l, j_m).is_zero():
            raise StructureError(
                f"map fails the compatibility equation at order {r}")


# -- defect tensor and its conditions -------------------------------------------

def defect_conditions(p_k: PointTensor, j_l_at: PointTensor,
                      j_m_at: PointTensor) -> Dict[str, PointTensor]:
    """The three exact solvability conditions, as defect tensors.

    antilinearity:     j_M o P + P o (j_L on slot 0)
    swap_conjugation:  alternation of P in slots 0,1 minus the same after
                       conjugating both slots by j_L
    trailing_symmetry: first failing symmetry among slots 1..k-1
    """
    out: Dict[str, PointTensor] = {}
    out["antilinearity"] = post_compose(j_m_at, p_k).add(
        slot_compose(p_k, j_l_at, 0))
    if p_k.arity >= 2:
        alt = p_k.sub(p_k.swap_slots(0, 1))
        conj = slot_compose(slot_compose(p_k, j_l_at, 0), j_l_at, 1)
        out["swap_conjugation"] = alt.sub(conj.sub(conj.swap_slots(0, 1)))
        trailing = p_k.scale(0)
        for s in range(1, p_k.arity - 1):
            if not p_k.is_symmetric_in(s, s + 1):
                trailing = p_k.sub(p_k.swap_slots(s, s + 1))
                break
        out["trailing_symmetry"] = trailing
    return out


def _verify_defect(p_k: PointTensor, j_l_at: PointTensor,
                   j_m_at: PointTensor) -> None:
    conds = defect_conditions(p_k, j_l_at, j_m_at)
    for name in ("antilinearity", "trailing_symmetry", "swap_conjugation"):
        defect = conds.get(name)
        if defect is not None and not defect.is_zero():
            raise DefectConditionError(
                name, defect, f"defect tensor fails the {name} condition")


def build_P_k(u: TruncatedMap, j_l: StructureField, j_m: StructureField,
              verify: bool = True) -> PointTensor:
    """Defect tensor the order-(k = u.order + 1) symbol must reproduce.

    Collects every order-k term of the compatibility residual that is
    built from the existing symbols, signed so that appending a symbol
    Phi^(k) with zeta(Phi^(k)) = P_k kills the order-k residual.
    Requires the residual to vanish through order k - 1.
    """
    _check_charts(u, j_l, j_m)
    _require_membership(u, j_l, j_m)
    p_k = _residual_terms(u, j_l, j_m, skip_top=True)
    if verify:
        j_l_at = j_l.at_point(list(u.x))
        j_m_at = j_m.at_point(list(u.y))
        try:
            _verify_defect(p_k, j_l_at, j_m_at)
        except DefectConditionError as err:
            if err.condition == "swap_conjugation":
                raise
            # the other two are identities once the lower residuals vanish
            raise InternalInconsistencyError(
                f"assembled defect tensor fails {err.condition}") from err
    return p_k


# -- canonical symmetric solution ------------------------------------------------

def symmetrize(p_k: PointTensor, j_l, j_m, x=None, y=None) -> JetSymbol:
    """Canonical fully symmetric Phi^(k) with zeta(Phi^(k)) = P_k.

    Starts from B = -1/2 j_M o P_k (antilinear in slot 0 by the
    antilinearity condition), projects each trailing slot onto its linear
    and antilinear parts, keeps the components with the antilinear slots
    leading, and adjoins for every slot subset the permuted copy that
    places those slots in the antilinear positions.  The structures may
    be given as fields with base points or as point tensors.
    """
    j_l_at = _structure_at(j_l, x)
    j_m_at = _structure_at(j_m, y)
    k = p_k.arity
    _verify_defect(p_k, j_l_at, j_m_at)

    b = post_compose(j_m_at, p_k).scale(Fraction(-1, 2))
    # components[p] is antilinear in slots 0..p and linear in the rest
    components: List[PointTensor] = []
    for p in range(k):
        comp = b
        for s in range(1, k):
            q = post_compose(j_m_at, slot_compose(comp, j_l_at, s))
            comp = comp.sub(q).scale(Fraction(1, 2)) if s > p \
                else comp.add(q).scale(Fraction(1, 2))
        components.append(comp)

    def entry(idx: Index) -> Vector:
        out = [Fraction(0)] * p_k.dim_out
        for p in range(k):
            g = components[p].entries
            for chosen in itertools.combinations(range(k), p + 1):
                rest = tuple(i for i in range(k) if i not in chosen)
                src = tuple(idx[i] for i in chosen) + tuple(idx[i] for i in rest)
                out = _vec_add(out, g[src])
        return out

    phi = PointTensor.from_function(p_k.dim_in, p_k.dim_out, k, entry)
    if not phi.is_fully_symmetric():
        raise InternalInconsistencyError("symmetrized symbol is not symmetric")
    if not zeta(phi, j_l_at, j_m_at).sub(p_k).is_zero():
        raise InternalInconsistencyError(
            "symmetrized symbol does not reproduce the defect tensor")
    return JetSymbol(k, phi)


# -- low-order obstructions ------------------------------------------------------

def obstruction_2(phi, j_l: StructureField, j_m: StructureField,
                  x: Sequence, y: Sequence,
                  require_membership: bool = True) -> Obstruction:
    """N_{j_M} o Phi^2 - Phi o N_{j_L} at the base points.

    By default Phi must intertwine the structures at (x, y); vanishing is
    then exactly solvability of the order-2 symbol equation.  Passing
    require_membership=False computes the formal residual for symbols
    outside the system, e.g. to compare a structure with its negation,
    where no nonzero symbol can intertwine.
    """
    t = _symbol_tensor(phi)
    if t.arity != 1 or t.dim_in != j_l.dim or t.dim_out != j_m.dim:
        raise StructureError("order-1 symbol does not match the structure charts")
    if require_membership:
        j_l_at = j_l.at_point(list(x))
        j_m_at = j_m.at_point(list(y))
        if compose_linear(j_m_at, t) != compose_linear(t, j_l_at):
            raise StructureError(
                "symbol does not intertwine the structures at the base points")
    residual = precompose_all(nijenhuis_tensor(j_m, list(y)), t).sub(
        post_compose(t, nijenhuis_tensor(j_l, list(x))))
    return Obstruction.from_residual(2, residual)


def obstruction_3(phi, j_l: StructureField, j_m: StructureField,
                  x: Sequence, y: Sequence,
                  require_membership: bool = True) -> Obstruction:
    """Higher-tensor conjugation defect at the base points.

    Requires the order-2 residual to vanish; the residual here pushes
    every slot of the higher tensor through Phi and compares with the
    image of the source higher tensor.
    """
    if not obstruction_2(phi, j_l, j_m, x, y, require_membership).vanishes:
        raise StructureError("the order-2 obstruction must vanish first")
    t = _symbol_tensor(phi)
    residual = precompose_all(higher_nijenhuis(j_m, list(y)), t).sub(
        post_compose(t, higher_nijenhuis(j_l, list(x))))
    return Obstruction.from_residual(3, residual)


# -- lifting ----------------------------------------------------------------------

def lift(u: TruncatedMap, j_l: StructureField, j_m: StructureField) -> LiftResult:
    """Append the canonical order-(k+1) symbol, or report the obstruction.

    Requires the compatibility residual to vanish through the current
    order.  A swap_conjugation failure of the defect tensor is the
    genuine geometric obstruction and is returned, not raised; the other
    two conditions cannot fail here.  The lifted map keeps every existing
    symbol unchanged.
    """
    k = u.order + 1
    try:
        p_k = build_P_k(u, j_l, j_m)
    except DefectConditionError as err:
        return LiftResult(None, Obstruction.from_residual(k, err.defect))
    sym = symmetrize(p_k, j_l, j_m, x=list(u.x), y=list(u.y))
    lifted = u.with_symbol(sym)
    if not cr_residual(lifted, j_l, j_m).is_zero():
        raise InternalInconsistencyError(
            f"order-{k} residual nonzero after lifting")
    return LiftResult(lifted, None)


def lift_tower(u: TruncatedMap, j_l: StructureField, j_m: StructureField,
               k_max: int = DEFAULT_MAX_ORDER) -> LiftResult:
    """Lift repeatedly until k_max or the first obstruction.

    Returns the deepest map reached; the obstruction field carries the
    blocking tensor when lifting stopped early.
    """
    cur = u
    while cur.order < k_max:
        step = lift(cur, j_l, j_m)
        if not step.ok:
            return LiftResult(cur, step.obstruction)
        cur = step.lifted
    return LiftResult(cur, None)


# -- symbol spaces -----------------------------------------------------------------

def symmetric_symbol_basis(dim_in: int, dim_out: int, k: int) -> List[PointTensor]:
    """Basis of the fully symmetric arity-k tensors, one per sorted index
    and output component."""
    out: List[PointTensor] = []
    for rep in itertools.combinations_with_replacement(range(dim_in), k):
        orbit = set(itertools.permutations(rep))
        for i in range(dim_out):
            val = [Fraction(0)] * dim_out
            val[i] = Fraction(1)
            entries = {idx: (list(val) if idx in orbit else [Fraction(0)] * dim_out)
                       for idx in itertools.product(range(dim_in), repeat=k)}
            out.append(PointTensor(dim_in, dim_out, k, entries))
    return out


def _flatten(t: PointTensor) -> Vector:
    return [c for idx in sorted(t.entries) for c in t.entries[idx]]


def zeta_matrix(j_l_at: PointTensor, j_m_at: PointTensor,
                k: int) -> List[List[Fraction]]:
    """Matrix of zeta on the symmetric symbol space, columns per basis
    element, rows per (index, component) of the value."""
    basis = symmetric_symbol_basis(j_l_at.dim_in, j_m_at.dim_in, k)
    cols = [_flatten(zeta(b, j_l_at, j_m_at)) for b in basis]
    return [[col[r] for col in cols] for r in range(len(cols[0]))]


def solve_symbol(p_k: PointTensor, j_l_at: PointTensor,
                 j_m_at: PointTensor) -> Optional[PointTensor]:
    """Some symmetric Phi with zeta(Phi) = P_k, or None when unsolvable.

    Independent of the symmetrize construction: solves the linear system
    over the symmetric symbol basis directly.
    """
    k = p_k.arity
    basis = symmetric_symbol_basis(p_k.dim_in, p_k.dim_out, k)
    mat = zeta_matrix(j_l_at, j_m_at, k)
    sol = linalg.solve(mat, _flatten(p_k))
    if sol is None:
        return None
    phi = basis[0].scale(0)
    for c, b in zip(sol, basis):
        if c != 0:
            phi = phi.add(b.scale(c))
    return phi
