"""Generic marked sets over parameter rings and the ideals of the marked,
syzygy and resolution schemes."""
from __future__ import annotations

from concurrent.futures import Executor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from .marked import MarkedSet, prolongation_writings
from .polyring import (ModuleTerm, Param, ParamPoly, Poly, PolyMatrix, display_key, latex_poly,
                       matrix_multiply, param_name, unit_exps)
from .quasistable import QuasiStableModule
from .syzres import predicted_support, syzygy_module


@dataclass(frozen=True)
class ParamStyle:
    """How a parameter family is named, numbered and signed.

    Generic entries read ``sign * P * term``; numbering runs over slots in
    column-major (``order="col"``) or row-major (``order="row"``) order, terms
    inside one entry in display order.
    """
    family: str
    start: int = 0
    sign: int = 1
    order: str = "col"


# uppercase, 0-based, + signs, column-major
CURVE_STYLES = (ParamStyle("C"), ParamStyle("B"), ParamStyle("A"))
# lowercase, 1-based, - signs, row-major
SMALL_STYLES = (ParamStyle("c", 1, -1, "row"), ParamStyle("b", 1, -1, "row"),
                ParamStyle("d", 1, -1, "row"))


def styles_for(levels: int, styles: Sequence[ParamStyle] = CURVE_STYLES) -> List[ParamStyle]:
    out = list(styles)
    extra = ["E", "G", "H", "K", "L"]
    while len(out) < levels:
        base = out[-1]
        out.append(ParamStyle(extra[len(out) - len(styles)], base.start, base.sign, base.order))
    return out[:levels]


@dataclass
class GenericSet:
    """A marked set whose non-head coefficients are parameters.

    ``slots`` maps each parameter to (column index, ModuleTerm) of the entry it sits on.
    """
    marked: MarkedSet
    style: ParamStyle
    params: List[Param]
    slots: Dict[Param, Tuple[int, ModuleTerm]]
    row_shifts: List[int]

    @property
    def U(self) -> QuasiStableModule:
        return self.marked.U

    def matrix(self) -> PolyMatrix:
        F = self.marked
        heads = [(h.comp - 1, h.exps) for h in F.heads]
        M = PolyMatrix.from_columns(self.row_shifts, F.polys(), heads)
        M.col_shifts = [h.degree for h in F.heads]
        return M

    def values_from(self, concrete: Sequence[Poly]) -> Dict[Param, Fraction]:
        """Parameter values read off concrete columns (same heads, same order)."""
        s = self.style.sign
        return {p: Fraction(concrete[c].coeff(t)) * s for p, (c, t) in self.slots.items()}


def _number(columns: List[List[ModuleTerm]], style: ParamStyle
            ) -> Tuple[List[Param], Dict[Param, Tuple[int, ModuleTerm]]]:
    cells = []
    for c, terms in enumerate(columns):
        for t in terms:
            row = t.comp
            key = (c, row) if style.order == "col" else (row, c)
            cells.append((key, display_key(t.exps), c, t))
    cells.sort(key=lambda x: (x[0], x[1]))
    params, slots = [], {}
    for k, (_, _, c, t) in enumerate(cells):
        p = (style.family, style.start + k)
        params.append(p)
        slots[p] = (c, t)
    return params, slots


def _assemble(U: QuasiStableModule, heads: List[ModuleTerm], columns: List[List[ModuleTerm]],
              style: ParamStyle, row_shifts: List[int], base: Optional[List[Poly]] = None) -> GenericSet:
    params, slots = _number(columns, style)
    polys = [Poly.term(h) if base is None else base[c] for c, h in enumerate(heads)]
    acc: Dict[int, Dict[ModuleTerm, object]] = {c: {} for c in range(len(heads))}
    for p, (c, t) in slots.items():
        acc[c][t] = ParamPoly.var(*p) * style.sign
    elems = {}
    for c, h in enumerate(heads):
        elems[h] = polys[c] + Poly(acc[c])
    return GenericSet(MarkedSet(U, elems, check=False), style, params, slots, row_shifts)


def generic_marked_set(U: QuasiStableModule, style: ParamStyle = CURVE_STYLES[0]) -> GenericSet:
    """One parameter per (Pommaret term, sous-escalier term of the same degree)."""
    heads = list(U.pommaret_basis)
    cols = [U.sous_escalier(h.degree) for h in heads]
    return _assemble(U, heads, cols, style, list(U.shifts))


def generic_presyzygies(prev: GenericSet, style: ParamStyle,
                        columns: Optional[Sequence[ModuleTerm]] = None) -> GenericSet:
    """Fundamental pre-syzygies of ``prev``: the head slot with coefficient 1 plus a
    parameter on every other slot of the predicted support.

    ``columns`` optionally fixes the column order (a permutation of the next
    module's Pommaret basis).
    """
    U = prev.U
    U1 = syzygy_module(U)
    if columns is not None:
        U1 = U1.reordered(columns)
    heads = list(U1.pommaret_basis)
    cols = []
    for h in heads:
        i = max(j for j, e in enumerate(h.exps) if e)
        src = U.pommaret_basis[h.comp - 1]
        cols.append(predicted_support(U, i, src)[1:])
    return _assemble(U1, heads, cols, style, [h.degree for h in U.pommaret_basis])


def generic_chain(U: QuasiStableModule, styles: Sequence[ParamStyle] = CURVE_STYLES,
                  columns: Optional[Dict[int, Sequence[ModuleTerm]]] = None) -> List[GenericSet]:
    """Generic set plus generic pre-syzygies at every level of the U-resolution."""
    columns = columns or {}
    depth = 1
    cur = U
    while syzygy_module(cur).pommaret_basis:
        depth += 1
        cur = syzygy_module(cur)
    st = styles_for(depth, styles)
    chain = [generic_marked_set(U, st[0])]
    for t in range(1, depth):
        chain.append(generic_presyzygies(chain[-1], st[t], columns.get(t)))
    return chain


# -- presentations ------------------------------------------------------------

def canonical_generators(polys) -> List[ParamPoly]:
    """Content-free, sign-normalised, duplicate-free, sorted list of nonzero generators."""
    seen = {}
    for p in polys:
        if not isinstance(p, ParamPoly):
            p = ParamPoly.const(p)
        if not p:
            continue
        q = p.primitive()
        seen[q] = q
    return sorted(seen.values(), key=lambda q: (q.degree(), str(q)))


@dataclass
class SchemePresentation:
    kind: str
    families: Dict[str, int]
    generators: List[ParamPoly]
    params: List[Param] = field(default_factory=list)
    constant_slots: List[Tuple[Param, int, int, object]] = field(default_factory=list)

    @property
    def is_empty(self) -> bool:
        return not self.generators

    def describe(self) -> str:
        fam = ", ".join(f"|{k}|={v}" for k, v in self.families.items())
        if self.is_empty:
            n = sum(self.families.values())
            return f"{self.kind}: zero ideal, affine space of dimension {n} ({fam})"
        return f"{self.kind}: {len(self.generators)} generators ({fam})"

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "families": self.families,
            "generators": [_param_poly_json(g) for g in self.generators],
            "constant_slots": [{"param": param_name(p), "row": r + 1, "col": c + 1, "value": str(v)}
                               for p, r, c, v in self.constant_slots],
        }


def _param_poly_json(p: ParamPoly) -> Dict[str, str]:
    out = {}
    for m in p.sorted_monos():
        key = "*".join(param_name(v) + (f"^{e}" if e > 1 else "") for v, e in m) or "1"
        out[key] = str(dict(p.items())[m])
    return out


def _x_coeffs(polys) -> List[object]:
    out = []
    for p in polys:
        out.extend(p.x_coefficients().values())
    return out


def marked_scheme_ideal(U: QuasiStableModule, style: ParamStyle = CURVE_STYLES[0],
                        executor: Optional[Executor] = None,
                        generic: Optional[GenericSet] = None) -> SchemePresentation:
    """The ideal whose zero set is the family of U-marked bases."""
    g = generic or generic_marked_set(U, style)
    writings = prolongation_writings(g.marked, executor)
    gens = canonical_generators(_x_coeffs(w.remainder for _, _, w in writings))
    return SchemePresentation("U", {style.family: len(g.params)}, gens, list(g.params))


def level_product(chain: Sequence[GenericSet], t: int) -> PolyMatrix:
    return matrix_multiply(chain[t - 1].matrix(), chain[t].matrix())


def _product_generators(M: PolyMatrix) -> List[object]:
    return _x_coeffs(M.entries.values())


def syzygy_scheme_ideal(U: QuasiStableModule, styles: Sequence[ParamStyle] = CURVE_STYLES,
                        chain: Optional[List[GenericSet]] = None) -> SchemePresentation:
    chain = chain or generic_chain(U, styles)
    if len(chain) < 2:
        return SchemePresentation("S", {chain[0].style.family: len(chain[0].params)}, [],
                                  list(chain[0].params))
    gens = canonical_generators(_product_generators(level_product(chain, 1)))
    fam = {chain[0].style.family: len(chain[0].params), chain[1].style.family: len(chain[1].params)}
    return SchemePresentation("S", fam, gens, chain[0].params + chain[1].params)


def resolution_scheme_ideals(U: QuasiStableModule, styles: Sequence[ParamStyle] = CURVE_STYLES,
                             chain: Optional[List[GenericSet]] = None) -> List[SchemePresentation]:
    """S^(t) for t = 1 .. length of the U-resolution."""
    chain = chain or generic_chain(U, styles)
    out = []
    for t in range(1, len(chain)):
        gens = canonical_generators(_product_generators(level_product(chain, t)))
        fam = {c.style.family: len(c.params) for c in chain[: t + 1]}
        params = [p for c in chain[: t + 1] for p in c.params]
        out.append(SchemePresentation(f"S({t})", fam, gens, params))
    return out


# -- the substitution B -> b(C) ----------------------------------------------------

@dataclass
class SubstitutionMap:
    values: Dict[Param, ParamPoly]
    outside_support: List[Tuple[ModuleTerm, ModuleTerm]]   # quotient terms off the predicted slots
    remainders: List[Poly]

    def __getitem__(self, p: Param):
        return self.values[p]


def _writings_by_column(prev: MarkedSet, heads: Sequence[ModuleTerm], executor=None):
    U = prev.U
    wr = {(h, i): w for h, i, w in prolongation_writings(prev, executor)}
    out = []
    for h in heads:
        i = max(j for j, e in enumerate(h.exps) if e)
        src = U.pommaret_basis[h.comp - 1]
        out.append((src, i, wr[(src, i)]))
    return out


def quotient_columns(prev: MarkedSet, heads: Sequence[ModuleTerm], executor=None
                     ) -> Tuple[List[Poly], List[Poly]]:
    """Columns x_i f_k - sum P_g f_g built from the unique writings, with remainders."""
    U = prev.U
    cols, rems = [], []
    for src, i, w in _writings_by_column(prev, heads, executor):
        k = U.index_of(src) + 1
        col = Poly.term(ModuleTerm(unit_exps(U.nvars, i), k, src.degree))
        for g, P in w.quotients.items():
            col = col - P.with_module(U.index_of(g) + 1, g.degree)
        cols.append(col)
        rems.append(w.remainder)
    return cols, rems


def substitution_map(prev: GenericSet, nxt: GenericSet, executor=None) -> SubstitutionMap:
    """Values of the next level's parameters read off the unique writings over ``prev``."""
    cols, rems = quotient_columns(prev.marked, nxt.marked.heads, executor)
    s = nxt.style.sign
    vals: Dict[Param, ParamPoly] = {}
    allowed = {}
    for p, (c, t) in nxt.slots.items():
        v = cols[c].coeff(t)
        vals[p] = ParamPoly._lift(v) * s
        allowed.setdefault(c, set()).add(t)
    outside = []
    for c, col in enumerate(cols):
        h = nxt.marked.heads[c]
        for t in col.support():
            if t not in allowed.get(c, ()) and not (t.comp == h.comp and t.exps == h.exps):
                outside.append((h, t))
    return SubstitutionMap(vals, outside, rems)


def substitute_chain(chain: Sequence[GenericSet], t: int, values: Dict[Param, object]) -> MarkedSet:
    g = chain[t].marked
    return MarkedSet(g.U, {h: g[h].subs_params(values) for h in g.heads}, check=False)


def constructive_containment(U: QuasiStableModule, chain: Optional[List[GenericSet]] = None
                             ) -> Tuple[bool, List[ParamPoly]]:
    """Substitute B -> b(C) into the pre-syzygies and multiply by the generic set:
    every x-coefficient must be (a multiple of) a generator of the marked-scheme
    ideal, or zero. Returns (holds, offending coefficients)."""
    chain = chain or generic_chain(U)
    if len(chain) < 2:
        return True, []
    smap = substitution_map(chain[0], chain[1])
    M1 = substitute_chain(chain, 1, smap.values)
    heads = [(h.comp - 1, h.exps) for h in M1.heads]
    m1 = PolyMatrix.from_columns(chain[1].row_shifts, M1.polys(), heads)
    m1.col_shifts = [h.degree for h in M1.heads]
    prod = matrix_multiply(chain[0].matrix(), m1)
    ugens = set(marked_scheme_ideal(U, chain[0].style, generic=chain[0]).generators)
    bad = []
    for c in _product_generators(prod):
        c = ParamPoly._lift(c)
        if c and c.primitive() not in ugens:
            bad.append(c)
    return not bad, bad


def minimality_locus_ideal(U: QuasiStableModule, style: ParamStyle = CURVE_STYLES[0],
                           next_style: ParamStyle = CURVE_STYLES[1],
                           chain: Optional[List[GenericSet]] = None) -> SchemePresentation:
    """Marked-scheme generators plus the b-polynomials on constant slots of the first syzygies."""
    if chain is None:
        g0 = generic_marked_set(U, style)
        chain = [g0]
        if syzygy_module(U).pommaret_basis:
            chain.append(generic_presyzygies(g0, next_style))
    ug = marked_scheme_ideal(U, chain[0].style, generic=chain[0])
    consts = []
    if len(chain) > 1:
        smap = substitution_map(chain[0], chain[1])
        for p, (c, t) in sorted(chain[1].slots.items(), key=lambda kv: kv[0][1]):
            if t.tdeg == 0:
                consts.append((p, t.comp - 1, c, smap.values[p]))
    gens = canonical_generators(list(ug.generators) + [v for *_, v in consts])
    fam = {chain[0].style.family: len(chain[0].params)}
    return SchemePresentation("minimality-locus", fam, gens, list(chain[0].params), consts)


# -- evaluation at a concrete point --------------------------------------------

@dataclass
class PointValues:
    values: Dict[Param, Fraction]
    levels: int


def point_values(chain: Sequence[GenericSet], F: MarkedSet, upto: Optional[int] = None) -> PointValues:
    """phi_F: C from F's coefficients, deeper parameters from the unique writings."""
    upto = len(chain) - 1 if upto is None else upto
    if [h for h in F.heads] != chain[0].marked.heads:
        raise ValueError("marked set does not match the generic set's heads")
    vals: Dict[Param, Fraction] = dict(chain[0].values_from(F.polys()))
    cur = F
    for t in range(1, upto + 1):
        heads = chain[t].marked.heads
        cols, _ = quotient_columns(cur, heads)
        vals.update(chain[t].values_from(cols))
        cur = MarkedSet(chain[t].U, dict(zip(heads, cols)), check=False)
    return PointValues(vals, upto)


def evaluate_point(P: SchemePresentation, F: MarkedSet, chain: Optional[Sequence[GenericSet]] = None
                   ) -> Tuple[bool, List[Fraction]]:
    """Whether every generator of ``P`` vanishes at the point defined by ``F``; nonzero residues."""
    if chain is None:
        chain = generic_chain(F.U)
    needed = {v for g in P.generators for v in g.params()}
    level = 0
    for t, g in enumerate(chain):
        if needed & set(g.params):
            level = t
    pv = point_values(chain, F, level)
    res = [g.evaluate(pv.values) for g in P.generators]
    nz = [r for r in res if r]
    return not nz, nz


# -- LaTeX rendering --------------------------------------------------------------

def latex_entries(g: GenericSet) -> List[List[str]]:
    """Matrix entries of a generic level, head entries wrapped in \\uwave."""
    M = g.matrix()
    nr, nc = M.shape
    out = []
    for r in range(nr):
        row = []
        for c in range(nc):
            h = M.heads[c]
            head = ModuleTerm(h[1]) if h is not None and h[0] == r else None
            row.append(latex_poly(M[(r, c)], head))
        out.append(row)
    return out


def latex_marked_set(g: GenericSet) -> List[str]:
    return [latex_poly(g.marked[h], h) for h in g.marked.heads]
