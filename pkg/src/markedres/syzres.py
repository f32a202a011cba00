"""Fundamental syzygies, U-resolutions, minimality and minimization."""
from __future__ import annotations

from concurrent.futures import Executor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

from .marked import MarkedSet, NotABasis, is_marked_basis, prolongation_writings
from .polyring import (ModuleTerm, ParamPoly, Poly, PolyMatrix, format_marked, format_poly, format_term,
                       matrix_multiply, terms_in_vars, unit_exps)
from .quasistable import QuasiStableModule, multiplicative_top, nonmultiplicative


def syzygy_module(U: QuasiStableModule) -> QuasiStableModule:
    """The stable module U' generated by x_i f_k for every non-multiplicative x_i of head k."""
    shifts = [h.degree for h in U.pommaret_basis]
    gens = []
    for k, h in enumerate(U.pommaret_basis, start=1):
        for i in nonmultiplicative(h):
            gens.append(ModuleTerm(unit_exps(U.nvars, i), k, shifts[k - 1]))
    return QuasiStableModule(gens, U.nvars, shifts)


def slot(U: QuasiStableModule, head: ModuleTerm, exps=None) -> ModuleTerm:
    """The basis vector f_head of the next free module (times x^exps)."""
    k = U.index_of(head) + 1
    e = exps if exps is not None else unit_exps(U.nvars)
    return ModuleTerm(tuple(e), k, head.degree)


def syzygy_from_writing(U: QuasiStableModule, head: ModuleTerm, i: int, quotients: Dict[ModuleTerm, Poly]
                        ) -> Poly:
    """x_i f_head minus the quotient vector, as an element of R^p(-d')."""
    k = U.index_of(head) + 1
    acc = Poly.term(ModuleTerm(unit_exps(U.nvars, i), k, head.degree))
    for g, P in quotients.items():
        acc = acc - P.with_module(U.index_of(g) + 1, g.degree)
    return acc


def fundamental_syzygies(F: MarkedSet, executor: Optional[Executor] = None,
                         U1: Optional[QuasiStableModule] = None) -> MarkedSet:
    """The marked basis of Syz(F) over the stable module U'."""
    writings = prolongation_writings(F, executor)
    for h, i, w in writings:
        if w.remainder:
            raise NotABasis(f"x{i}*f_{{{format_term(h, F.U.m > 1)}}} does not reduce to zero",
                            (h, i, w.remainder))
    U = F.U
    U1 = U1 or syzygy_module(U)
    elems = {}
    for h, i, w in writings:
        s = syzygy_from_writing(U, h, i, w.quotients)
        elems[ModuleTerm(unit_exps(U.nvars, i), U.index_of(h) + 1, h.degree)] = s
    return MarkedSet(U1, elems)


def predicted_support(U: QuasiStableModule, i: int, head: ModuleTerm) -> List[ModuleTerm]:
    """Slots that may carry a nonzero coefficient in the syzygy of x_i*f_head.

    The head slot, plus x^eta f_g for each Pommaret term g with eta in the
    i-sliced cone of g of the right degree (these all lie outside U').
    """
    if i not in nonmultiplicative(head):
        raise ValueError(f"x{i} is multiplicative for {format_term(head)}")
    target = head.degree + 1
    out = [slot(U, head, unit_exps(U.nvars, i))]
    for g in U.pommaret_basis:
        top = min(i - 1, multiplicative_top(g))
        for e in terms_in_vars(U.nvars, target - g.degree, top):
            out.append(slot(U, g, e))
    return out


def forecast_exclusions(U: QuasiStableModule, i: int, head: ModuleTerm) -> List[ModuleTerm]:
    """Slots x^eta f_g of the predicted support for which x^eta*x^g is not x_i times a
    sous-escalier term (the exclusion test read literally; informational only)."""
    out = []
    for s in predicted_support(U, i, head)[1:]:
        g = U.pommaret_basis[s.comp - 1]
        prod = g.times(s.exps)
        if prod.exps[i] == 0:
            out.append(s)
            continue
        e = list(prod.exps)
        e[i] -= 1
        if U.contains(ModuleTerm(tuple(e), prod.comp, prod.shift)):
            out.append(s)
    return out


@dataclass
class Resolution:
    levels: List[MarkedSet]          # F, F^{d1}, F^{d2}, ...
    matrices: List[PolyMatrix]       # d0, d1, ...
    base_shifts: List[int]

    @property
    def length(self) -> int:
        return len(self.matrices) - 1

    def ranks(self) -> Dict[Tuple[int, int], int]:
        out: Dict[Tuple[int, int], int] = {}
        for t, M in enumerate(self.matrices):
            for s in M.col_shifts:
                out[(t, s)] = out.get((t, s), 0) + 1
        return out

    def betti(self) -> "BettiTable":
        return BettiTable(self.ranks())

    def is_complex(self) -> bool:
        return all(matrix_multiply(self.matrices[t - 1], self.matrices[t]).is_zero()
                   for t in range(1, len(self.matrices)))


def _matrix_of(level: MarkedSet, row_shifts: List[int]) -> PolyMatrix:
    cols = level.polys()
    heads = [(h.comp - 1, h.exps) for h in level.heads]
    M = PolyMatrix.from_columns(row_shifts, cols, heads)
    M.col_shifts = [h.degree for h in level.heads]
    return M


def u_resolution(F: MarkedSet, executor: Optional[Executor] = None) -> Resolution:
    v = is_marked_basis(F, executor)
    if not v:
        raise NotABasis(v.describe(F.U.m > 1), v.witness)
    levels = [F]
    mats = [_matrix_of(F, list(F.U.shifts))]
    cur = F
    while True:
        U1 = syzygy_module(cur.U)
        if not U1.pommaret_basis:
            break
        nxt = fundamental_syzygies(cur, executor, U1)
        mats.append(_matrix_of(nxt, [h.degree for h in cur.heads]))
        levels.append(nxt)
        cur = nxt
    return Resolution(levels, mats, list(F.U.shifts))


@dataclass(frozen=True)
class MinimalityVerdict:
    minimal: Optional[bool]
    witness: Optional[Tuple[int, int, int, object]] = None   # (t, row, col, constant), 0-based
    shortcut: Optional[bool] = None                            # "d1 is constant-free"
    non_unit_constants: bool = False

    def __bool__(self):
        return bool(self.minimal)

    def describe(self) -> str:
        if self.non_unit_constants and self.minimal is None:
            return "non-unit constants present; minimality undecided over this coefficient ring"
        if self.minimal:
            return "minimal"
        t, r, c, u = self.witness
        return f"not minimal: ∂_{t}[{r + 1},{c + 1}] = {_fmt_const(u)}"


def _fmt_const(u) -> str:
    if isinstance(u, ParamPoly):
        return str(u)
    return str(Fraction(u))


def constant_entries(M: PolyMatrix) -> List[Tuple[int, int, object]]:
    return sorted(M.constant_entries(), key=lambda x: (x[0], x[1]))


def is_minimal(res: Resolution) -> MinimalityVerdict:
    """Full scan of d_t (t >= 1) for nonzero constants, plus the d_1-only shortcut."""
    first = None
    non_unit = False
    for t in range(1, len(res.matrices)):
        for r, c, u in constant_entries(res.matrices[t]):
            if isinstance(u, ParamPoly) and not u.is_constant():
                non_unit = True
                continue
            if first is None:
                first = (t, r, c, u)
    shortcut = None
    if len(res.matrices) > 1:
        shortcut = not any(not (isinstance(u, ParamPoly) and not u.is_constant())
                           for _, _, u in constant_entries(res.matrices[1]))
    else:
        shortcut = True
    if first is None and non_unit:
        return MinimalityVerdict(None, None, shortcut, True)
    full = first is None
    if full != shortcut and not non_unit:
        raise AssertionError("full constant scan and first-map shortcut disagree")
    return MinimalityVerdict(full, first, shortcut, non_unit)


def propagation_holds(res: Resolution) -> bool:
    """If d_t is constant-free then so is d_{t+1}, for every t >= 1."""
    free = [not constant_entries(M) for M in res.matrices]
    return all(not free[t] or free[t + 1] for t in range(1, len(free) - 1))


@dataclass
class BettiTable:
    entries: Dict[Tuple[int, int], int]

    def __post_init__(self):
        self.entries = {k: v for k, v in self.entries.items() if v}

    def __getitem__(self, ij) -> int:
        return self.entries.get(ij, 0)

    def rows(self) -> List[Tuple[int, List[int]]]:
        """Rows indexed by j - i, columns by homological degree i."""
        if not self.entries:
            return []
        imax = max(i for i, _ in self.entries)
        lo = min(j - i for i, j in self.entries)
        hi = max(j - i for i, j in self.entries)
        return [(d, [self[(i, i + d)] for i in range(imax + 1)]) for d in range(lo, hi + 1)]

    def as_rows(self, first_row: int, ncols: int, nrows: int) -> List[List[int]]:
        return [[self[(i, i + first_row + r)] for i in range(ncols)] for r in range(nrows)]

    def __le__(self, other: "BettiTable") -> bool:
        return all(v <= other[k] for k, v in self.entries.items())

    def __eq__(self, other):
        return isinstance(other, BettiTable) and self.entries == other.entries

    def render(self, title: str = "") -> str:
        rows = self.rows()
        if not rows:
            return f"{title}: zero"
        ncols = len(rows[0][1])
        w = max([len(title)] + [len(str(d)) for d, _ in rows])
        cw = max([len(str(v)) for _, r in rows for v in r] + [len(str(ncols - 1))])
        head = title.rjust(w) + " |" + "".join(" " + str(i).rjust(cw) for i in range(ncols))
        lines = [head, "-" * len(head)]
        for d, r in rows:
            lines.append(str(d).rjust(w) + " |" + "".join(" " + str(v).rjust(cw) for v in r))
        return "\n".join(lines)


@dataclass
class MinimalResolution:
    matrices: List[PolyMatrix]
    base_shifts: List[int]
    cancellations: List[Tuple[int, int, int, object]] = field(default_factory=list)

    def betti(self) -> BettiTable:
        out: Dict[Tuple[int, int], int] = {}
        for t, M in enumerate(self.matrices):
            for s in M.col_shifts:
                out[(t, s)] = out.get((t, s), 0) + 1
        return BettiTable(out)

    def is_complex(self) -> bool:
        return all(matrix_multiply(self.matrices[t - 1], self.matrices[t]).is_zero()
                   for t in range(1, len(self.matrices)))


def _drop_row(M: PolyMatrix, r: int) -> PolyMatrix:
    ent = {(rr - (rr > r), c): p for (rr, c), p in M.entries.items() if rr != r}
    rs = M.row_shifts[:r] + M.row_shifts[r + 1:]
    return PolyMatrix(rs, M.col_shifts, ent)


def _drop_col(M: PolyMatrix, c: int) -> PolyMatrix:
    ent = {(r, cc - (cc > c)): p for (r, cc), p in M.entries.items() if cc != c}
    cs = M.col_shifts[:c] + M.col_shifts[c + 1:]
    return PolyMatrix(M.row_shifts, cs, ent)


def _cancel(M: PolyMatrix, r: int, c: int, u) -> PolyMatrix:
    nr, nc = M.shape
    colc = {rr: M[(rr, c)] for rr in range(nr) if M[(rr, c)]}
    ent = dict(M.entries)
    inv = 1 / Fraction(u)
    for cc in range(nc):
        if cc == c:
            continue
        a = M[(r, cc)]
        if not a:
            continue
        factor = a.scale(inv)
        for rr, p in colc.items():
            v = ent.get((rr, cc), Poly()) - factor * p
            if v:
                ent[(rr, cc)] = v
            else:
                ent.pop((rr, cc), None)
    return _drop_col(_drop_row(PolyMatrix(M.row_shifts, M.col_shifts, ent), r), c)


def minimize(res) -> Tuple[MinimalResolution, BettiTable]:
    """Cancel unit constants (smallest (t, row, col) first) until none remain."""
    mats = [PolyMatrix(M.row_shifts, M.col_shifts, M.entries) for M in res.matrices]
    done = []
    while True:
        hit = None
        for t in range(1, len(mats)):
            cs = [(r, c, u) for r, c, u in constant_entries(mats[t])
                  if not (isinstance(u, ParamPoly) and not u.is_constant())]
            if cs:
                r, c, u = cs[0]
                hit = (t, r, c, u)
                break
        if hit is None:
            break
        t, r, c, u = hit
        if isinstance(u, ParamPoly):
            u = u.constant_value()
        mats[t] = _cancel(mats[t], r, c, u)
        mats[t - 1] = _drop_col(mats[t - 1], r)
        if t + 1 < len(mats):
            mats[t + 1] = _drop_row(mats[t + 1], c)
        done.append(hit)
    while len(mats) > 1 and mats[-1].shape[1] == 0:
        mats.pop()
    mr = MinimalResolution(mats, list(res.base_shifts), done)
    return mr, mr.betti()


@dataclass(frozen=True)
class Certificate:
    status: str  # "Certified" or "Unknown"
    reason: str

    def __bool__(self):
        return self.status == "Certified"


def componentwise_certificate(F: MarkedSet) -> Certificate:
    if not F.is_rational():
        return Certificate("Unknown", "coefficients are not rational numbers")
    res = u_resolution(F)
    v = is_minimal(res)
    if v.minimal:
        return Certificate("Certified", "the U-resolution is minimal")
    U = F.U
    if U.is_stable() and len({h.degree for h in U.pommaret_basis}) == 1:
        return Certificate("Certified", "U is stable and the basis lives in a single degree (linear resolution)")
    return Certificate("Unknown", f"U-resolution {v.describe()}; the converse direction is not decidable here")


def groebner_obstruction(F: MarkedSet) -> bool:
    """True when F cannot be a Groebner basis with initial ideal U for any term order."""
    U = F.U
    if U.m != 1 or U.is_stable() or not F.is_rational():
        return False
    return bool(is_minimal(u_resolution(F)).minimal)


def support_contained(res: Resolution) -> bool:
    """Every syzygy at every level lies inside its predicted support."""
    for t in range(1, len(res.levels)):
        parent = res.levels[t - 1].U
        level = res.levels[t]
        for h in level.heads:
            i = max(j for j, e in enumerate(h.exps) if e)
            src = parent.pommaret_basis[h.comp - 1]
            allowed = set(predicted_support(parent, i, src))
            if not level[h].support() <= allowed:
                return False
    return True


def format_matrix(M: PolyMatrix, mark_heads: bool = True) -> str:
    nr, nc = M.shape
    cells = [[format_poly(M[(r, c)], False) for c in range(nc)] for r in range(nr)]
    if mark_heads:
        for c, h in enumerate(M.heads or []):
            if h is not None and h[0] < nr:
                cells[h[0]][c] = format_marked(M[(h[0], c)], ModuleTerm(h[1]))
    widths = [max((len(cells[r][c]) for r in range(nr)), default=1) for c in range(nc)]
    return "\n".join("[ " + "  ".join(cells[r][c].ljust(widths[c]) for c in range(nc)) + " ]"
                     for r in range(nr))
