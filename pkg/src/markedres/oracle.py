"""Independent exact linear-algebra checks on degreewise pieces of modules."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb, lcm
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from .polyring import ModuleTerm, Poly, iteration_key, terms_of_degree
from .quasistable import QuasiStableModule


class DirectSumFails(ValueError):
    pass


def bareiss_echelon(rows: List[List[int]]) -> List[List[int]]:
    """Fraction-free row echelon form of an integer matrix (zero rows dropped)."""
    m = [list(r) for r in rows if any(r)]
    if not m:
        return []
    ncols = len(m[0])
    prev = 1
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][c]), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        p = m[r][c]
        for i in range(r + 1, len(m)):
            a = m[i][c]
            row_i, row_r = m[i], m[r]
            m[i] = [(p * row_i[j] - a * row_r[j]) // prev for j in range(ncols)]
        prev = p
        r += 1
        if r == len(m):
            break
    return [row for row in m[:r]]


def _to_int_rows(rows: Sequence[Sequence[Fraction]]) -> List[List[int]]:
    out = []
    for row in rows:
        den = 1
        for v in row:
            den = lcm(den, Fraction(v).denominator)
        out.append([int(Fraction(v) * den) for v in row])
    return out


def rref(rows: Sequence[Sequence[Fraction]]) -> Tuple[List[List[Fraction]], List[int]]:
    """Reduced row echelon form over Q via Bareiss elimination, with pivot columns."""
    ech = bareiss_echelon(_to_int_rows(rows))
    red = [[Fraction(v) for v in r] for r in ech]
    pivots = []
    for i, r in enumerate(red):
        c = next(j for j, v in enumerate(r) if v)
        pivots.append(c)
        p = r[c]
        red[i] = [v / p for v in r]
    for i in range(len(red) - 1, -1, -1):
        c = pivots[i]
        for k in range(i):
            f = red[k][c]
            if f:
                red[k] = [a - f * b for a, b in zip(red[k], red[i])]
    return red, pivots


def kernel(rows: Sequence[Sequence[Fraction]], ncols: int) -> List[List[Fraction]]:
    """Basis of {v : row . v = 0 for every row}."""
    red, piv = rref(rows) if rows else ([], [])
    free = [j for j in range(ncols) if j not in piv]
    out = []
    for f in free:
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for r, p in zip(red, piv):
            v[p] = -r[f]
        out.append(v)
    return out


@dataclass
class DegreewiseSpan:
    degree: int
    terms: List[ModuleTerm]
    rows: List[List[Fraction]]  # reduced echelon form

    @property
    def dim(self) -> int:
        return len(self.rows)

    def polys(self) -> List[Poly]:
        return [Poly({t: v for t, v in zip(self.terms, r) if v}) for r in self.rows]

    def contains(self, p: Poly) -> bool:
        idx = {t: i for i, t in enumerate(self.terms)}
        v = [Fraction(0)] * len(self.terms)
        for t, c in p.items():
            if t not in idx:
                return False
            v[idx[t]] = Fraction(c)
        return len(rref(self.rows + [v])[0]) == self.dim


def all_terms(nvars: int, shifts: Sequence[int], s: int) -> List[ModuleTerm]:
    out = []
    for k, d in enumerate(shifts, start=1):
        out.extend(ModuleTerm(e, k, d) for e in terms_of_degree(nvars, s - d))
    return sorted(out, key=iteration_key)


def _vectorize(polys: Sequence[Poly], terms: List[ModuleTerm]) -> List[List[Fraction]]:
    idx = {t: i for i, t in enumerate(terms)}
    rows = []
    for p in polys:
        v = [Fraction(0)] * len(terms)
        for t, c in p.items():
            v[idx[t]] = Fraction(c)
        rows.append(v)
    return rows


def _multiples(generators: Sequence[Poly], nvars: int, s: int) -> List[Poly]:
    out = []
    for g in generators:
        if not g:
            continue
        d = g.degree()
        for e in terms_of_degree(nvars, s - d):
            out.append(g.shift_by(e))
    return out


def component_basis(generators: Sequence[Poly], s: int, nvars: int,
                    shifts: Optional[Sequence[int]] = None,
                    terms: Optional[List[ModuleTerm]] = None) -> DegreewiseSpan:
    """Degree-``s`` piece of the module generated by homogeneous ``generators``."""
    shifts = list(shifts) if shifts is not None else [0]
    terms = terms if terms is not None else all_terms(nvars, shifts, s)
    rows = _vectorize(_multiples(generators, nvars, s), terms)
    red, _ = rref(rows) if rows else ([], [])
    return DegreewiseSpan(s, terms, red)


def direct_sum_check(F, s: int) -> bool:
    """(F)_s + <N(U)_s> equals the whole degree-s piece, with complementary dimensions."""
    U: QuasiStableModule = F.U
    terms = all_terms(U.nvars, U.shifts, s)
    span = component_basis(F.polys(), s, U.nvars, U.shifts, terms)
    N = U.sous_escalier(s)
    if span.dim + len(N) != len(terms):
        return False
    nrows = _vectorize([Poly.term(t) for t in N], terms)
    return len(rref(span.rows + nrows)[0]) == len(terms)


def intersect_spans(spans: Sequence[DegreewiseSpan]) -> DegreewiseSpan:
    terms = spans[0].terms
    ncols = len(terms)
    perp: List[List[Fraction]] = []
    for sp in spans:
        if sp.terms != terms:
            raise ValueError("spans over different term lists")
        perp.extend(kernel(sp.rows, ncols))
    rows = kernel(perp, ncols) if perp else [[Fraction(int(i == j)) for j in range(ncols)] for i in range(ncols)]
    red, _ = rref(rows) if rows else ([], [])
    return DegreewiseSpan(spans[0].degree, terms, red)


def intersect_by_degree(ideals: Sequence[Sequence[Poly]], s: int, nvars: int,
                        shifts: Optional[Sequence[int]] = None) -> DegreewiseSpan:
    shifts = list(shifts) if shifts is not None else [0]
    terms = all_terms(nvars, shifts, s)
    return intersect_spans([component_basis(g, s, nvars, shifts, terms) for g in ideals])


def marked_basis_from_spans(U: QuasiStableModule, span_at: Callable[[int], DegreewiseSpan]):
    """The U-marked set whose elements lie in the given degreewise spans."""
    from .marked import MarkedSet

    elems: Dict[ModuleTerm, Poly] = {}
    for s in sorted({h.degree for h in U.pommaret_basis}):
        sp = span_at(s)
        inside = U.terms_in(s)
        outside = U.sous_escalier(s)
        order = inside + outside
        pos = {t: i for i, t in enumerate(sp.terms)}
        rows = [[r[pos[t]] for t in order] for r in sp.rows]
        red, piv = rref(rows) if rows else ([], [])
        if piv != list(range(len(inside))):
            raise DirectSumFails(f"degree {s}: span is not complementary to the sous-escalier "
                                 f"(dim {len(piv)}, expected {len(inside)})")
        for h in U.pommaret_basis:
            if h.degree != s:
                continue
            r = red[inside.index(h)]
            elems[h] = Poly({t: v for t, v in zip(order, r) if v})
    F = MarkedSet(U, elems)
    # complementarity at the Pommaret degrees alone does not force it one degree up
    from .marked import is_marked_basis
    v = is_marked_basis(F)
    if not v:
        h, i, _ = v.witness
        raise DirectSumFails(f"degree {h.degree + 1}: spans leave the U-chart (x{i} times the element with head "
                             f"{h} does not reduce to zero)")
    return F


def quotient_hilbert_function(generators: Sequence[Poly], degrees: Sequence[int], nvars: int) -> List[int]:
    out = []
    for s in degrees:
        total = comb(s + nvars - 1, nvars - 1) if s >= 0 else 0
        out.append(total - component_basis(generators, s, nvars).dim)
    return out


def module_hilbert_function(F, s: int) -> int:
    """dim (F)_s for a marked set F."""
    U = F.U
    return component_basis(F.polys(), s, U.nvars, U.shifts).dim


def free_rank_in_degree(shifts: Sequence[int], nvars: int, s: int) -> int:
    return sum(comb(s - d + nvars - 1, nvars - 1) for d in shifts if s - d >= 0)
