"""Pommaret cones and quasi-stable monomial modules."""
from __future__ import annotations

import heapq
from dataclasses import dataclass, field
from functools import lru_cache
from math import comb
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .polyring import ModuleTerm, format_term, iteration_key, max_var, min_var, terms_of_degree


class NotQuasiStable(ValueError):
    def __init__(self, msg: str, witness=None):
        super().__init__(msg)
        self.witness = witness


class DegreeCapExceeded(NotQuasiStable):
    pass


def multiplicative_top(t: ModuleTerm) -> int:
    """Largest multiplicative variable index of ``t`` (all variables for the unit term)."""
    m = min_var(t.exps)
    return len(t.exps) - 1 if m is None else m


def nonmultiplicative(t: ModuleTerm) -> List[int]:
    return list(range(multiplicative_top(t) + 1, len(t.exps)))


def cone_contains(generator: ModuleTerm, t: ModuleTerm, slice: Optional[int] = None) -> bool:
    """``t`` in the Pommaret cone of ``generator`` (or its ``slice``-sliced cone)."""
    if not generator.divides(t):
        return False
    q = t.quotient(generator)
    top = max_var(q)
    if top is None:
        return True
    bound = multiplicative_top(generator)
    if slice is not None:
        bound = min(bound, slice - 1)
    return top <= bound


def minimal_generators(gens: Iterable[ModuleTerm]) -> List[ModuleTerm]:
    gens = sorted(set(gens), key=lambda t: (t.comp, t.tdeg) + t.exps)
    out: List[ModuleTerm] = []
    for g in gens:
        if not any(h.divides(g) for h in out):
            out.append(g)
    return sorted(out, key=iteration_key)


def _in_module(t: ModuleTerm, gens: Sequence[ModuleTerm]) -> bool:
    return any(g.divides(t) for g in gens)


@dataclass(frozen=True)
class QSVerdict:
    quasi_stable: bool
    witness: Optional[Tuple[ModuleTerm, int, int]] = None  # (generator, i, j)

    def __bool__(self):
        return self.quasi_stable

    def describe(self) -> str:
        if self.quasi_stable:
            return "quasi-stable"
        g, i, j = self.witness
        return (f"not quasi-stable: no power of x{j} times {format_term(g, g.comp != 1)}/x{i}^{g.exps[i]}"
                f" lies in the module")


def saturation_test(gens: Iterable[ModuleTerm]) -> QSVerdict:
    """Generator-level test: for every generator, every i with a_i > 0 and j > i,
    some x_j^s * x^a / x_i^{a_i} lies in the module (s up to the max generator degree)."""
    mins = minimal_generators(gens)
    if not mins:
        return QSVerdict(True)
    smax = max(g.tdeg for g in mins)
    for g in mins:
        comp_gens = [h for h in mins if h.comp == g.comp]
        nv = len(g.exps)
        for i in range(nv):
            if not g.exps[i]:
                continue
            base = list(g.exps)
            base[i] = 0
            for j in range(i + 1, nv):
                e = list(base)
                e[j] += smax
                if not _in_module(ModuleTerm(tuple(e), g.comp, g.shift), comp_gens):
                    return QSVerdict(False, (g, i, j))
    return QSVerdict(True)


def _strip(t: ModuleTerm, gens: Sequence[ModuleTerm]) -> ModuleTerm:
    """Generator of the Pommaret cone containing ``t`` (t in the module)."""
    while True:
        m = min_var(t.exps)
        if m is None:
            return t
        e = list(t.exps)
        e[m] -= 1
        s = ModuleTerm(tuple(e), t.comp, t.shift)
        if not _in_module(s, gens):
            return t
        t = s


def complete(gens: Iterable[ModuleTerm], degree_cap: int) -> List[ModuleTerm]:
    """Pommaret completion; raises DegreeCapExceeded if an element passes the cap."""
    mins = minimal_generators(gens)
    heap = [(iteration_key(g), g) for g in mins]
    heapq.heapify(heap)
    basis = set()
    while heap:
        _, c = heapq.heappop(heap)
        g = _strip(c, mins)
        if g in basis:
            continue
        if g.tdeg > degree_cap:
            raise DegreeCapExceeded(
                f"Pommaret completion passed degree cap {degree_cap} at {format_term(g, g.comp != 1)}", g)
        basis.add(g)
        for i in nonmultiplicative(g):
            t = g.times_var(i)
            heapq.heappush(heap, (iteration_key(t), t))
    return sorted(basis, key=iteration_key)


def default_degree_cap(gens: Sequence[ModuleTerm]) -> int:
    if not gens:
        return 0
    n = len(gens[0].exps) - 1
    maxdeg = max(g.tdeg for g in gens)
    return 2 * maxdeg + n


def _lcm_degree(gens: Sequence[ModuleTerm]) -> int:
    best = 0
    comps = {g.comp for g in gens}
    for k in comps:
        cg = [g for g in gens if g.comp == k]
        best = max(best, sum(max(g.exps[i] for g in cg) for i in range(len(cg[0].exps))))
    return best


def is_quasi_stable(gens: Iterable[ModuleTerm], cross_check: bool = False,
                    degree_cap: Optional[int] = None) -> QSVerdict:
    gens = list(gens)
    v = saturation_test(gens)
    if cross_check:
        cap = degree_cap if degree_cap is not None else default_degree_cap(minimal_generators(gens))
        try:
            complete(gens, cap)
            finite = True
        except DegreeCapExceeded:
            finite = False
        if finite != bool(v) and not (bool(v) and degree_cap is not None):
            raise AssertionError("saturation test and bounded completion disagree")
    return v


@dataclass
class NumericInvariants:
    n: int
    g_table: Dict[Tuple[int, int], int]
    D: int
    reg: int
    pdim: int
    ranks: Dict[Tuple[int, int], int]          # direct count, authoritative
    ranks_formula: Dict[Tuple[int, int], int]  # closed formula, summing q = 1..n-i
    discrepancies: Dict[Tuple[int, int], Tuple[int, int]] = field(default_factory=dict)


class QuasiStableModule:
    """Monomial submodule of R^m(-d) given by term generators, with its Pommaret basis.

    ``nvars`` is n+1 (variables x_0..x_n); ``shifts`` lists d_1..d_m.
    """

    def __init__(self, gens: Iterable[ModuleTerm], nvars: int, shifts: Optional[Sequence[int]] = None,
                 degree_cap: Optional[int] = None):
        gens = list(gens)
        self.nvars = nvars
        self.n = nvars - 1
        if shifts is None:
            shifts = [0] * max([g.comp for g in gens] + [1])
        self.shifts = list(shifts)
        fixed = []
        for g in gens:
            if len(g.exps) != nvars:
                raise ValueError(f"term {g} has {len(g.exps)} exponents, expected {nvars}")
            if not 1 <= g.comp <= len(self.shifts):
                raise ValueError(f"component e{g.comp} outside 1..{len(self.shifts)}")
            fixed.append(ModuleTerm(g.exps, g.comp, self.shifts[g.comp - 1]))
        self.minimal_basis: List[ModuleTerm] = minimal_generators(fixed)
        verdict = saturation_test(self.minimal_basis)
        if not verdict:
            raise NotQuasiStable(verdict.describe(), verdict.witness)
        cap = degree_cap
        if cap is None:
            cap = max(default_degree_cap(self.minimal_basis), _lcm_degree(self.minimal_basis) + self.n) \
                if self.minimal_basis else 0
        self.degree_cap = cap
        self.pommaret_basis: List[ModuleTerm] = complete(self.minimal_basis, cap)
        self._pset = frozenset(self.pommaret_basis)
        self._index = {t: i for i, t in enumerate(self.pommaret_basis)}
        self.invariants = self._invariants()

    # basic queries ----------------------------------------------------------
    @property
    def m(self) -> int:
        return len(self.shifts)

    def index_of(self, t: ModuleTerm) -> int:
        return self._index[t]

    def contains(self, t: ModuleTerm) -> bool:
        return _in_module(t, self.minimal_basis)

    def is_stable(self) -> bool:
        return set(self.pommaret_basis) == set(self.minimal_basis)

    def cone_generator(self, t: ModuleTerm) -> Optional[ModuleTerm]:
        """Pommaret basis element whose cone holds ``t``, or None if t is outside U."""
        return _cone_gen_cached(self, t)

    def sous_escalier(self, s: int) -> List[ModuleTerm]:
        out = []
        for k, d in enumerate(self.shifts, start=1):
            for e in terms_of_degree(self.nvars, s - d):
                t = ModuleTerm(e, k, d)
                if not self.contains(t):
                    out.append(t)
        return sorted(out, key=iteration_key)

    def terms_in(self, s: int) -> List[ModuleTerm]:
        out = []
        for k, d in enumerate(self.shifts, start=1):
            for e in terms_of_degree(self.nvars, s - d):
                t = ModuleTerm(e, k, d)
                if self.contains(t):
                    out.append(t)
        return sorted(out, key=iteration_key)

    def cone_terms(self, p: ModuleTerm, s: int, slice: Optional[int] = None) -> List[ModuleTerm]:
        """Degree-``s`` part of the (sliced) cone of ``p``."""
        top = multiplicative_top(p)
        if slice is not None:
            top = min(top, slice - 1)
        from .polyring import terms_in_vars
        return [p.times(e) for e in terms_in_vars(self.nvars, s - p.degree, top)]

    def truncation(self, s: int) -> "QuasiStableModule":
        gens = []
        for p in self.pommaret_basis:
            gens.extend(self.cone_terms(p, s) if p.degree < s else [p])
        return QuasiStableModule(gens, self.nvars, self.shifts)

    def _invariants(self) -> NumericInvariants:
        n = self.n
        g: Dict[Tuple[int, int], int] = {}
        for p in self.pommaret_basis:
            q = multiplicative_top(p)
            g[(p.degree, q)] = g.get((p.degree, q), 0) + 1
        D = min((q for (_, q) in g), default=n)
        reg = max((p.degree for p in self.pommaret_basis), default=0)
        direct: Dict[Tuple[int, int], int] = {}
        formula: Dict[Tuple[int, int], int] = {}
        for (h, q), cnt in g.items():
            for i in range(0, n - q + 1):
                direct[(i, i + h)] = direct.get((i, i + h), 0) + comb(n - q, i) * cnt
                if 1 <= q <= n - i:
                    formula[(i, i + h)] = formula.get((i, i + h), 0) + comb(n - q, i) * cnt
        direct = {k: v for k, v in direct.items() if v}
        formula = {k: v for k, v in formula.items() if v}
        disc = {k: (formula.get(k, 0), direct.get(k, 0))
                for k in set(direct) | set(formula) if formula.get(k, 0) != direct.get(k, 0)}
        return NumericInvariants(n, g, D, reg, n - D, direct, formula, disc)

    def reordered(self, order: Sequence[ModuleTerm]) -> "QuasiStableModule":
        """Same module with its Pommaret basis listed in ``order``."""
        if sorted(order) != sorted(self.pommaret_basis):
            raise ValueError("order is not a permutation of the Pommaret basis")
        new = object.__new__(QuasiStableModule)
        new.__dict__.update(self.__dict__)
        new.pommaret_basis = list(order)
        new._index = {t: i for i, t in enumerate(new.pommaret_basis)}
        return new

    def __repr__(self):
        return f"QuasiStableModule({', '.join(format_term(t, self.m > 1) for t in self.minimal_basis)})"


@lru_cache(maxsize=None)
def _cone_gen_cached(U: QuasiStableModule, t: ModuleTerm) -> Optional[ModuleTerm]:
    if not U.contains(t):
        return None
    p = _strip(t, U.minimal_basis)
    return p if p in U._pset else None


def is_stable(U: QuasiStableModule) -> bool:
    return U.is_stable()


def pommaret_basis(U: QuasiStableModule) -> List[ModuleTerm]:
    return list(U.pommaret_basis)


def sous_escalier(U: QuasiStableModule, s: int) -> List[ModuleTerm]:
    return U.sous_escalier(s)


def numeric_invariants(U: QuasiStableModule) -> NumericInvariants:
    return U.invariants


def ideal(nvars: int, *terms: Tuple[int, ...]) -> QuasiStableModule:
    """Shorthand for a quasi-stable ideal from exponent tuples."""
    return QuasiStableModule([ModuleTerm(tuple(t)) for t in terms], nvars)
