"""Random quasi-stable modules and random marked bases for property tests."""
from __future__ import annotations

import random
from fractions import Fraction
from typing import List, Sequence

from hypothesis import strategies as st

from markedres.marked import MarkedSet
from markedres.oracle import DirectSumFails, component_basis, marked_basis_from_spans
from markedres.polyring import ModuleTerm, Poly, terms_of_degree, unit_exps
from markedres.quasistable import QuasiStableModule, minimal_generators


def quasi_stable_closure(gens: Sequence[ModuleTerm]) -> List[ModuleTerm]:
    """Close under x^a -> x^a * x_j^{a_i} / x_i^{a_i} (j > i); the result is quasi-stable."""
    seen = set(gens)
    todo = list(gens)
    while todo:
        t = todo.pop()
        for i, a in enumerate(t.exps):
            if not a:
                continue
            for j in range(i + 1, len(t.exps)):
                e = list(t.exps)
                e[i] = 0
                e[j] += a
                u = ModuleTerm(tuple(e), t.comp, t.shift)
                if u not in seen:
                    seen.add(u)
                    todo.append(u)
    return minimal_generators(seen)


@st.composite
def monomial_lists(draw, nvars=None, max_deg=3, max_gens=3, comps=1):
    n1 = nvars or draw(st.integers(2, 4))
    out = []
    for _ in range(draw(st.integers(1, max_gens))):
        k = draw(st.integers(1, comps))
        d = draw(st.integers(1, max_deg))
        terms = terms_of_degree(n1, d)
        out.append(ModuleTerm(draw(st.sampled_from(terms)), k))
    return n1, out


@st.composite
def quasi_stable_modules(draw, nvars=None, max_deg=3, max_gens=3, comps=1):
    n1, gens = draw(monomial_lists(nvars, max_deg, max_gens, comps))
    m = max(g.comp for g in gens)
    shifts = [draw(st.integers(0, 1)) for _ in range(m)]
    gens = [ModuleTerm(g.exps, g.comp, shifts[g.comp - 1]) for g in gens]
    return QuasiStableModule(quasi_stable_closure(gens), n1, shifts)


def random_quasi_stable(rng: random.Random, nvars: int, max_deg: int = 3, max_gens: int = 3) -> QuasiStableModule:
    gens = []
    for _ in range(rng.randint(1, max_gens)):
        d = rng.randint(1, max_deg)
        gens.append(ModuleTerm(rng.choice(terms_of_degree(nvars, d))))
    return QuasiStableModule(quasi_stable_closure(gens), nvars)


def _substituted_term(t: ModuleTerm, forms: List[Poly]) -> Poly:
    p = Poly.term(ModuleTerm(unit_exps(len(t.exps))))
    for i, a in enumerate(t.exps):
        for _ in range(a):
            p = p * forms[i]
    return p.with_module(t.comp, t.shift)


def random_marked_basis(U: QuasiStableModule, rng: random.Random, tries: int = 4) -> MarkedSet:
    """Random point of the U-chart: random tails on the minimal generators when the
    resulting ideal stays in the chart, otherwise a random coordinate change of U."""
    n1 = U.nvars
    for _ in range(tries):
        gens = [Poly.term(h) + Poly({t: Fraction(rng.randint(-2, 2)) for t in U.sous_escalier(h.degree)
                                     if rng.random() < 0.4})
                for h in U.minimal_basis]
        try:
            return marked_basis_from_spans(U, lambda s: component_basis(gens, s, n1, U.shifts))
        except DirectSumFails:
            continue
    return transformed_basis(U, rng)


def transformed_basis(U: QuasiStableModule, rng: random.Random, density: float = 0.6,
                      bound: int = 3) -> MarkedSet:
    """Marked basis of g(U) for a random g: x_i -> c_i x_i + sum_{j<i} c_ij x_j.

    Substituted terms are smaller in degree reverse lexicographic order, so the
    initial ideal of g(U) stays U and g(U) lies in the U-chart.
    """
    n1 = U.nvars
    forms = []
    for i in range(n1):
        terms = {ModuleTerm(unit_exps(n1, i)): Fraction(rng.choice([1, -1, 2]))}
        for j in range(i):
            if rng.random() < density:
                c = rng.randint(-bound, bound)
                if c:
                    terms[ModuleTerm(unit_exps(n1, j))] = Fraction(c)
        forms.append(Poly(terms))
    gens = [_substituted_term(t, forms) for t in U.minimal_basis]
    return marked_basis_from_spans(U, lambda s: component_basis(gens, s, n1, U.shifts))


def random_marked_set(U: QuasiStableModule, rng: random.Random, bound: int = 2) -> MarkedSet:
    """Random tails: usually not a basis."""
    elems = {}
    for h in U.pommaret_basis:
        tail = {t: Fraction(rng.randint(-bound, bound)) for t in U.sous_escalier(h.degree)
                if rng.random() < 0.5}
        elems[h] = Poly.term(h) + Poly(tail)
    return MarkedSet(U, elems)
