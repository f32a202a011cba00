"""Worked examples used by the CLI, the reproduction pipeline and the tests."""
from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from typing import Dict, List, Sequence

from .marked import MarkedSet
from .polyring import ModuleTerm, ParamPoly, Poly, parse_poly
from .quasistable import QuasiStableModule


def _module(nvars: int, gens: Sequence[str], shifts: Sequence[int] = (0,)) -> QuasiStableModule:
    terms = []
    for g in gens:
        p = parse_poly(g, nvars, list(shifts))
        (t,) = p.support()
        terms.append(t)
    return QuasiStableModule(terms, nvars, list(shifts))


def marked(U: QuasiStableModule, polys: Sequence[str]) -> MarkedSet:
    """Marked set from full polynomials listed in Pommaret-basis order."""
    ps = [parse_poly(s, U.nvars, U.shifts) for s in polys]
    if len(ps) != len(U.pommaret_basis):
        raise ValueError(f"expected {len(U.pommaret_basis)} polynomials, got {len(ps)}")
    return MarkedSet(U, dict(zip(U.pommaret_basis, ps)))


# -- three variables --------------------------------------------------------

def J_qs() -> QuasiStableModule:
    """(x2^2, x1^2): quasi-stable, not stable."""
    return _module(3, ["x2^2", "x1^2"])


def J_stable() -> QuasiStableModule:
    """(x2^2, x2*x1, x1^3): stable."""
    return _module(3, ["x2^2", "x2*x1", "x1^3"])


NOT_QUASI_STABLE = ["x1^2", "x0^2"]


def family_F(a) -> MarkedSet:
    """One-parameter family over (x2^2, x1^2); a basis exactly when a = -1."""
    U = J_qs()
    if isinstance(a, (int, Fraction)):
        a = Fraction(a)
    h1, h2, h3 = U.pommaret_basis
    f1 = parse_poly("x2^2 - x2*x1 - x2*x0 + x1*x0", 3)
    f2 = parse_poly("x1^2", 3) + Poly.term(ModuleTerm((0, 1, 1)), a)
    f3 = parse_poly("x2*x1^2 - 2*x2*x1*x0 + 2*x1*x0^2", 3)
    return MarkedSet(U, {h1: f1, h2: f2, h3: f3})


def F_I() -> MarkedSet:
    return family_F(-1)


def G_K() -> MarkedSet:
    return marked(J_qs(), ["x2^2 - 1/2*x2*x1 - x2*x0",
                           "x1^2 - 1/2*x2*x1 - x1*x0",
                           "x2*x1^2 - 2*x2*x1*x0"])


def F_I_stable() -> MarkedSet:
    return marked(J_stable(), ["x2^2 - x1^2 - x2*x0 + x1*x0",
                               "x2*x1 - x1^2",
                               "x1^3 - 2*x1^2*x0 + 2*x1*x0^2"])


def G_K_stable() -> MarkedSet:
    return marked(J_stable(), ["x2^2 - x1^2 - x2*x0 + x1*x0",
                               "x2*x1 - 2*x1^2 + 2*x1*x0",
                               "x1^3 - 3*x1^2*x0 + 2*x1*x0^2"])


def direct_sum_module() -> QuasiStableModule:
    """(x2^2, x1^2) e1 + (x2^2, x2*x1, x1^3) e2."""
    return _module(3, ["x2^2*e1", "x1^2*e1", "x2^2*e2", "x2*x1*e2", "x1^3*e2"], (0, 0))


def _lift(F: MarkedSet, comp: int, U: QuasiStableModule) -> Dict[ModuleTerm, Poly]:
    out = {}
    for h in F.heads:
        p = F[h].with_module(comp, U.shifts[comp - 1])
        out[ModuleTerm(h.exps, comp, U.shifts[comp - 1])] = p
    return out


def direct_sum_basis(first: MarkedSet, second: MarkedSet) -> MarkedSet:
    U = direct_sum_module()
    elems = _lift(first, 1, U)
    elems.update(_lift(second, 2, U))
    return MarkedSet(U, elems)


def M_direct() -> MarkedSet:
    return direct_sum_basis(F_I(), F_I_stable())


def N_direct() -> MarkedSet:
    return direct_sum_basis(G_K(), G_K_stable())


def product_module() -> QuasiStableModule:
    """x2^2*(x2^2, x1^2) + x1^2*(x2^2, x2*x1, x1^3)."""
    return _module(3, ["x2^4", "x2^2*x1^2", "x2*x1^3", "x1^5"])


def F_I_product() -> MarkedSet:
    U = product_module()
    tails = {"x2^4": "", "x2^2*x1^2": "", "x2*x1^3": "x1^4", "x2^3*x1^2": "", "x1^5": ""}
    return _from_tail_table(U, tails)


def F_K_product() -> MarkedSet:
    U = product_module()
    tails = {"x2^4": "-x1^4", "x2^2*x1^2": "x1^4", "x2*x1^3": "x2^3*x1", "x2^3*x1^2": "", "x1^5": ""}
    return _from_tail_table(U, tails)


def _from_tail_table(U: QuasiStableModule, tails: Dict[str, str]) -> MarkedSet:
    elems = {}
    for head, tail in tails.items():
        h = parse_poly(head, U.nvars, U.shifts)
        (ht,) = h.support()
        elems[ht] = h + (parse_poly(tail, U.nvars, U.shifts) if tail else Poly())
    return MarkedSet(U, elems)


def complete_intersection() -> QuasiStableModule:
    """(x2, x1^2)."""
    return _module(3, ["x2", "x1^2"])


# -- four variables ---------------------------------------------------------

def linear_example() -> QuasiStableModule:
    """(x3, x2^2, x2*x1): stable, resolution of length 2."""
    return _module(4, ["x3", "x2^2", "x2*x1"])


def depth_one_example() -> QuasiStableModule:
    """(x3^2, x3*x2)."""
    return _module(4, ["x3^2", "x3*x2"])


def curves_module() -> QuasiStableModule:
    """(x3^2, x3*x2, x2^3, x3*x1^2), a chart of the Hilbert scheme of 3t+2 in P^3."""
    return _module(4, ["x3^2", "x3*x2", "x2^3", "x3*x1^2"])


CURVE_IDEALS: Dict[str, List[List[str]]] = {
    # plane cubic plus two points
    "I1": [["x3", "x2^3 + x1^3 - x0^3"],
           ["x3 - x0", "x2 + x0", "x1 - x0"],
           ["x3 - x0", "x2 + x0", "x1 + x0"]],
    # twisted cubic plus a point
    "I2": [["x3^2 - x2*x0", "x3*x2 - x1*x0", "x3*x1 - x2^2"],
           ["x3", "x2 - x0", "x1"]],
    # plane conic plus a line
    "I3": [["x3", "x2^2 - x1^2 + x0^2"],
           ["x3 + x0", "x2 - x0"]],
}


def curve_components(name: str) -> List[List[Poly]]:
    return [[parse_poly(g, 4) for g in comp] for comp in CURVE_IDEALS[name]]


@lru_cache(maxsize=None)
def curve_basis(name: str) -> MarkedSet:
    """Marked basis over ``curves_module()`` of the intersection ideal ``name``."""
    from .oracle import intersect_by_degree, marked_basis_from_spans

    comps = curve_components(name)
    U = curves_module()
    return marked_basis_from_spans(U, lambda s: intersect_by_degree(comps, s, 4))


def symbolic_a() -> ParamPoly:
    return ParamPoly.var("a", -1)
