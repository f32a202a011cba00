from __future__ import annotations

import json
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from helpers import random_marked_basis, random_marked_set, random_quasi_stable
from markedres.corpus import (F_I, G_K, J_qs, J_stable, complete_intersection, curve_basis, curves_module,
                              family_F, linear_example)
from markedres.marked import MarkedSet, is_marked_basis
from markedres.polyring import ModuleTerm, ParamPoly, param_name
from markedres.quasistable import nonmultiplicative
from markedres.scheme import (SMALL_STYLES, constructive_containment, evaluate_point,
                              generic_chain, latex_entries, latex_marked_set, marked_scheme_ideal,
                              minimality_locus_ideal, point_values, resolution_scheme_ideals, substitute_chain,
                              substitution_map, syzygy_scheme_ideal)
from markedres.syzres import is_minimal, predicted_support, syzygy_module, u_resolution


def V(name):
    fam, _, idx = name.partition("_")
    return ParamPoly.var(fam, int(idx))


# -- the complete intersection (x2, x1^2) ----------------------------------------------

def test_complete_intersection_parameters_and_empty_scheme():
    U = complete_intersection()
    ch = generic_chain(U, SMALL_STYLES)
    assert [len(g.params) for g in ch] == [4, 5]
    P = marked_scheme_ideal(U, SMALL_STYLES[0])
    assert P.is_empty
    assert "affine space of dimension 4" in P.describe()


def test_complete_intersection_substitution_map():
    # derived by hand: x2*F2 = F2*F1 + (c1*x1 + c2*x0)*F2, entries read as -b*term
    ch = generic_chain(complete_intersection(), SMALL_STYLES)
    sm = substitution_map(ch[0], ch[1])
    got = {param_name(k): v for k, v in sm.values.items()}
    assert got == {"b_1": ParamPoly.const(1), "b_2": -V("c_3"), "b_3": -V("c_4"), "b_4": V("c_1"),
                   "b_5": V("c_2")}
    assert not sm.outside_support


def test_complete_intersection_rendering():
    ch = generic_chain(complete_intersection(), SMALL_STYLES)
    assert latex_marked_set(ch[0]) == [r"\uwave{x_{2}}-c_{1}x_{1}-c_{2}x_{0}",
                                       r"\uwave{x_{1}^{2}}-c_{3}x_{1}x_{0}-c_{4}x_{0}^{2}"]
    assert latex_entries(ch[1]) == [[r"-b_{1}x_{1}^{2}-b_{2}x_{1}x_{0}-b_{3}x_{0}^{2}"],
                                    [r"\uwave{x_{2}}-b_{4}x_{1}-b_{5}x_{0}"]]


def test_complete_intersection_syzygy_scheme():
    U = complete_intersection()
    S = syzygy_scheme_ideal(U, SMALL_STYLES)
    assert len(S.generators) == 7
    ok, bad = constructive_containment(U, generic_chain(U, SMALL_STYLES))
    assert ok and not bad


# -- the linear example (x3, x2^2, x2*x1) with its reference column order ------------------

def _linear_chain():
    U = linear_example()
    U1 = syzygy_module(U)
    return generic_chain(U, SMALL_STYLES, {1: [U1.pommaret_basis[i] for i in (2, 1, 0)]})


def test_linear_example_parameter_counts():
    assert [len(g.params) for g in _linear_chain()] == [11, 29, 9]


def test_linear_example_rendering():
    ch = _linear_chain()
    assert latex_marked_set(ch[0]) == [
        r"\uwave{x_{3}}-c_{1}x_{2}-c_{2}x_{1}-c_{3}x_{0}",
        r"\uwave{x_{2}^{2}}-c_{4}x_{1}^{2}-c_{5}x_{2}x_{0}-c_{6}x_{1}x_{0}-c_{7}x_{0}^{2}",
        r"\uwave{x_{2}x_{1}}-c_{8}x_{1}^{2}-c_{9}x_{2}x_{0}-c_{10}x_{1}x_{0}-c_{11}x_{0}^{2}"]
    g2 = r"-b_{4}x_{2}^{2}-b_{5}x_{2}x_{1}-b_{6}x_{1}^{2}-b_{7}x_{2}x_{0}-b_{8}x_{1}x_{0}-b_{9}x_{0}^{2}"
    g3 = r"-b_{10}x_{2}^{2}-b_{11}x_{2}x_{1}-b_{12}x_{1}^{2}-b_{13}x_{2}x_{0}-b_{14}x_{1}x_{0}-b_{15}x_{0}^{2}"
    assert latex_entries(ch[1]) == [
        [r"-b_{1}x_{1}^{2}-b_{2}x_{1}x_{0}-b_{3}x_{0}^{2}", g2, g3],
        [r"-b_{16}x_{1}-b_{17}x_{0}", r"-b_{18}x_{2}-b_{19}x_{1}-b_{20}x_{0}",
         r"\uwave{x_{3}}-b_{21}x_{2}-b_{22}x_{1}-b_{23}x_{0}"],
        [r"\uwave{x_{2}}-b_{24}x_{1}-b_{25}x_{0}", r"\uwave{x_{3}}-b_{26}x_{1}-b_{27}x_{0}",
         r"-b_{28}x_{1}-b_{29}x_{0}"]]
    assert latex_entries(ch[2]) == [[r"\uwave{x_{3}}-d_{1}x_{2}-d_{2}x_{1}-d_{3}x_{0}"],
                                    [r"-d_{4}x_{2}-d_{5}x_{1}-d_{6}x_{0}"],
                                    [r"-d_{7}x_{2}-d_{8}x_{1}-d_{9}x_{0}"]]


def test_linear_example_resolution_scheme_contains_marked_scheme():
    U = linear_example()
    ch = _linear_chain()
    S = resolution_scheme_ideals(U, chain=ch)
    assert len(S) == 2
    ok, bad = constructive_containment(U, ch)
    assert ok, bad


# -- the curve chart --------------------------------------------------------------------

@pytest.fixture(scope="module")
def curve_chain():
    return generic_chain(curves_module())


def test_curve_chart_parameter_counts(curve_chain):
    assert [(g.style.family, len(g.params)) for g in curve_chain] == [("C", 38), ("B", 52), ("A", 15)]


def test_parameter_count_formulas(curve_chain):
    U = curves_module()
    assert len(curve_chain[0].params) == sum(len(U.sous_escalier(h.degree)) for h in U.pommaret_basis)
    nb = sum(len(predicted_support(U, i, h)) - 1 for h in U.pommaret_basis for i in nonmultiplicative(h))
    assert len(curve_chain[1].params) == nb


def test_curve_chart_constant_slots(curve_chain):
    L = minimality_locus_ideal(curves_module(), chain=curve_chain[:2])
    slots = {param_name(p): (r, c, v) for p, r, c, v in L.constant_slots}
    assert set(slots) == {"B_6", "B_7"}
    assert slots["B_6"][:2] == (2, 0) and slots["B_7"][:2] == (3, 0)
    C = V
    assert slots["B_6"][2] == C("C_9") ** 2 + C("C_1")
    assert slots["B_7"][2] == -C("C_8") ** 2 * C("C_9") + C("C_8") * C("C_11") - C("C_12")


def test_curve_chart_ideal_sizes(curve_chain):
    U = curves_module()
    assert len(marked_scheme_ideal(U, generic=curve_chain[0]).generators) == 53
    assert [len(p.generators) for p in resolution_scheme_ideals(U, chain=curve_chain)] == [105, 47]


@pytest.mark.parametrize("name", ["I1", "I2", "I3"])
def test_substituted_chain_reproduces_concrete_resolution(curve_chain, name):
    F = curve_basis(name)
    pv = point_values(curve_chain, F)
    res = u_resolution(F)
    for t in (1, 2):
        assert substitute_chain(curve_chain, t, pv.values).polys() == res.levels[t].polys()


@pytest.mark.parametrize("name,minimal", [("I1", True), ("I2", False), ("I3", True)])
def test_curve_points_on_schemes(curve_chain, name, minimal):
    F = curve_basis(name)
    U = curves_module()
    for P in [marked_scheme_ideal(U, generic=curve_chain[0])] + resolution_scheme_ideals(U, chain=curve_chain):
        assert evaluate_point(P, F, curve_chain)[0]
    L = minimality_locus_ideal(U, chain=curve_chain[:2])
    assert evaluate_point(L, F, curve_chain)[0] == minimal


def test_json_export_is_serializable():
    P = marked_scheme_ideal(J_qs(), SMALL_STYLES[0])
    doc = json.loads(json.dumps(P.to_json()))
    assert doc["families"] == {"c": 12}
    assert len(doc["generators"]) == len(P.generators)


# -- functor/criterion agreement on random points -------------------------------------------

_SMALL_US = [J_qs(), J_stable(), complete_intersection()] + \
    [random_quasi_stable(random.Random(k), 3, max_deg=2) for k in (31, 32, 33)]
_SCHEMES = {id(U): (generic_chain(U, SMALL_STYLES), marked_scheme_ideal(U, SMALL_STYLES[0])) for U in _SMALL_US}


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10 ** 6), st.sampled_from(_SMALL_US), st.booleans())
def test_marked_scheme_point_iff_basis(seed, U, basis):
    rng = random.Random(seed)
    F = random_marked_basis(U, rng) if basis else random_marked_set(U, rng)
    chain, P = _SCHEMES[id(U)]
    assert evaluate_point(P, F, chain)[0] == bool(is_marked_basis(F))


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10 ** 6), st.sampled_from(_SMALL_US))
def test_minimality_locus_point_iff_minimal(seed, U):
    F = random_marked_basis(U, random.Random(seed))
    chain, _ = _SCHEMES[id(U)]
    L = minimality_locus_ideal(U, chain=chain[:2])
    assert evaluate_point(L, F, chain)[0] == bool(is_minimal(u_resolution(F)))


@pytest.mark.parametrize("F", [F_I(), G_K(), family_F(2), MarkedSet.monomial(J_qs())], ids=["I", "K", "a=2", "J"])
def test_corpus_points(F):
    chain, P = _SCHEMES[id(_SMALL_US[0])]
    ok = bool(is_marked_basis(F))
    assert evaluate_point(P, F, chain)[0] == ok
    if ok:
        L = minimality_locus_ideal(F.U, chain=chain[:2])
        assert evaluate_point(L, F, chain)[0] == bool(is_minimal(u_resolution(F)))


@pytest.mark.parametrize("k", range(len(_SMALL_US)))
def test_constructive_containment_on_small_modules(k):
    U = _SMALL_US[k]
    ok, bad = constructive_containment(U, _SCHEMES[id(U)][0])
    assert ok, bad


def test_parameter_counts_of_depth_one_chart():
    # reference: |C| = 16, |B| = 6 for (x3^2, x3*x2)
    from markedres.quasistable import QuasiStableModule
    U = QuasiStableModule([ModuleTerm((0, 0, 0, 2)), ModuleTerm((0, 0, 1, 1))], 4)
    assert [len(g.params) for g in generic_chain(U)][:2] == [16, 6]
