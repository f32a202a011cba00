from __future__ import annotations

import random
from fractions import Fraction
from math import comb

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from helpers import random_marked_basis, random_quasi_stable
from markedres.corpus import (F_I, F_I_product, F_I_stable, F_K_product, G_K, G_K_stable, J_qs, J_stable,
                              M_direct, N_direct, curve_basis, family_F, linear_example)
from markedres.marked import MarkedSet, NotABasis
from markedres.oracle import module_hilbert_function
from markedres.polyring import ModuleTerm, ParamPoly, Poly, PolyMatrix, parse_poly
from markedres.syzres import (BettiTable, componentwise_certificate, forecast_exclusions, fundamental_syzygies,
                              groebner_obstruction, is_minimal, minimize, predicted_support, propagation_holds,
                              support_contained, syzygy_module, u_resolution)


def T(s, nvars=3, shifts=None):
    return next(iter(parse_poly(s, nvars, shifts)))


CORPUS = {
    "J": lambda: MarkedSet.monomial(J_qs()),
    "I": F_I, "K": G_K, "J'": lambda: MarkedSet.monomial(J_stable()),
    "I'": F_I_stable, "K'": G_K_stable, "M": M_direct, "N": N_direct,
    "I-product": F_I_product, "K-product": F_K_product,
    "linear": lambda: MarkedSet.monomial(linear_example()),
    "I1": lambda: curve_basis("I1"), "I2": lambda: curve_basis("I2"), "I3": lambda: curve_basis("I3"),
}


def test_syzygy_module_of_non_stable_ideal():
    U1 = syzygy_module(J_qs())
    assert U1.is_stable()
    assert len(U1.pommaret_basis) == 2


def test_fundamental_syzygies_need_a_basis():
    with pytest.raises(NotABasis):
        fundamental_syzygies(family_F(0))


def test_predicted_support_starts_with_head_slot():
    U = J_qs()
    h = T("x1^2")
    sup = predicted_support(U, 2, h)
    assert sup[0] == ModuleTerm((0, 0, 1), 2, 2)
    assert set(forecast_exclusions(U, 2, h)) <= set(sup[1:])


@pytest.mark.parametrize("name", sorted(CORPUS))
def test_complex_and_ranks(name):
    F = CORPUS[name]()
    res = u_resolution(F)
    assert res.is_complex()
    assert res.ranks() == F.U.invariants.ranks
    assert res.length == F.U.invariants.pdim
    assert support_contained(res)


@pytest.mark.parametrize("name", sorted(CORPUS))
def test_propagation_and_shortcut(name):
    res = u_resolution(CORPUS[name]())
    v = is_minimal(res)          # raises if the shortcut and the full scan disagree
    assert propagation_holds(res)
    assert v.shortcut == v.minimal


@pytest.mark.parametrize("name", sorted(CORPUS))
def test_euler_characteristic_against_oracle(name):
    F = CORPUS[name]()
    res = u_resolution(F)
    n1 = F.U.nvars
    for s in range(0, F.U.invariants.reg + 4):
        alt = 0
        for t, M in enumerate(res.matrices):
            alt += (-1) ** t * sum(comb(s - d + n1 - 1, n1 - 1) for d in M.col_shifts if s >= d)
        assert alt == module_hilbert_function(F, s)


@pytest.mark.parametrize("name", sorted(CORPUS))
def test_minimized_betti_bounded_by_ranks(name):
    res = u_resolution(CORPUS[name]())
    mr, bt = minimize(res)
    assert mr.is_complex()
    assert bt <= res.betti()
    assert not any(M.constant_entries() for M in mr.matrices[1:])


def test_minimality_witness_of_K():
    v = is_minimal(u_resolution(G_K()))
    assert not v
    assert v.describe() == "not minimal: ∂_1[3,1] = -3/4"
    assert v.witness == (1, 2, 0, Fraction(-3, 4))


def test_minimality_over_parameter_ring_is_undecided():
    # d_1 carries the constant entry t, a non-unit of Q[t]
    t = ParamPoly.var("t", 0)
    res = u_resolution(MarkedSet.monomial(J_qs()))
    d1 = res.matrices[1]
    ents = dict(d1.entries)
    ents[(2, 0)] = Poly.term(ModuleTerm((0, 0, 0)), t)
    res.matrices[1] = PolyMatrix(d1.row_shifts, d1.col_shifts, ents, d1.heads)
    v = is_minimal(res)
    assert v.minimal is None and v.non_unit_constants
    assert "undecided" in v.describe()


def test_betti_table_render():
    bt = BettiTable({(0, 2): 4, (1, 4): 2})
    assert bt.render("N").splitlines()[0].startswith("N |")
    assert bt.as_rows(2, 2, 2) == [[4, 0], [0, 2]]


def test_componentwise_certificates():
    assert componentwise_certificate(F_I())
    assert not componentwise_certificate(G_K())
    assert componentwise_certificate(MarkedSet.monomial(linear_example()))


def test_groebner_obstruction_on_non_stable_chart():
    assert groebner_obstruction(F_I())
    assert not groebner_obstruction(MarkedSet.monomial(J_stable()))


def test_parallel_construction_matches_serial():
    from concurrent.futures import ProcessPoolExecutor
    F = curve_basis("I2")
    with ProcessPoolExecutor(max_workers=2) as ex:
        par = u_resolution(F, ex)
    ser = u_resolution(F)
    assert par.matrices == ser.matrices


# -- random marked bases over random quasi-stable ideals ----------------------------------

_RANDOM_US = [random_quasi_stable(random.Random(seed), n) for seed, n in
              [(11, 3), (12, 4), (13, 3), (14, 4), (15, 3)]]


@pytest.mark.parametrize("k", range(5))
def test_propagation_and_shortcut_on_random_bases(k):
    U = _RANDOM_US[k]
    rng = random.Random(100 + k)
    for _ in range(20):
        F = random_marked_basis(U, rng)
        res = u_resolution(F)
        v = is_minimal(res)
        assert propagation_holds(res)
        assert v.shortcut == v.minimal
        assert res.is_complex()


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10 ** 6), st.sampled_from(_RANDOM_US + [J_qs(), J_stable()]))
def test_random_resolution_invariants(seed, U):
    F = random_marked_basis(U, random.Random(seed))
    res = u_resolution(F)
    assert res.is_complex()
    assert res.ranks() == U.invariants.ranks
    assert support_contained(res)
    _, bt = minimize(res)
    assert bt <= res.betti()
