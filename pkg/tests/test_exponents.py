from __future__ import annotations

import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from sphx import exponents as ex
from sphx.rootsys import get_space

IRREDUCIBLE = ("H2", "H3", "SL3R", "S2", "SU2group", "SU3group")
ALL = IRREDUCIBLE + ("H2xH2",)

inv_ps = st.fractions(min_value=0, max_value=Fraction(1, 2), max_denominator=400)


# --- frozen oracles from the exponent definitions ------------------------

def test_delta0_examples():
    assert ex.delta0("inf", 2) == Fraction(1, 2)
    assert ex.delta0(2, 7) == 0
    assert ex.delta0(6, 2) == Fraction(1, 6)


def test_delta_examples():
    assert ex.delta("inf", 5, 2) == Fraction(3, 2)
    assert ex.delta(2, 9, 3) == 0
    assert ex.delta(Fraction(14, 3), 5, 2) == Fraction(3, 7)


def test_kinks():
    assert ex.kink_inv_p(5, 1) == Fraction(1, 3)
    assert ex.kink_inv_p(5, 2) == Fraction(3, 14)
    for n in range(2, 10):
        for r in range(1, n):
            assert ex.both_branches_at_kink(n, r)


def test_p_below_two_rejected():
    with pytest.raises(ValueError):
        ex.delta0(1.5, 3)


@pytest.mark.parametrize("n,r", [(4, 2), (6, 3), (5, 1), (8, 2)])
def test_product_delta(n, r):
    assert ex.product_delta_check(n, r)


def test_exponent_report_branches():
    assert ex.exponent_report("inf", 5, 2).branch == "above"
    assert ex.exponent_report(Fraction(14, 3), 5, 2).branch == "at"
    assert ex.exponent_report(2, 5, 2).branch == "below"


def test_sigma_w():
    h2, sl3 = get_space("H2"), get_space("SL3R")
    Hd = np.array([0.4])
    assert ex.sigma_w(h2.roots, h2.weyl, 0, Hd) == -1
    assert ex.sigma_w(h2.roots, h2.weyl, 1, Hd) == 1
    Hs = sl3.roots.fundamental_coweights().sum(axis=0)
    assert ex.sigma_w(sl3.roots, sl3.weyl, 0, Hs) == -3
    with pytest.raises(ValueError):
        ex.sigma_w(sl3.roots, sl3.weyl, 0, sl3.roots.fundamental_coweights()[0])


@pytest.mark.parametrize("sid", ALL)
def test_vertex_values(sid):
    sp = get_space(sid)
    v0, v1 = (0,) * sp.r, (1,) * sp.r
    assert ex.L_of(v0, "inf", sp) == sp.n - sp.r
    assert ex.L_of(v0, 2, sp) == -sp.r
    assert ex.L_of(v1, "inf", sp) == Fraction(sp.n - sp.r, 2)
    assert ex.L_of(v1, 2, sp) == 0
    for v in ex.vertices(sp.r):
        for p in ("inf", 2, 3, 7):
            assert ex.vertex_value(sp, v, p) == ex.L_of(v, p, sp)


def test_vertex_profile_sl3r():
    prof = ex.vertex_profile("SL3R", (1, 0))
    assert (prof.Delta_v_plus_mass, prof.Phi_v_count) == (1, 1)
    assert ex.vertex_profile("SL3R", (0, 0)).Delta_v_plus_mass == 3


def test_delta_relation_examples():
    assert max(ex.L_of((0, 0), "inf", "SL3R"), ex.L_of((1, 1), "inf", "SL3R")) == 3
    k = Fraction(14, 3)
    assert ex.L_of((0, 0), k, "SL3R") == ex.L_of((1, 1), k, "SL3R") == Fraction(6, 7)


def test_M_sequences():
    assert [ex.M_of_s("SL3R", s) for s in range(3)] == [0, 1, 3]
    assert [ex.M_of_s("SU3group", s) for s in range(3)] == [0, 2, 6]


@pytest.mark.parametrize("sid", IRREDUCIBLE)
def test_convexity(sid):
    cert = ex.convexity_certificate(sid)
    assert cert.convex and cert.connected and not cert.reducible


def test_product_convexity_flagged():
    cert = ex.convexity_certificate("H2xH2")
    assert cert.reducible and not cert.convex


@pytest.mark.parametrize("sid", IRREDUCIBLE)
def test_maximizer_locus_branches(sid):
    sp = get_space(sid)
    k = ex.kink_inv_p(sp.n, sp.r)
    v0, v1 = (0,) * sp.r, (1,) * sp.r
    assert ex.maximizer_locus(sp, "inf") == {v0}
    assert ex.maximizer_locus(sp, 2) == {v1}
    assert ex.maximizer_locus(sp, 1 / k) == {v0, v1}


def test_product_ties_at_kink():
    # vertex values add over factors, so every vertex ties at the kink
    assert ex.maximizer_locus("H2xH2", 6) == set(ex.vertices(2))


def test_H_of_m():
    sp = get_space("H2")
    t = math.exp(3.0)
    om = sp.roots.fundamental_coweights()[0]
    assert np.allclose(ex.H_of_m(sp, t, (0,)).vector, om / t)
    a = sp.roots.simple_roots[0]
    assert a(ex.H_of_m(sp, t, (3,)).vector) == pytest.approx(1.0)


@pytest.mark.parametrize("sid", ("SL3R", "SU3group", "H2"))
def test_h_of_m_constant_bounded(sid):
    sp = get_space(sid)
    om = sp.roots.fundamental_coweights()
    bound = math.log(sp.r) + max(math.log(a(o)) for a in sp.roots.positive_roots for o in om if a(o) > 0)
    for lt in (3.0, 6.0, 9.0):
        assert ex.h_of_m_constant(sp, math.exp(lt)) <= bound + 1e-12


def test_dyadic_index_classes():
    assert all(d.regular for d in ex.dyadic_index_set("H2", math.exp(8)))
    idx = ex.dyadic_index_set("SL3R", math.exp(10), 0.2)
    owner = [d for d in idx if (10, 1) in d.class_members]
    assert owner and (10, 2) in owner[0].class_members
    assert len(idx) <= (10 + 1) ** 2
    assert sum(len(d.class_members) for d in idx) == 11 ** 2


def test_progression_endpoints():
    # p = inf: the v0 term t^{n-r} dominates, so the ratio is a t-independent constant
    ratios = []
    for lt in (6.0, 9.0):
        top = ex.progression_sum("SL3R", "inf", math.exp(lt))
        ratios.append(top.value / math.exp(lt * float(top.predicted_exponent)))
    assert ratios[0] == pytest.approx(ratios[1], rel=0.05)
    low = ex.progression_sum("H2", 2, math.exp(7))
    assert 1.0 <= low.value <= 5.0


def test_progression_kink_log_power():
    slope = ex.progression_log_slope("H2", 6)
    assert abs(slope - 1.0) <= 0.15


# --- properties -----------------------------------------------------------

@given(inv_ps, st.integers(2, 12), st.integers(1, 11))
def test_delta_continuous_and_monotone(s, n, r):
    if r >= n:
        return
    d = ex.delta_s(s, n, r)
    assert d >= 0
    assert d <= ex.delta_s(s, n, 1)  # joint eigenfunctions never grow faster
    if s > 0:
        assert ex.delta_s(s - min(s, Fraction(1, 1000)), n, r) >= d


@given(inv_ps, st.sampled_from(ALL))
def test_delta_relation_property(s, sid):
    p = "inf" if s == 0 else 1 / s
    if s != 0 and 1 / s < 2:
        return
    assert ex.delta_relation_check(sid, p)
    assert ex.max_vertex_check(sid, s)


@given(st.sampled_from(("SL3R", "SU3group", "H2xH2")), st.fractions(0, 1, max_denominator=30),
       st.fractions(0, 1, max_denominator=30), st.fractions(0, 1, max_denominator=30),
       st.fractions(0, Fraction(1, 2), max_denominator=40))
def test_L_piecewise_linear_on_ordered_simplices(sid, a, b, lam, s):
    # on {x1 >= x2} (or x1 <= x2), L is affine: L(convex comb) = convex comb of L
    x, y = (a, b), (max(a, b) if a >= b else a, min(a, b) if a >= b else b)
    mid = tuple(lam * u + (1 - lam) * v for u, v in zip(x, y))
    lhs = ex.L_of_s(mid, s, sid)
    rhs = lam * ex.L_of_s(x, s, sid) + (1 - lam) * ex.L_of_s(y, s, sid)
    assert lhs == rhs


@given(st.sampled_from(ALL), inv_ps)
def test_L_linear_in_inv_p(sid, s):
    sp = get_space(sid)
    x = (Fraction(1, 3),) * sp.r
    a, b = ex.L_of_s(x, 0, sp), ex.L_of_s(x, Fraction(1, 2), sp)
    assert ex.L_of_s(x, s, sp) == a + 2 * s * (b - a)
