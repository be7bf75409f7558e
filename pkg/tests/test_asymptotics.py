from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from sphx import asymptotics as asy
from sphx.rootsys import get_space
from sphx.spherical.noncompact import phi_noncompact


def _unit_root_point(space, s):
    """Point with ``alpha(H) = s`` for the simple root of a rank-one space."""
    a = get_space(space).roots.simple_roots[0].vector
    return s * a / (a @ a)


# --- envelopes ------------------------------------------------------------


@pytest.mark.parametrize("space", ["H2", "H3", "SL3R", "H2xH2"])
def test_envelope_is_one_at_origin(space):
    sp = get_space(space)
    assert asy.envelope_noncompact(sp, 50.0, np.zeros(sp.r)) == 1.0


def test_envelope_h2_value():
    # t |alpha(H)| = 3 with multiplicity one gives (1 + 3)^{-1/2}
    H = _unit_root_point("H2", 3.0 / 10.0)
    assert asy.envelope_noncompact("H2", 10.0, H) == pytest.approx(0.5, rel=1e-14)


@given(st.floats(0.0, 5.0), st.floats(0.0, 5.0), st.floats(1.0, 200.0))
def test_envelope_monotone_in_distance(a, b, t):
    lo, hi = sorted((a, b))
    e_lo = asy.envelope_noncompact("H3", t, _unit_root_point("H3", lo))
    e_hi = asy.envelope_noncompact("H3", t, _unit_root_point("H3", hi))
    assert e_hi <= e_lo + 1e-15


def test_envelope_compact_ball_and_origin():
    assert asy.envelope_compact("S2", 40.0, [0.0]) == 1.0
    assert asy.envelope_compact("S2", 40.0, [0.3]) < 1.0
    with pytest.raises(ValueError):
        asy.envelope_compact("S2", 40.0, [0.9])


def test_envelope_sweep_h2_bounded_and_stable():
    lam = get_space("H2").roots.simple_roots[0].vector / 2.0
    rep, rows = asy.envelope_sweep_noncompact("H2", lam, [20.0, 40.0], npts=21)
    assert rep.max_ratio < 2.0
    assert rep.drift() < 0.05
    assert len(rows) == 42


def test_envelope_report_rejects_negative():
    with pytest.raises(ValueError):
        asy.EnvelopeReport(((1.0, (0.0,)),), (-1.0,), 1.0)


# --- leading term ---------------------------------------------------------


def test_h2_constant_matches_classical_legendre_asymptotic():
    # lam = alpha gives spectral parameter nu = t, and r = alpha(H)
    lam = get_space("H2").roots.simple_roots[0].vector
    for nu, r in [(60.0, 0.8), (90.0, 1.3)]:
        H = _unit_root_point("H2", r)
        model = asy.dkv_main_term("H2", lam, nu, H).real
        assert model == pytest.approx(asy.classical_rank_one(nu, r), rel=1e-10)


def test_h2_leading_term_error_shrinks():
    lam = get_space("H2").roots.simple_roots[0].vector
    H = _unit_root_point("H2", 0.9)
    e1 = asy.asymptotic_error("H2", lam, 20.0, H)["amp_err"]
    e2 = asy.asymptotic_error("H2", lam, 80.0, H)["amp_err"]
    assert e2 < e1 / 2.0
    assert e2 < 0.01


def test_regularity_window_rejects_wall_points():
    with pytest.raises(ValueError):
        asy.dkv_terms("H2", [1.0], 100.0, _unit_root_point("H2", 1e-4))


def test_leading_constant_product_and_unknown():
    assert asy.leading_constant("H2xH2") == pytest.approx(asy.leading_constant("H2") ** 2)
    with pytest.raises(KeyError):
        asy.leading_constant("S2")


# --- critical sets and Hessians -------------------------------------------


def test_critical_set_regular_and_wall():
    sp = get_space("SL3R")
    reg = asy.critical_set(sp, sp.roots.fundamental_coweights().sum(axis=0))
    assert reg.n_components == 6 and reg.component_dim == 0
    wall = asy.critical_set(sp, sp.roots.fundamental_coweights()[0])
    assert wall.n_components == 3
    assert wall.component_dim == 1


def test_critical_set_origin_is_everything():
    sp = get_space("H3")
    cs = asy.critical_set(sp, np.zeros(1))
    assert cs.n_components == 1
    assert cs.component_dim == 2


def test_phase_gradient_vanishes_at_weyl_points():
    sp = get_space("SL3R")
    lam = sp.roots.fundamental_coweights()[0] + 0.3
    H = sp.roots.fundamental_coweights().sum(axis=0) * 0.4
    for rep in asy.critical_set(sp, H).representatives:
        assert np.max(np.abs(asy.phase_gradient(sp, lam, H, rep))) < 1e-7


@pytest.mark.parametrize("space", ["H2", "SL3R"])
def test_hessian_exact_matches_finite_differences(space, rng):
    sp = get_space(space)
    # arbitrary (not necessarily dominant) Lambda and regular H
    H = rng.normal(size=sp.r) * 0.5
    lam = rng.normal(size=sp.r)
    for w in range(len(sp.weyl.elements)):
        exact = np.diag(asy.hessian_noncompact(sp, lam, H, w))
        fd = np.diag(asy.hessian_noncompact_fd(sp, lam, H, w, h=1e-3))
        assert np.allclose(exact, fd, atol=1e-4 * max(1.0, np.max(np.abs(exact))))


def test_hessian_degenerates_on_wall():
    sp = get_space("SL3R")
    H = sp.roots.fundamental_coweights()[0]
    diag = np.diag(asy.hessian_noncompact(sp, [0.4, 0.9], H, 0))
    van = [i for i, a in enumerate(sp.roots.positive_roots) if abs(a(H)) < 1e-12]
    assert len(van) == 1
    assert np.min(np.abs(diag)) < 1e-12


def test_hessian_unknown_form():
    with pytest.raises(ValueError):
        asy.hessian_noncompact("H2", [1.0], [0.5], 0, form="nope")


def test_compact_hessian_corrected_matches_fd_and_vanishes_at_identity():
    mu = get_space("SU2group").roots.simple_roots[0].vector * 3.0
    for th1, th in [(0.3, 0.4), (0.3, -0.4), (1.3, -0.3)]:
        for w in (0, 1):
            fd = asy.hessian_compact_fd("SU2group", mu, th1, th, w)[0, 0]
            cor = asy.hessian_compact("SU2group", mu, th1, th, w)[0, 0]
            assert fd == pytest.approx(cor, rel=1e-5, abs=1e-8)
    assert asy.hessian_compact("SU2group", mu, 0.0, 0.4)[0, 0] == 0.0
    assert asy.hessian_compact("SU2group", mu, 0.3, 0.4, form="stated")[0, 0] == pytest.approx(
        -asy.hessian_compact("SU2group", mu, 0.3, 0.4)[0, 0])


def test_compact_hessian_degenerate_and_unsupported():
    mu = [1.0]
    with pytest.raises(ValueError):
        asy.hessian_compact("SU2group", mu, 0.5, -0.5)
    with pytest.raises(NotImplementedError):
        asy.hessian_compact("S2", mu, 0.3, 0.4)


def test_richardson_order_is_two():
    _, _, order = asy.richardson_check(lambda h: (math.cos(h) - 2 + math.cos(-h)) / h**2 + 0.0)
    assert order == pytest.approx(2.0, abs=0.1)


# --- compact scaling ------------------------------------------------------


@pytest.mark.parametrize("space, H", [("S2", [0.7]), ("SU2group", [0.7])])
def test_compact_regular_scaling_slope(space, H):
    sp = get_space(space)
    mu = sp.roots.simple_roots[0].vector
    out = asy.compact_regular_scaling(sp, mu, H, [20, 40, 80, 160])
    assert out["slope"] == pytest.approx(out["expected"], abs=0.1)
