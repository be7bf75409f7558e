from __future__ import annotations

import math

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from sphx.rootsys import get_space, weight_from_labels
from sphx.spherical import (
    QuadratureError,
    QuadratureSpec,
    beam,
    beam_decay_check,
    beam_eval,
    beam_l2_lower,
    beam_lp_norm,
    lp_norm,
    phi_compact,
    phi_compact_values,
    phi_noncompact,
    phi_noncompact_iwasawa,
    schur_defect,
    spherical_dimension,
    weyl_dimension,
)
from sphx.spherical.beams import (
    beam_eval_matrix_coefficient,
    beam_lp_closed_form,
    chart_point,
    predicted_transverse_curvature,
    transverse_hessian_fd,
)
from sphx.spherical.compact import character_values, legendre, su2_sym_power
from sphx.spherical.noncompact import h3_closed_form, weyl_symmetrized
from sphx.spherical.realization import (
    GroupElement,
    coords_from_diag,
    exp_a,
    iwasawa_factors,
    iwasawa_H,
    torus_su2,
)

SQ2 = math.sqrt(2.0)


def conical(nu: float, r: float) -> complex:
    """Independent oracle: P_{-1/2 + i nu}(cosh r) from mpmath."""
    return complex(mp.legenp(-0.5 + 1j * nu, 0, mp.cosh(r), type=3))


# --- realization -----------------------------------------------------------

def test_iwasawa_of_diagonal_and_rotation():
    H0 = coords_from_diag("SL3R", (0.4, 0.1, -0.5))
    assert np.allclose(iwasawa_H(exp_a("SL3R", H0), "SL3R"), H0)
    th = 0.7
    k = np.array([[math.cos(th), -math.sin(th)], [math.sin(th), math.cos(th)]])
    assert np.allclose(iwasawa_H(GroupElement(k, "H2")), 0.0, atol=1e-14)


def test_iwasawa_reconstruction_sl2(rng):
    for _ in range(20):
        g = rng.normal(size=(2, 2))
        if np.linalg.det(g) < 0:
            g[0] *= -1
        g /= math.sqrt(np.linalg.det(g))
        n, a, k = iwasawa_factors(g)
        assert np.allclose(n @ a @ k, g, atol=1e-12)
        assert np.allclose(np.tril(n, -1), 0.0) and np.allclose(np.diag(n), 1.0)
        assert np.allclose(k @ k.T, np.eye(2), atol=1e-12) and np.all(np.diag(a) > 0)


def test_group_element_rejects_non_sl():
    with pytest.raises(ValueError):
        GroupElement(2 * np.eye(2), "H2")


# --- noncompact ------------------------------------------------------------

@pytest.mark.parametrize("sid", ["H2", "H3", "SL3R", "H2xH2"])
def test_phi_at_identity(sid):
    sp = get_space(sid)
    assert phi_noncompact(sp, np.full(sp.r, 7.0), np.zeros(sp.r)).value == pytest.approx(1.0, abs=1e-14)


@pytest.mark.parametrize("nu,r", [(0.5, 0.3), (3.0, 1.2), (10.0, 0.7071067811865476), (25.0, 2.0),
                                  (60.0, 0.4)])
def test_h2_against_conical_function(nu, r):
    lam = np.array([nu * SQ2])
    H = np.array([r / SQ2])
    res = phi_noncompact("H2", lam, H, QuadratureSpec(refinement=1e-12))
    assert abs(res.value - conical(nu, r)) <= 1e-8
    assert res.converged


def test_h2_frozen_value():
    # P_{-1/2 + 10i}(cosh(1/sqrt 2)) computed once with mpmath at 30 digits
    val = phi_noncompact("H2", [10 * SQ2], [0.5]).value
    assert val.real == pytest.approx(0.28766027309599, abs=1e-12)


def test_h3_closed_form_matches_haar_average():
    nu, r = 4.0, 0.8
    assert h3_closed_form(nu, r) == pytest.approx(math.sin(nu * r) / (nu * math.sinh(r)))
    assert h3_closed_form(0.0, r) == pytest.approx(r / math.sinh(r))


@pytest.mark.parametrize("sid,lam,H", [
    ("H2", [3.0 * SQ2], [0.6]),
    ("SL3R", [2.0, 1.0], [0.3, 0.15]),
])
def test_fast_path_matches_direct_k_average(sid, lam, H):
    fast = phi_noncompact(sid, np.array(lam), np.array(H), QuadratureSpec(refinement=1e-12)).value
    ref = phi_noncompact_iwasawa(sid, np.array(lam), np.array(H), n=64)
    assert abs(fast - ref) < 1e-8


def test_sl3r_conjugation_and_weyl_invariance():
    # conj(phi_lam) = phi_{-lam} = phi_{-w0 lam}; -1 is not in W(A2), so phi is
    # real only for lam fixed by -w0 (the rho line)
    sp = get_space("SL3R")
    lam, H = np.array([6.0, 3.5]), np.array([0.4, -0.2])
    val = phi_noncompact(sp, lam, H).value
    w0 = sp.weyl.elements[sp.weyl.longest]
    mirrored = phi_noncompact(sp, -(w0 @ lam), H).value
    assert abs(np.conj(val) - mirrored) < 1e-9
    assert abs(weyl_symmetrized(sp, lam, H) - val) < 1e-9
    on_rho = phi_noncompact(sp, 9.0 * sp.roots.rho, H).value
    assert abs(on_rho.imag) < 1e-10


def test_product_factorizes():
    lam, H = np.array([3.0, 5.0]), np.array([0.4, 0.2])
    v = phi_noncompact("H2xH2", lam, H).value
    a = phi_noncompact("H2", lam[:1], H[:1]).value * phi_noncompact("H2", lam[1:], H[1:]).value
    assert v == pytest.approx(a, abs=1e-12)


def test_strict_quadrature_raises():
    spec = QuadratureSpec(points_per_dim=8, refinement=1e-14, max_points=32)
    with pytest.raises(QuadratureError):
        phi_noncompact("H2", [400 * SQ2], [2.0], spec, strict=True)
    loose = phi_noncompact("H2", [400 * SQ2], [2.0], spec)
    assert not loose.converged and loose.abs_error_est > 1e-6


def test_quadrature_spec_validation():
    with pytest.raises(ValueError):
        QuadratureSpec(scheme="simpson")
    with pytest.raises(ValueError):
        QuadratureSpec(points_per_dim=4)


def test_compact_rejected_by_noncompact_evaluator():
    with pytest.raises(ValueError):
        phi_noncompact("S2", [3.0], [0.1])


# --- compact ---------------------------------------------------------------

def test_compact_identity_and_s2_first_degree():
    for sid in ("S2", "SU2group", "SU3group"):
        sp = get_space(sid)
        mu = weight_from_labels(sp, [3] * sp.r)
        assert phi_compact(sp, mu, np.zeros(sp.r)).value == pytest.approx(1.0, abs=1e-12)
    th = np.linspace(0, math.pi, 7)
    assert np.allclose(phi_compact_values("S2", [1.0], th[:, None]).real, np.cos(th))


def test_su2_character_against_representation_trace():
    n, th = 10, 0.3
    direct = np.trace(su2_sym_power(n, torus_su2(2 * th))) / (n + 1)
    assert phi_compact("SU2group", [float(n)], [th]).value == pytest.approx(direct, abs=1e-13)
    assert direct.real == pytest.approx(math.sin((n + 1) * th) / ((n + 1) * math.sin(th)), abs=1e-13)


def test_legendre_recurrence_against_scipy():
    from scipy.special import eval_legendre

    x = np.linspace(-1, 1, 41)
    for l in (0, 1, 5, 40, 200):
        assert np.allclose(legendre(l, x), eval_legendre(l, x), atol=1e-12)


def test_su3_character_paths_agree_near_walls():
    sp = get_space("SU3group")
    mu = weight_from_labels(sp, [4, 7])
    Hs = np.array([[0.3, 0.2], [0.9, -0.4], [1e-5, 0.3]])
    a = character_values(sp, mu, Hs, "exact")
    b = character_values(sp, mu, Hs[:2], "weyl")
    assert np.allclose(a[:2], b, atol=1e-8)
    assert np.isfinite(a).all()


@pytest.mark.parametrize("sid,labels,dim", [("SU2group", [0], 1), ("SU2group", [6], 7),
                                            ("SU3group", [1, 1], 8), ("SU3group", [0, 0], 1),
                                            ("S2", [5], 11)])
def test_weyl_dimension(sid, labels, dim):
    sp = get_space(sid)
    assert weyl_dimension(sp, weight_from_labels(sp, labels)) == dim


def test_non_lattice_weight_rejected():
    with pytest.raises(ValueError):
        phi_compact("SU2group", [2.5], [0.1])


# --- norms -----------------------------------------------------------------

def test_norm_of_constant():
    assert lp_norm("S2", lambda H: np.ones(len(H)), 2).value == pytest.approx(1.0)
    assert lp_norm("SU3group", lambda H: np.ones(len(H)), 3).value == pytest.approx(1.0)


@pytest.mark.parametrize("l", [0, 3, 17, 60])
def test_legendre_l2(l):
    val = lp_norm("S2", lambda H: legendre(l, np.cos(H[:, 0])), 2, tol=1e-13).value
    assert val ** 2 == pytest.approx(1.0 / (2 * l + 1), rel=1e-10)


@pytest.mark.parametrize("sid,labels", [("SU2group", [9]), ("SU3group", [2, 3]), ("S2", [12])])
def test_schur_orthogonality(sid, labels):
    sp = get_space(sid)
    assert schur_defect(sp, weight_from_labels(sp, labels)) <= 1e-8
    if sid != "S2":
        d = weyl_dimension(sp, weight_from_labels(sp, labels))
        assert spherical_dimension(sp, weight_from_labels(sp, labels)) == d * d


# --- beams -----------------------------------------------------------------

@pytest.mark.parametrize("sid", ["S2", "SU2group"])
def test_beam_identity_and_torus(sid):
    b = beam(sid, 12)
    e = np.eye(3) if sid == "S2" else np.eye(2, dtype=complex)
    if sid == "S2":
        assert beam_eval(b, e) == pytest.approx(1.0)
    for ph in (0.0, 0.9, 2.0):
        assert abs(beam_eval(b, (0.5 * math.pi, ph))) == pytest.approx(1.0)


def test_su2_beam_matches_matrix_coefficient(rng):
    b = beam("SU2group", 7)
    for _ in range(5):
        th, ph = rng.uniform(0.2, 1.4), rng.uniform(0, 2 * math.pi)
        g = chart_point("SU2group", th, ph)
        assert beam_eval(b, g) == pytest.approx(beam_eval_matrix_coefficient(b, g), abs=1e-12)


@pytest.mark.parametrize("t", [8, 16, 32])
def test_beam_decay_closed_form(t):
    assert beam_decay_check("S2", t, (0.0, math.pi / 4)) == pytest.approx(2 ** (-t / 2), rel=1e-12)


def test_beam_decay_rejects_torus():
    with pytest.raises(ValueError):
        beam_decay_check("S2", 8, (0.0, math.pi / 2))


@pytest.mark.parametrize("sid", ["S2", "SU2group"])
def test_beam_transverse_curvature(sid):
    b = beam(sid, 40)
    assert transverse_hessian_fd(b) == pytest.approx(predicted_transverse_curvature(b), abs=1e-4 * 40)


@pytest.mark.parametrize("sid,slope", [("S2", -0.25), ("SU2group", -0.5)])
def test_beam_l2_slope(sid, slope):
    fit = beam_l2_lower(sid, [20, 40, 80, 160])
    assert abs(fit.slope - slope) <= 0.05


@given(st.integers(1, 60), st.sampled_from([2.0, 3.0, 8.0]), st.sampled_from(["S2", "SU2group"]))
def test_beam_norm_closed_form(t, p, sid):
    assert beam_lp_norm(beam(sid, t), p) == pytest.approx(beam_lp_closed_form(sid, t, p), rel=1e-10)


def test_beam_constant_weight_has_unit_norm():
    assert beam_lp_norm(beam("S2", 0), 2) == 1.0
