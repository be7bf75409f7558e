from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from sphx import kernels as kn
from sphx.rootsys import get_space


@pytest.fixture(scope="module")
def bump():
    return kn.build_bump(1.0)


@pytest.fixture(scope="module")
def table20():
    return kn.kernel_table(20.0)


# --- bump and multiplier --------------------------------------------------


def test_bump_positive_on_unit_ball_and_even(bump):
    nu = np.linspace(0.0, 1.0, 51)
    assert np.all(bump(nu) >= 1.0 - 1e-12)
    assert np.allclose(bump(-nu), bump(nu))
    assert bump.support_radius == 2.0


def test_bump_inverse_transform_vanishes_outside_support(bump):
    inside = kn.bump_inverse_transform(bump, [0.0, 1.0])
    outside = kn.bump_inverse_transform(bump, [2.2, 3.0, 5.0])
    assert inside[0] > 0
    assert np.max(np.abs(outside)) < 1e-9 * inside[0]


@given(st.floats(-3.0, 3.0))
def test_h_t_rank_one_agrees_with_root_system_form(x):
    b = kn.build_bump(1.0, n_grid=201)
    a = get_space("H2").roots.simple_roots[0].vector
    t, nu = 15.0, 15.0 + x
    assert kn.h_t(b, "H2", a, t, nu * a) == pytest.approx(float(kn.h_t_rank_one(b, t, [nu])[0]), rel=1e-12)


def test_h_t_weyl_invariant_and_large_at_centre(bump):
    sp = get_space("SL3R")
    Lam = sp.roots.fundamental_coweights().sum(axis=0)
    t = 12.0
    assert kn.h_t(bump, sp, Lam, t, t * Lam) >= 1.0
    lam = t * Lam + np.array([0.2, -0.1])
    vals = [kn.h_t(bump, sp, Lam, t, w @ lam) for w in sp.weyl.elements]
    assert np.allclose(vals, vals[0], rtol=1e-12)


# --- H2 kernel ------------------------------------------------------------


def test_mehler_matches_closed_form_at_origin():
    assert np.allclose(kn.h2_phi_mehler(np.array([3.0, 7.5]), 0.0), 1.0)


def test_round_trip(bump):
    out = kn.round_trip(bump, 20.0)
    assert out["max_rel_err"] < 1e-5


def test_kernel_supported_in_twice_support_radius(bump):
    r = np.array([4.5, 5.0, 6.0])
    far = kn.invert_transform(bump, 20.0, r).values
    k0 = kn.invert_transform(bump, 20.0, np.array([0.0])).values[0]
    assert np.max(np.abs(far)) < 1e-6 * k0


def test_k0_grows_linearly(bump):
    assert kn.k0_slope(bump, [20.0, 40.0, 80.0])["slope"] == pytest.approx(1.0, abs=0.05)


def test_kernel_envelope_bounded(table20):
    rep = kn.kernel_envelope_check(table20)
    assert rep.max_ratio < 5.0
    assert rep.ratio_at_zero > 0
    assert table20.metadata["converged"]


def test_table_csv_roundtrip(table20, tmp_path):
    path = tmp_path / "k.csv"
    kn.table_to_csv(table20, path)
    back = kn.table_from_csv(path)
    assert back.space_id == "H2" and back.t == 20.0
    assert np.array_equal(back.r, table20.r)
    assert np.array_equal(back.values, table20.values)
    assert back.metadata["converged"] is True


# --- dyadic pieces --------------------------------------------------------


@given(st.floats(0.0, 4.0))
def test_dyadic_partition_of_unity(r):
    t = 30.0
    total = sum(float(kn.beta(t, m, r)) for m in kn.dyadic_range(t, 4.0))
    assert total == pytest.approx(1.0, abs=1e-12)


def test_dyadic_pieces_supported_in_shells():
    t = 30.0
    for m in range(0, 4):
        lo, hi = kn.shell(t, m)
        r = np.array([0.5 * lo, 1.05 * hi])
        assert np.all(kn.beta(t, m, r[r < lo]) == 0.0)
        assert kn.beta(t, m, r[-1]) == 0.0


def test_dyadic_reconstruction(table20):
    assert kn.dyadic_reconstruction_error(table20, 4.0) < 1e-12


def test_smooth_step_limits():
    assert kn.smooth_step([-1.0, 0.0, 1.0, 2.0]).tolist() == [0.0, 0.0, 1.0, 1.0]
    assert kn.smooth_step(0.5) == pytest.approx(0.5)


@pytest.mark.parametrize("space", ["H2", "H3"])
def test_shell_volume_ratio_bounded(space):
    t = 50.0
    ratios = [kn.shell_volume(space, t, m)["ratio"] for m in (1, 2, 3)]
    assert max(ratios) / min(ratios) < 1.5


def test_shell_volume_higher_rank_reports_degree():
    out = kn.shell_volume("SL3R", 10.0, (1, 1))
    assert out == {"degree": 5, "n": 5}


# --- compact projector ----------------------------------------------------


def test_projector_coefficients_nonnegative_and_concentrated():
    P = kn.compact_projector(20)
    assert np.all(P.coefficients >= 0)
    assert P.outside_mass < 1e-6
    assert P.residual_ok


def test_projector_pointwise_ratio_bounded():
    P = kn.compact_projector(20)
    th = np.linspace(0.05, 0.9, 40)
    assert np.max(kn.compact_pointwise_ratio(P, th)) < 10.0
    assert P.table(th).metadata["band"] == 60


def test_plancherel_density_odd_and_positive():
    nu = np.linspace(0.1, 5.0, 10)
    assert np.all(kn.plancherel_density(nu) > 0)
    assert np.allclose(kn.plancherel_density(-nu), kn.plancherel_density(nu))
    assert kn.plancherel_density(3.0) == pytest.approx(3.0 * math.tanh(3.0 * math.pi))
