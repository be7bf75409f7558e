from __future__ import annotations

import json
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from sphx.rootsys import (
    build_catalog,
    catalog_json,
    chamber_decompose,
    dual_vector,
    generate_weyl,
    get_space,
    regularity_gap,
    root_system_from_simple,
)

CATALOG = build_catalog()
IDS = sorted(CATALOG)


def test_catalog_contents():
    assert {"H2", "H3", "SL3R", "S2", "SU2group", "SU3group", "H2xH2"} <= set(CATALOG)
    expected = {"H2": (2, 1), "H3": (3, 1), "SL3R": (5, 2), "S2": (2, 1), "SU2group": (3, 1),
                "SU3group": (8, 2), "H2xH2": (4, 2)}
    for sid, (n, r) in expected.items():
        assert (CATALOG[sid].n, CATALOG[sid].r) == (n, r)


def test_sl3r_dimension_from_realization():
    # dim SL(3,R) - dim SO(3)
    assert CATALOG["SL3R"].n == (9 - 1) - 3


@pytest.mark.parametrize("sid", IDS)
def test_root_mass_identity(sid):
    sp = CATALOG[sid]
    assert sp.roots.total_mass == 2 * sp.n - 2 * sp.r


def test_su3group_multiplicities():
    rs = CATALOG["SU3group"].roots
    assert rs.cartan_type == "A2"
    assert [a.multiplicity for a in rs.positive_roots] == [2, 2, 2]
    assert rs.total_mass == 12


@pytest.mark.parametrize("sid,order", [("H2", 2), ("SL3R", 6), ("H2xH2", 4), ("SU3group", 6)])
def test_weyl_orders(sid, order):
    assert len(CATALOG[sid].weyl) == order


@pytest.mark.parametrize("sid", IDS)
def test_weyl_group_closed_and_preserves_killing(sid):
    sp = CATALOG[sid]
    W, K = sp.weyl, sp.roots.killing
    for a in W.elements:
        assert np.allclose(a.T @ K @ a, K, atol=1e-12)
        for b in W.elements:
            assert any(np.allclose(a @ b, c, atol=1e-9) for c in W.elements)


@pytest.mark.parametrize("sid", IDS)
def test_weyl_permutes_roots_with_multiplicity(sid):
    sp = CATALOG[sid]
    roots = sp.roots.all_roots()
    for i in range(len(sp.weyl)):
        for a in roots:
            img = sp.weyl.act_on_dual(i, a.coords)
            match = [b for b in roots if np.allclose(b.vector, img, atol=1e-9)]
            assert len(match) == 1 and match[0].multiplicity == a.multiplicity


@pytest.mark.parametrize("sid", IDS)
def test_reflection_closure(sid):
    rs = CATALOG[sid].roots
    Kinv = rs.killing_inv
    roots = [a.vector for a in rs.all_roots()]
    for a in roots:
        for b in roots:
            refl = b - 2 * (b @ Kinv @ a) / (a @ Kinv @ a) * a
            assert any(np.allclose(refl, c, atol=1e-9) for c in roots)


@pytest.mark.parametrize("sid", IDS)
def test_positive_roots_are_nonnegative_combinations(sid):
    rs = CATALOG[sid].roots
    S = np.array([a.vector for a in rs.simple_roots])
    for a, coef in zip(rs.positive_roots, rs.simple_coefficients):
        assert all(c >= 0 for c in coef)
        assert np.allclose(np.asarray(coef) @ S, a.vector)


def test_dual_vector_a1_normalized():
    rs = root_system_from_simple([(math.sqrt(2.0),)], 1, np.eye(1), "A1")
    a = rs.simple_roots[0]
    assert a(dual_vector(rs, a)) == pytest.approx(2.0)


def test_dual_vector_a2_pairing():
    rs = root_system_from_simple([(math.sqrt(2.0), 0.0), (-1 / math.sqrt(2.0), math.sqrt(1.5))], 1,
                                 np.eye(2), "A2")
    a, b = rs.simple_roots
    assert rs.pairing(a.vector, b.vector) == pytest.approx(-1.0)
    assert a(dual_vector(rs, b)) == pytest.approx(-1.0)
    for x in rs.positive_roots:
        for y in rs.positive_roots:
            Hx, Hy = dual_vector(rs, x), dual_vector(rs, y)
            assert Hx @ rs.killing @ Hy == pytest.approx(rs.pairing(x.vector, y.vector))


def test_dual_vector_rejects_singular_killing():
    rs = CATALOG["H2"].roots
    bad = type(rs)(rs.rank, rs.positive_roots, rs.simple_roots, rs.simple_coefficients,
                   np.zeros((1, 1)), rs.cartan_type)
    with pytest.raises(ValueError):
        dual_vector(bad, rs.simple_roots[0])


def test_chamber_decompose_examples():
    rs = CATALOG["H2"].roots
    i, Hp = chamber_decompose(rs, [0.7])
    assert i == 0 and Hp.coords == (0.7,)
    i, Hp = chamber_decompose(rs, [-2.0])
    assert i == 1 and Hp.coords == pytest.approx((2.0,))


@given(st.lists(st.floats(-5, 5, allow_nan=False), min_size=2, max_size=2))
def test_chamber_decompose_a2_dominant_and_w_invariant(h):
    sp = CATALOG["SL3R"]
    rs = sp.roots
    _, Hp = chamber_decompose(rs, h, sp.weyl)
    assert all(a(Hp.vector) >= -1e-9 for a in rs.positive_roots)
    for w in sp.weyl.elements:
        _, Hw = chamber_decompose(rs, w @ np.asarray(h), sp.weyl)
        assert np.allclose(Hw.vector, Hp.vector, atol=1e-9)


def test_regularity_gap():
    assert regularity_gap(CATALOG["SL3R"].roots, [0.0, 0.0]) == 0.0
    rs = CATALOG["H2"].roots
    H = 0.3 / rs.simple_roots[0].vector
    assert regularity_gap(rs, H) == pytest.approx(0.3)
    wall = CATALOG["SL3R"].roots.fundamental_coweights()[1]  # alpha_1 vanishes
    assert regularity_gap(CATALOG["SL3R"].roots, wall) == pytest.approx(0.0, abs=1e-15)


def test_catalog_json_keys():
    data = json.loads(catalog_json())
    keys = {"id", "duality", "n", "r", "simple_roots", "positive_roots", "multiplicities", "killing",
            "realization"}
    assert len(data) == len(CATALOG)
    for entry in data:
        assert set(entry) == keys


def test_generate_weyl_deterministic():
    rs = CATALOG["SL3R"].roots
    a, b = generate_weyl(rs), generate_weyl(rs)
    assert a.words == b.words
    assert [len(w) for w in a.words] == sorted(len(w) for w in a.words)


def test_compact_weight_lattice_integrality():
    for sid in ("S2", "SU2group", "SU3group"):
        sp = get_space(sid)
        rs = sp.roots
        for mu in sp.weight_lattice_basis:
            for a in rs.positive_roots:
                q = rs.pairing(mu, a.vector) / rs.pairing(a.vector, a.vector)
                assert q > -1e-12 and abs(q - round(q)) < 1e-12


def test_unknown_space():
    with pytest.raises(KeyError):
        get_space("SO5")


def test_product_flagged_reducible():
    assert not CATALOG["H2xH2"].is_irreducible
    assert all(CATALOG[s].is_irreducible for s in IDS if s != "H2xH2")
