from __future__ import annotations

import os
import subprocess
import sys

import numpy as np
import pytest

from sphx.core import get_backend

cython = pytest.importorskip("sphx._core")
python = get_backend("python")


def test_sl3_octant_agrees():
    args = (0.4, 0.1, -0.5, 0.0, 12.0, 0.0, 7.0, 32, 16, 32)
    assert abs(cython.sl3_octant(*args) - python.sl3_octant(*args)) < 1e-12


def test_circle_phi_agrees():
    nu = np.linspace(0.5, 40.0, 37)
    r = np.linspace(0.05, 2.0, 23)
    assert np.allclose(cython.circle_phi(nu, r, 128), python.circle_phi(nu, r, 128), atol=1e-12)


def test_mehler_sum_agrees(rng):
    nu = np.linspace(0.5, 40.0, 50)
    r = np.linspace(0.0, 3.0, 30)
    w = rng.uniform(0.5, 1.5, nu.size)
    assert np.allclose(cython.mehler_sum(r, nu, w, 96), python.mehler_sum(r, nu, w, 96), atol=1e-11)


def test_su3_schur_agrees(rng):
    phi = rng.uniform(-np.pi, np.pi, (200, 3))
    phi[:, 2] = -phi[:, 0] - phi[:, 1]
    a, b = np.asarray(cython.su3_schur(7, 3, phi)), np.asarray(python.su3_schur(7, 3, phi))
    assert np.allclose(a, b, atol=1e-10)


def test_unknown_backend():
    with pytest.raises(ValueError):
        get_backend("fortran")


def test_env_forces_numpy_fallback():
    env = {**os.environ, "SPHX_BACKEND": "python"}
    out = subprocess.run([sys.executable, "-c", "import sphx.core as c; print(c.BACKEND)"],
                         env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "python"
