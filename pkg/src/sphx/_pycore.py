"""Pure numpy implementations of the hot loops.

These are the reference implementations; ``_core.pyx`` mirrors them and the
backend tests require agreement to roundoff.

SO(3) geometry used by :func:`sl3_octant`
-----------------------------------------
For ``k`` in SO(3) with third row ``n3`` and first row ``n1`` and
``a = diag(e^{x_l})``, the Iwasawa projection of ``k a`` depends only on

    A1 = sum_l n3_l^2 e^{2 x_l},   A2 = sum_l n1_l^2 e^{-2 x_l}.

``n3`` is uniform on the sphere and ``n1`` uniform on the circle orthogonal
to it.  The integrand depends on squares only, so the sphere integral folds
onto one octant.  Along the circle ``A2 = P + S cos(u)`` after a phase shift,
and the trapezoid rule in ``u`` is spectrally accurate.
"""

from __future__ import annotations

import numpy as np

from .gausslegendre import gauss


def _gauss(n: int, a: float, b: float):
    return gauss(n, a, b)


def _half_trapezoid(n_u: int):
    k = np.arange(n_u // 2 + 1)
    w = np.full(k.size, 2.0 / n_u)
    w[0] = 1.0 / n_u
    if n_u % 2 == 0:
        w[-1] = 1.0 / n_u
    return np.cos(2 * np.pi * k / n_u), w


def sl3_octant(x0, x1, x2, c1r, c1i, c2r, c2i, n_cos, n_phi, n_u) -> complex:
    ct, wct = _gauss(n_cos, 0.0, 1.0)
    ph, wph = _gauss(n_phi, 0.0, 0.5 * np.pi)
    C, PH = np.meshgrid(ct, ph, indexing="ij")
    S = np.sqrt(1.0 - C * C)
    cp, sp = np.cos(PH), np.sin(PH)
    n = (S * cp, S * sp, C)
    e = (C * cp, C * sp, -S)
    f = (-sp, cp)
    w = np.exp(2.0 * np.array([x0, x1, x2]))
    v = 1.0 / w
    A1 = n[0] ** 2 * w[0] + n[1] ** 2 * w[1] + n[2] ** 2 * w[2]
    E = e[0] ** 2 * v[0] + e[1] ** 2 * v[1] + e[2] ** 2 * v[2]
    F = f[0] ** 2 * v[0] + f[1] ** 2 * v[1]
    G = e[0] * f[0] * v[0] + e[1] * f[1] * v[1]
    P = 0.5 * (E + F)
    R = np.sqrt(0.25 * (E - F) ** 2 + G**2)
    cu, wu = _half_trapezoid(n_u)
    c1 = complex(c1r, c1i)
    c2 = complex(c2r, c2i)
    inner = np.zeros(C.shape, dtype=complex)
    for ck, wk in zip(cu, wu):
        inner += wk * np.exp(c2 * np.log(P + R * ck))
    tot = np.sum(wct[:, None] * wph[None, :] * np.exp(c1 * np.log(A1)) * inner)
    return complex(tot / (0.5 * np.pi))


def _trap_pi(n_theta: int):
    th = np.pi * np.arange(n_theta + 1) / n_theta
    w = np.full(n_theta + 1, 1.0 / n_theta)
    w[0] = w[-1] = 0.5 / n_theta
    return np.cos(th), w


def circle_phi(nu, r, n_theta) -> np.ndarray:
    nu = np.asarray(nu, float)
    r = np.asarray(r, float)
    cth, wth = _trap_pi(n_theta)
    L = np.log(np.cosh(r)[:, None] - np.sinh(r)[:, None] * cth[None, :])  # (b, k)
    amp = wth[None, :] * np.exp(-0.5 * L)
    out = np.empty((nu.size, r.size), dtype=complex)
    for i, v in enumerate(nu):
        out[i] = np.sum(amp * np.exp(-1j * v * L), axis=1)
    return out


def mehler_sum(r, nu, w, n_s) -> np.ndarray:
    r = np.asarray(r, float)
    nu = np.asarray(nu, float)
    w = np.asarray(w, float)
    xg, wg = _gauss(n_s, 0.0, 1.0)
    out = np.empty(r.size)
    for j, rj in enumerate(r):
        if rj <= 0.0:
            out[j] = w.sum()
            continue
        V = np.sqrt(rj)
        v = V * xg
        s = rj - v * v
        ker = V * wg * 2.0 * v / np.sqrt(2.0 * np.sinh(rj - 0.5 * v * v) * np.sinh(0.5 * v * v))
        out[j] = np.sqrt(2.0) / np.pi * np.sum(ker * (np.cos(np.outer(s, nu)) @ w))
    return out


def su3_schur(l1, l2, phi) -> np.ndarray:
    phi = np.asarray(phi, float)
    x = np.exp(1j * phi)
    top = l1 + 2
    h = np.zeros((top + 1, phi.shape[0]), dtype=complex)
    h[0] = 1.0
    for k in range(1, top + 1):
        h[k] = h[k - 1] * x[:, 0]
    for col in (1, 2):
        for k in range(1, top + 1):
            h[k] = h[k] + x[:, col] * h[k - 1]
    a = h[l1] * h[l2]
    b = h[l1 + 1] * h[l2 - 1] if l2 >= 1 else 0.0
    return a - b
