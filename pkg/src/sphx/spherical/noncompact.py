"""Spherical functions on the noncompact catalog spaces.

``phi_noncompact`` uses the fast reductions of the K-integral (a circle
average on H2, an octant-folded sphere/circle integral on SL3R, the closed
form on H3).  ``phi_noncompact_iwasawa`` integrates ``exp((rho + i lam)(H(k a)))``
directly over a K-grid with Iwasawa projections from principal minors; it is
slow but shares no code with the fast path and serves as its oracle.
"""

from __future__ import annotations

import math

import numpy as np

from .. import core
from ..gausslegendre import gauss
from ..rootsys import ChamberVector, SpectralParameter, get_space
from .quadrature import EvalResult, QuadratureSpec, refine
from .realization import _rz, _ry, diag_basis, diag_from_coords

_DEFAULT = QuadratureSpec()


def spectral_vector(lam) -> np.ndarray:
    """Coordinates of ``t * lam_tilde`` from a SpectralParameter or a plain vector."""
    if isinstance(lam, SpectralParameter):
        return lam.value()
    return np.atleast_1d(np.asarray(lam, float))


def point_vector(H) -> np.ndarray:
    if isinstance(H, ChamberVector):
        return H.vector
    return np.atleast_1d(np.asarray(H, float))


def _rank_one_data(sp, lam, H):
    a = sp.roots.simple_roots[0].vector
    nu = float(lam @ a / (a @ a))
    r = abs(float(a @ H))
    return nu, r


def _circle_eval(nu: float, r: float, spec: QuadratureSpec, strict: bool) -> EvalResult:
    if r == 0.0:
        return EvalResult(1.0 + 0j, 0.0, 1)
    n0 = spec.points_per_dim or int(16 + 4 * abs(nu) * r + 8 * math.exp(min(r, 8.0)))
    nuv = np.array([nu])
    rv = np.array([r])
    return refine(lambda n: core.circle_phi(nuv, rv, n)[0, 0], n0, spec, lambda n: n + 1, strict)


def h3_closed_form(nu: float, r: float) -> complex:
    """``sin(nu r) / (nu sinh r)`` with its limits at ``nu = 0`` and ``r = 0``."""
    if r == 0.0:
        return 1.0 + 0j
    sh = math.sinh(r)
    if nu == 0.0:
        return complex(r / sh)
    return complex(math.sin(nu * r) / (nu * sh))


def _sl3_eval(lam, H, sp, spec: QuadratureSpec, strict: bool) -> EvalResult:
    h = diag_from_coords(sp, H)
    if np.allclose(h, 0.0):
        return EvalResult(1.0 + 0j, 0.0, 1)
    q_re = diag_from_coords(sp, sp.roots.rho)
    q_im = diag_from_coords(sp, lam)
    c2 = complex(0.5 * (q_re[1] - q_re[0]), 0.5 * (q_im[1] - q_im[0]))
    c1 = complex(0.5 * (q_re[2] - q_re[1]), 0.5 * (q_im[2] - q_im[1]))
    # phase spread across K: lam(H) varies over the Weyl orbit
    spread = float(np.ptp([lam @ (w @ H) for w in sp.weyl.elements]))
    n0 = spec.points_per_dim or int(16 + 2 * spread + 4 * float(np.ptp(h)))

    def ev(n):
        return core.sl3_octant(h[0], h[1], h[2], c1.real, c1.imag, c2.real, c2.imag,
                               n, max(8, n // 2), n)

    return refine(ev, n0, spec, lambda n: n * max(8, n // 2) * (n // 2 + 1), strict)


def phi_noncompact(space, lam, H, q: QuadratureSpec | None = None, strict: bool = False) -> EvalResult:
    """``phi_{t lam}(exp H)`` with probability Haar measure on K.

    Parameters
    ----------
    space : catalog id or descriptor (noncompact)
    lam : SpectralParameter or coordinate vector of ``t * lam_tilde``
    H : ChamberVector or coordinate vector
    q : quadrature request; the error estimate is the half-size difference
    strict : raise ``QuadratureError`` instead of flagging non-convergence
    """
    sp = get_space(space)
    if sp.is_compact:
        raise ValueError(f"{sp.id} is compact; use phi_compact")
    q = q or _DEFAULT
    lam = spectral_vector(lam)
    H = point_vector(H)
    if lam.shape != (sp.r,) or H.shape != (sp.r,):
        raise ValueError(f"{sp.id} expects rank-{sp.r} vectors")
    if len(sp.factors) > 1:
        return _product(sp, lam, H, q, strict)
    if sp.id == "H2":
        return _circle_eval(*_rank_one_data(sp, lam, H), q, strict)
    if sp.id == "H3":
        return EvalResult(h3_closed_form(*_rank_one_data(sp, lam, H)), 1e-15, 0)
    if sp.id == "SL3R":
        return _sl3_eval(lam, H, sp, q, strict)
    raise NotImplementedError(f"no evaluator for {sp.id}")


def _product(sp, lam, H, q, strict) -> EvalResult:
    val, err, nodes, ok = 1.0 + 0j, 0.0, 0, True
    off = 0
    for fid in sp.factors:
        f = get_space(fid)
        sl = slice(off, off + f.r)
        res = phi_noncompact(f, lam[sl], H[sl], q, strict)
        err = abs(val) * res.abs_error_est + abs(res.value) * err
        val *= res.value
        nodes += res.nodes_used
        ok = ok and res.converged
        off += f.r
    return EvalResult(val, err, nodes, ok)


# --- independent reference path -------------------------------------------

def _iwasawa_log_diag(g: np.ndarray) -> np.ndarray:
    """Batched Iwasawa ``log a`` for ``g = n a k`` from lower-right principal minors."""
    M = g @ np.swapaxes(g, -1, -2)
    d = g.shape[-1]
    logs = np.empty(g.shape[:-2] + (d,))
    prev = 0.0
    for k in range(1, d + 1):
        minor = np.linalg.det(M[..., d - k:, d - k:])
        cur = 0.5 * np.log(minor)
        logs[..., d - k] = cur - prev
        prev = cur
    return logs


def iwasawa_H_batch(space, g: np.ndarray) -> np.ndarray:
    """Flat coordinates of the Iwasawa projections of a stack of matrices."""
    sp = get_space(space)
    return _iwasawa_log_diag(np.asarray(g, float)) @ diag_basis(sp).T


def k_grid(space, n: int):
    """Haar grid on K: circle trapezoid (SO(2)) or ZYZ Euler product (SO(3))."""
    sp = get_space(space)
    if sp.id == "H2":
        th = 2 * np.pi * np.arange(n) / n
        c, s = np.cos(th), np.sin(th)
        K = np.stack([np.stack([c, -s], -1), np.stack([s, c], -1)], -2)
        return K, np.full(n, 1.0 / n)
    if sp.id == "SL3R":
        a = 2 * np.pi * np.arange(n) / n
        xb, wb = gauss(n)
        Rz = np.array([_rz(v) for v in a])
        Ry = np.array([_ry(math.acos(v)) for v in xb])
        K = np.einsum("aij,bjk,ckl->abcil", Rz, Ry, Rz).reshape(-1, 3, 3)
        W = (np.ones(n)[:, None, None] * (wb / 2.0)[None, :, None] * np.ones(n)[None, None, :]) / n / n
        return K, W.reshape(-1)
    raise NotImplementedError(f"no K-grid for {sp.id}")


def phi_noncompact_iwasawa(space, lam, H, n: int = 48) -> complex:
    """Direct K-average of ``exp((rho + i lam)(H(k exp H)))`` (reference only)."""
    sp = get_space(space)
    lam = spectral_vector(lam)
    H = point_vector(H)
    K, w = k_grid(sp, n)
    a = np.diag(np.exp(diag_from_coords(sp, H)))
    Hk = iwasawa_H_batch(sp, K @ a)
    expo = Hk @ (sp.roots.rho + 1j * lam)
    return complex(np.sum(w * np.exp(expo)))


def weyl_symmetrized(space, lam, H, q: QuadratureSpec | None = None) -> complex:
    """Average of ``phi_{w lam}(exp H)`` over W; equal to phi by W-invariance."""
    sp = get_space(space)
    lam = spectral_vector(lam)
    vals = [phi_noncompact(sp, w @ lam, H, q).value for w in sp.weyl.elements]
    return complex(np.mean(vals))


def as_chamber(space, H) -> ChamberVector:
    sp = get_space(space)
    H = point_vector(H)
    dom = all(a(H) >= 0 for a in sp.roots.positive_roots)
    return ChamberVector(tuple(float(x) for x in H), dom)
