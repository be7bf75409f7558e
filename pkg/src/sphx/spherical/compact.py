"""Spherical functions on the compact catalog spaces.

S2 uses the Legendre recurrence.  The group types ``U x U / U`` have
``phi_mu = chi_V / dim V`` where ``mu = 2 * (highest weight of V)``; away from
the torus walls this is the Weyl alternating sum, and near them an exact
polynomial form (Chebyshev for SU(2), Jacobi-Trudi for SU(3)) replaces the
0/0 quotient.
"""

from __future__ import annotations

import math
from fractions import Fraction

import numpy as np

from .. import core
from ..rootsys import SpectralParameter, get_space, is_lattice_weight, labels_from_weight
from .quadrature import EvalResult
from .realization import group_angles

WALL_SIN = 1e-3


def weight_vector(space, mu) -> np.ndarray:
    sp = get_space(space)
    v = mu.value() if isinstance(mu, SpectralParameter) else np.atleast_1d(np.asarray(mu, float))
    if v.shape != (sp.r,):
        raise ValueError(f"{sp.id} expects a rank-{sp.r} weight")
    if not is_lattice_weight(sp, v):
        raise ValueError(f"{v} is not a dominant lattice weight of {sp.id}")
    return v


def weight_labels(space, mu) -> tuple[int, ...]:
    sp = get_space(space)
    return tuple(int(round(x)) for x in labels_from_weight(sp, weight_vector(sp, mu)))


def weyl_dimension(space, mu) -> int:
    """``prod <mu + rho, alpha> / <rho, alpha>`` over positive roots.

    For the group types this is ``dim V``; for S2 it is ``2l + 1``.
    """
    sp = get_space(space)
    rs = sp.roots
    mu = weight_vector(sp, mu)
    val = Fraction(1)
    for a in rs.positive_roots:
        num = rs.pairing(mu + rs.rho, a.vector)
        den = rs.pairing(rs.rho, a.vector)
        val *= Fraction(num / den).limit_denominator(10**6)
    if val.denominator != 1:
        raise ArithmeticError(f"non-integer Weyl dimension {val}: normalization bug")
    return int(val)


def spherical_dimension(space, mu) -> int:
    """Dimension of the spherical representation with spherical weight ``mu``.

    ``V (x) V*`` for the group types, the Weyl dimension otherwise.
    """
    sp = get_space(space)
    d = weyl_dimension(sp, mu)
    return d * d if _is_group_type(sp) else d


def _is_group_type(sp) -> bool:
    return sp.id in ("SU2group", "SU3group")


def legendre(l: int, x) -> np.ndarray:
    """``P_l(x)`` by the three-term recurrence (vectorized)."""
    x = np.asarray(x, float)
    p0 = np.ones_like(x)
    if l == 0:
        return p0
    p1 = x.copy()
    for k in range(1, l):
        p0, p1 = p1, ((2 * k + 1) * x * p1 - k * p0) / (k + 1)
    return p1


def chebyshev_u(n: int, c) -> np.ndarray:
    """``U_n(c)`` by recurrence; equals the SU(2) character at angle ``arccos c``."""
    c = np.asarray(c, float)
    u0 = np.ones_like(c)
    if n == 0:
        return u0
    u1 = 2 * c
    for _ in range(1, n):
        u0, u1 = u1, 2 * c * u1 - u0
    return u1


def weyl_alternating_sum(space, weight, Hs) -> np.ndarray:
    """``sum_w sgn(w) exp(i (w weight)(H))`` for each row of ``Hs``."""
    sp = get_space(space)
    Hs = np.atleast_2d(np.asarray(Hs, float))
    W = sp.weyl
    out = np.zeros(Hs.shape[0], dtype=complex)
    for i, w in enumerate(W.elements):
        out += W.sign(i) * np.exp(1j * Hs @ (w @ weight))
    return out


def _min_sin(sp, Hs) -> np.ndarray:
    S = np.array([a.vector for a in sp.roots.positive_roots])
    return np.min(np.abs(np.sin(Hs @ S.T)), axis=1)


def _character_exact(sp, labels, Hs) -> np.ndarray:
    if sp.id == "SU2group":
        return chebyshev_u(labels[0], np.cos(Hs[:, 0])).astype(complex)
    phi = np.array([group_angles(sp, h) for h in Hs])
    a, b = labels
    return np.asarray(core.su3_schur(a + b, b, np.ascontiguousarray(phi)))


def character_values(space, mu, Hs, method: str = "auto") -> np.ndarray:
    """Character of ``V`` (``mu = 2 * highest weight``) on torus points ``exp(H)``.

    ``method`` is ``"weyl"``, ``"exact"`` or ``"auto"`` (Weyl formula away from
    walls, exact polynomial within ``WALL_SIN`` of one).
    """
    sp = get_space(space)
    if not _is_group_type(sp):
        raise ValueError(f"{sp.id} is not of group type")
    mu = weight_vector(sp, mu)
    labels = weight_labels(sp, mu)
    Hs = np.atleast_2d(np.asarray(Hs, float))
    if method == "exact":
        return _character_exact(sp, labels, Hs)
    rho = sp.roots.rho
    near = _min_sin(sp, Hs) < WALL_SIN
    if method == "weyl":
        near[:] = False
    out = np.empty(Hs.shape[0], dtype=complex)
    far = ~near
    if np.any(far):
        out[far] = weyl_alternating_sum(sp, mu + rho, Hs[far]) / weyl_alternating_sum(sp, rho, Hs[far])
    if np.any(near):
        out[near] = _character_exact(sp, labels, Hs[near])
    return out


def phi_compact_values(space, mu, Hs) -> np.ndarray:
    """Vectorized ``phi_mu(exp H)`` for the rows of ``Hs``."""
    sp = get_space(space)
    if not sp.is_compact:
        raise ValueError(f"{sp.id} is noncompact; use phi_noncompact")
    Hs = np.atleast_2d(np.asarray(Hs, float))
    mu = weight_vector(sp, mu)
    if sp.id == "S2":
        l = weight_labels(sp, mu)[0]
        return legendre(l, np.cos(Hs[:, 0])).astype(complex)
    if _is_group_type(sp):
        return character_values(sp, mu, Hs) / weyl_dimension(sp, mu)
    raise NotImplementedError(f"no evaluator for {sp.id}")


def phi_compact(space, mu, H, q=None) -> EvalResult:
    """``phi_mu(exp H)`` with ``phi_mu(e) = 1``.

    ``q`` is accepted for interface symmetry; all evaluators here are exact
    up to roundoff, which is what the error estimate reports.
    """
    sp = get_space(space)
    H = np.atleast_1d(np.asarray(getattr(H, "vector", H), float))
    val = complex(phi_compact_values(sp, mu, H[None, :])[0])
    size = max(1, int(np.sum(weight_labels(sp, mu))))
    return EvalResult(val, 4e-16 * size, 0)


def su2_sym_power(n: int, g: np.ndarray) -> np.ndarray:
    """Matrix of ``g`` in SU(2) acting on ``Sym^n C^2`` (basis ``e1^{n-k} e2^k``)."""
    a, b = g[0, 0], g[1, 0]
    c, d = g[0, 1], g[1, 1]
    M = np.zeros((n + 1, n + 1), dtype=complex)
    # column k: (a e1 + b e2)^{n-k} (c e1 + d e2)^k expanded
    for k in range(n + 1):
        p = np.array([1.0 + 0j])
        for _ in range(n - k):
            p = np.convolve(p, [a, b])
        for _ in range(k):
            p = np.convolve(p, [c, d])
        M[:, k] = p
    return M


def su2_trace_character(n: int, theta: float) -> complex:
    """Trace of ``diag(e^{i theta}, e^{-i theta})`` on ``Sym^n``: explicit sum of eigenvalues."""
    g = np.diag([np.exp(1j * theta), np.exp(-1j * theta)])
    return complex(np.trace(su2_sym_power(n, g)))


def compact_alcove_length(space) -> float:
    """Length of the rank-one torus interval ``[0, pi]`` in flat coordinates."""
    sp = get_space(space)
    return math.pi / float(np.linalg.norm(sp.roots.simple_roots[0].vector))
