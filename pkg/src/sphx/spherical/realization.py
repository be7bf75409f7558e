"""Concrete matrix realizations of the catalog spaces.

Noncompact spaces use ``G = N A K`` with ``N`` upper triangular, so the
Iwasawa projection of ``g`` is read off an RQ factorization.  The flat
coordinates ``x`` map to diagonal entries ``h = D^T x`` where the rows of
``D`` are trace-orthonormal traceless diagonals.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np
from scipy.linalg import expm, rq

from ..gausslegendre import gauss
from ..rootsys import get_space

_DIAG = {
    "H2": np.array([[1.0, -1.0]]) / math.sqrt(2.0),
    "H3": np.array([[1.0, -1.0]]) / math.sqrt(2.0),
    "SL3R": np.array([[1.0, -1.0, 0.0], [1.0, 1.0, -2.0]]) / np.array([[math.sqrt(2.0)], [math.sqrt(6.0)]]),
    # compact group types: group angles phi = sqrt(2) D^T x
    "SU2group": np.array([[1.0, -1.0]]) / math.sqrt(2.0),
    "SU3group": np.array([[1.0, -1.0, 0.0], [1.0, 1.0, -2.0]]) / np.array([[math.sqrt(2.0)], [math.sqrt(6.0)]]),
}


def diag_basis(space) -> np.ndarray:
    sp = get_space(space)
    if sp.id not in _DIAG:
        raise ValueError(f"no diagonal realization for {sp.id}")
    return _DIAG[sp.id]


def diag_from_coords(space, x) -> np.ndarray:
    """Diagonal entries ``h`` of ``H`` (noncompact) from flat coordinates."""
    return np.asarray(x, float) @ diag_basis(space)


def coords_from_diag(space, h) -> np.ndarray:
    return diag_basis(space) @ np.asarray(h, float)


def group_angles(space, x) -> np.ndarray:
    """Eigen-angles of the group element ``exp(2D)`` for compact group types."""
    return math.sqrt(2.0) * diag_from_coords(space, x)


def coords_from_angles(space, phi) -> np.ndarray:
    return coords_from_diag(space, np.asarray(phi, float) / math.sqrt(2.0))


@dataclass(frozen=True)
class GroupElement:
    matrix: np.ndarray
    space_id: str

    def __post_init__(self):
        m = np.asarray(self.matrix)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError("group element must be a square matrix")
        sp = get_space(self.space_id)
        if sp.id in ("H2", "SL3R") and abs(np.linalg.det(m) - 1.0) > 1e-10:
            raise ValueError("matrix is not in SL(n, R)")


def exp_a(space, x) -> np.ndarray:
    """``exp(H)`` as a diagonal matrix."""
    return np.diag(np.exp(diag_from_coords(space, x)))


def iwasawa_H(g, space=None) -> np.ndarray:
    """Flat coordinates of the A-component of ``g = n exp(H) k``.

    Parameters
    ----------
    g : GroupElement or ndarray
    space : catalog id, needed when ``g`` is a bare matrix
    """
    if isinstance(g, GroupElement):
        space, mat = g.space_id, np.asarray(g.matrix, float)
    else:
        mat = np.asarray(g, float)
    R, Q = rq(mat)
    s = np.sign(np.diag(R))
    if np.any(s == 0):
        raise ValueError("factorization breakdown: g is singular")
    R = R * s[None, :]
    Q = s[:, None] * Q
    d = np.diag(R)
    a = np.diag(d)
    n = R @ np.diag(1.0 / d)
    if np.linalg.norm(n @ a @ Q - mat) > 1e-10 * max(1.0, np.linalg.norm(mat)):
        raise ValueError("Iwasawa residual too large")
    return coords_from_diag(space, np.log(d))


def iwasawa_factors(g: np.ndarray):
    """(n, a, k) with ``g = n a k``."""
    R, Q = rq(np.asarray(g, float))
    s = np.sign(np.diag(R))
    R = R * s[None, :]
    Q = s[:, None] * Q
    d = np.diag(R)
    return R @ np.diag(1.0 / d), np.diag(d), Q


def weyl_representative(space, w_index: int) -> np.ndarray:
    """Signed permutation matrix in K implementing the Weyl element."""
    sp = get_space(space)
    W = sp.weyl.elements[w_index]
    D = diag_basis(sp)
    d = D.shape[1]
    probe = np.array([0.37, -0.11, 0.05, 0.2][:sp.r])
    target = diag_from_coords(sp, W @ probe)
    h = diag_from_coords(sp, probe)
    for perm in itertools.permutations(range(d)):
        P = np.zeros((d, d))
        for i in range(d):
            P[i, perm[i]] = 1.0
        if np.allclose(P @ h, target, atol=1e-12):
            if np.linalg.det(P) < 0:
                P[0] *= -1.0
            return P
    raise RuntimeError("no permutation realizes the Weyl element")


@dataclass(frozen=True)
class AdaptedDirection:
    """Unit vector ``Y`` (for minus the Killing form) in ``g_alpha + g_{-alpha}``."""

    matrix: np.ndarray
    root_index: int
    pair: tuple[int, int]


def root_adapted_basis(space) -> list[AdaptedDirection]:
    """Infinitesimal rotations matched to the positive roots (noncompact)."""
    sp = get_space(space)
    kappa = sp.normalization[0]
    D = diag_basis(sp)
    d = D.shape[1]
    out = []
    for i, j in itertools.combinations(range(d), 2):
        M = np.zeros((d, d))
        M[i, j], M[j, i] = 1.0, -1.0
        M = M / math.sqrt(-kappa * np.trace(M @ M))
        e = np.zeros(d)
        e[i], e[j] = 1.0, -1.0
        alpha = D @ e
        idx = None
        for k, a in enumerate(sp.roots.positive_roots):
            if np.allclose(a.vector, alpha, atol=1e-12) or np.allclose(a.vector, -alpha, atol=1e-12):
                idx = k
        if idx is None:
            raise RuntimeError("root-adapted direction without a matching root")
        out.append(AdaptedDirection(M, idx, (i, j)))
    return out


def rotation(Y: np.ndarray, s: float) -> np.ndarray:
    return expm(s * Y)


def haar_so3_euler(n: int):
    """ZYZ Euler-angle product rule on SO(3): (matrices, weights summing to 1)."""
    a = 2 * np.pi * np.arange(n) / n
    x, w = gauss(n)
    mats, wts = [], []
    for al in a:
        Rz1 = _rz(al)
        for cb, wb in zip(x, w):
            Ry = _ry(math.acos(cb))
            for ga in a:
                mats.append(Rz1 @ Ry @ _rz(ga))
                wts.append(wb / 2.0 / n / n)
    return np.array(mats), np.array(wts)


def _rz(t):
    c, s = math.cos(t), math.sin(t)
    return np.array([[c, -s, 0.0], [s, c, 0.0], [0.0, 0.0, 1.0]])


def _ry(t):
    c, s = math.cos(t), math.sin(t)
    return np.array([[c, 0.0, s], [0.0, 1.0, 0.0], [-s, 0.0, c]])


def su2_cartan_angle(g: np.ndarray) -> float:
    """Angle in [0, pi] of the eigenvalues e^{+-i theta} of g in SU(2)."""
    return float(math.acos(max(-1.0, min(1.0, np.real(np.trace(g)) / 2.0))))


def su_cartan_angles(g: np.ndarray) -> np.ndarray:
    """Eigen-angles of ``g`` in SU(n), sorted decreasingly."""
    ang = np.angle(np.linalg.eigvals(g))
    return np.sort(ang)[::-1]


def torus_su2(theta: float) -> np.ndarray:
    """Half-angle torus element ``diag(e^{i theta/2}, e^{-i theta/2})``."""
    return np.diag([np.exp(0.5j * theta), np.exp(-0.5j * theta)])

