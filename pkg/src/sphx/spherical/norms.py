"""L^p norms of bi-invariant functions through the Weyl integration formula."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from ..gausslegendre import gauss
from ..rootsys import get_space
from .realization import coords_from_angles


@dataclass(frozen=True)
class NormResult:
    value: float
    abs_error_est: float
    nodes_used: int
    converged: bool


def _as_p(p) -> float:
    if isinstance(p, str):
        if p.lower() in ("inf", "infinity", "oo"):
            return math.inf
        p = float(p)
    p = float(p)
    if not p >= 1:
        raise ValueError("p must lie in [1, inf]")
    return p


def _torus_rule(sp, n: int, radius: float | None):
    """Nodes (rows of H coordinates) and normalized Weyl-density weights."""
    if sp.id == "S2":
        c, w = gauss(n)
        H = np.arccos(c)[:, None]
        return H, w / 2.0
    if sp.id == "SU2group":
        x = 2 * np.pi * np.arange(n) / n
        dens = np.sin(x) ** 2
        return x[:, None], dens / dens.sum()
    if sp.id == "SU3group":
        a = 2 * np.pi * np.arange(n) / n
        P1, P2 = np.meshgrid(a, a, indexing="ij")
        phi = np.stack([P1.ravel(), P2.ravel(), -(P1 + P2).ravel()], axis=1)
        H = np.array([coords_from_angles(sp, v) for v in phi])
        dens = np.ones(H.shape[0])
        for i, j in ((0, 1), (0, 2), (1, 2)):
            dens *= 4 * np.sin(0.5 * (phi[:, i] - phi[:, j])) ** 2
        return H, dens / dens.sum()
    if not sp.is_compact and sp.r == 1:
        R = 3.0 if radius is None else radius
        x, w = gauss(n)
        x = 0.5 * R * (x + 1.0)
        w = 0.5 * R * w
        dens = np.ones_like(x)
        for root in sp.roots.positive_roots:
            dens *= np.abs(np.sinh(root.vector[0] * x)) ** root.multiplicity
        return x[:, None], w * dens
    raise NotImplementedError(f"no Weyl integration rule for {sp.id}")


def lp_norm(space, f: Callable[[np.ndarray], np.ndarray], p, n: int = 64,
            tol: float = 1e-10, max_n: int = 1 << 14, radius: float | None = None) -> NormResult:
    """``||f||_p`` for a K-biinvariant ``f`` given as a function of H coordinates.

    Compact spaces use the probability Haar measure; rank-one noncompact
    spaces integrate the unnormalized density ``prod sinh^m`` over
    ``0 <= x <= radius``.  ``n`` is the starting node count per torus
    direction; it doubles until successive values agree to ``tol``
    (relative).  ``p = inf`` takes the grid maximum under the same loop.
    """
    sp = get_space(space)
    p = _as_p(p)

    def ev(m):
        H, w = _torus_rule(sp, m, radius)
        v = np.abs(np.asarray(f(H)))
        if math.isinf(p):
            return float(v.max())
        return float(np.sum(w * v**p) ** (1.0 / p))

    m = max(8, n)
    prev, cur = ev(m // 2), ev(m)
    while abs(cur - prev) > tol * max(abs(cur), 1e-300) and 2 * m <= max_n:
        m *= 2
        prev, cur = cur, ev(m)
    err = abs(cur - prev)
    nodes = m ** sp.r if sp.id == "SU3group" else m
    return NormResult(cur, err, nodes, bool(err <= tol * max(abs(cur), 1e-300)))
