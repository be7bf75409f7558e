"""Gaussian beams: highest-weight matrix coefficients concentrated on a torus.

Chart convention shared by both compact rank-one spaces: a point has a polar
angle ``theta`` measured from the axis orthogonal to the torus ``T`` (so
``T = {theta = pi/2}``) and a torus angle ``phi``.  In it ``|b| = sin(theta)^t``.

* S2: the point ``p = u e1`` on the unit sphere; ``b = (p_x + i p_y)^t``.
* SU2group: the point ``g = u1 u2^{-1}`` in SU(2); ``b = g_11^t``, the
  highest-weight coefficient of ``Sym^t``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..gausslegendre import gauss
from ..exponents import L_of
from ..rootsys import SpectralParameter, get_space
from .compact import phi_compact_values, spherical_dimension, su2_sym_power, weight_labels
from .norms import lp_norm

CHART_FLOOR = 1e-12


@dataclass(frozen=True)
class BeamFunction:
    space_id: str
    mu: SpectralParameter

    def __post_init__(self):
        sp = get_space(self.space_id)
        if sp.id not in ("S2", "SU2group"):
            raise NotImplementedError(f"beams are realized on S2 and SU2group, not {sp.id}")
        weight_labels(sp, self.mu)  # lattice check

    @property
    def t(self) -> int:
        return weight_labels(self.space_id, self.mu)[0]


def beam(space, t: int) -> BeamFunction:
    sp = get_space(space)
    return BeamFunction(sp.id, SpectralParameter(tuple(sp.weight_lattice_basis[0]), float(t)))


def chart_point(space, theta: float, phi: float = 0.0) -> np.ndarray:
    """Realization element at chart coordinates ``(theta, phi)``."""
    sp = get_space(space)
    if sp.id == "S2":
        # rotation taking e1 to (sin th cos ph, sin th sin ph, cos th)
        p = np.array([math.sin(theta) * math.cos(phi), math.sin(theta) * math.sin(phi), math.cos(theta)])
        e = np.array([-math.sin(phi), math.cos(phi), 0.0])
        return np.column_stack([p, e, np.cross(p, e)])
    a = math.sin(theta) * np.exp(1j * phi)
    b = math.cos(theta)
    return np.array([[a, -b], [b, np.conj(a)]])


def _coefficient(space_id: str, u: np.ndarray) -> complex:
    if space_id == "S2":
        p = u[:, 0]
        return complex(p[0], p[1])
    return complex(u[0, 0])


def beam_eval(b: BeamFunction, u) -> complex:
    """``b(u)`` for a realization matrix or a ``(theta, phi)`` chart point.

    SU2group also accepts a pair ``(u1, u2)`` of SU(2) matrices.
    """
    if isinstance(u, tuple) and len(u) == 2 and np.ndim(u[0]) == 2:
        u = np.asarray(u[0]) @ np.conj(np.asarray(u[1])).T
    elif isinstance(u, tuple):
        u = chart_point(b.space_id, *u)
    u = np.asarray(u)
    z = _coefficient(b.space_id, u)
    if abs(z) < CHART_FLOOR:
        raise ValueError("point lies outside the beam chart (b vanishes identically there)")
    return z ** b.t


def beam_eval_matrix_coefficient(b: BeamFunction, g: np.ndarray) -> complex:
    """SU2group beam as the (0, 0) entry of ``Sym^t(g)``: independent of the closed form."""
    if b.space_id != "SU2group":
        raise ValueError("matrix-coefficient route is for SU2group")
    return complex(su2_sym_power(b.t, np.asarray(g))[0, 0])


def transverse_point(space, s: float, torus_angle: float = 0.0) -> np.ndarray:
    """``exp(s V_alpha)`` applied at the torus point, ``V_alpha`` unit for minus Killing.

    S2: the unit rotation generator has ``-B = 2``, so arc length is ``s / sqrt 2``.
    SU2group: ``g = exp(2 s Z)`` with ``-B(Z, -Z) = 1`` gives arc ``s / 2``.
    """
    sp = get_space(space)
    scale = 1.0 / math.sqrt(2.0) if sp.id == "S2" else 0.5
    return chart_point(sp, 0.5 * math.pi - scale * s, torus_angle)


def transverse_profile(b: BeamFunction, s, torus_angle: float = 0.0) -> np.ndarray:
    """``-log|b|`` along the transverse geodesic through a torus point."""
    return np.array([-math.log(abs(beam_eval(b, transverse_point(b.space_id, float(x), torus_angle))))
                     for x in np.atleast_1d(s)])


def predicted_transverse_curvature(b: BeamFunction) -> float:
    """``t * mu_tilde(H_alpha)`` with the Killing pairing."""
    sp = get_space(b.space_id)
    rs = sp.roots
    mu_t = np.asarray(b.mu.direction, float)
    return b.mu.scale * rs.pairing(mu_t, rs.simple_roots[0].vector)


def transverse_hessian_fd(b: BeamFunction, h: float = 1e-3, torus_angle: float = 0.0) -> float:
    f = transverse_profile(b, [-h, 0.0, h], torus_angle)
    return float((f[0] - 2 * f[1] + f[2]) / (h * h))


def transverse_fit(b: BeamFunction, smax: float = 0.2, npts: int = 21, torus_angle: float = 0.0):
    """Even polynomial fit ``c2 s^2 + c4 s^4`` of the profile; returns ``(2 c2, c4)``."""
    s = np.linspace(-smax, smax, npts)
    y = transverse_profile(b, s, torus_angle)
    A = np.column_stack([s**2, s**4])
    c, *_ = np.linalg.lstsq(A, y, rcond=None)
    return float(2 * c[0]), float(c[1])


def _beam_moment_rule(space_id: str, n: int):
    """Nodes ``v in [0, 1]`` with ``|b|^{2/t} = v`` distribution under Haar measure.

    S2: ``|b|^{2/t} = 1 - c^2`` with ``c = cos theta`` uniform on [-1, 1].
    SU2group: ``|b|^{2/t} = |g_11|^2``, uniform on [0, 1] for Haar measure.
    """
    x, w = gauss(n)
    if space_id == "S2":
        c = 0.5 * (x + 1.0)
        return 1.0 - c * c, 0.5 * w
    v = 0.5 * (x + 1.0)
    return v, 0.5 * w


def beam_lp_norm(b: BeamFunction, p, n: int = 256) -> float:
    """``||b||_p`` under the probability measure (``p`` may be ``inf``)."""
    p = float("inf") if str(p).lower() in ("inf", "infinity") else float(p)
    if math.isinf(p):
        return 1.0
    if b.t == 0:
        return 1.0
    v, w = _beam_moment_rule(b.space_id, n)
    return float(np.sum(w * v ** (0.5 * b.t * p)) ** (1.0 / p))


def beam_lp_closed_form(space, t: int, p: float) -> float:
    """Closed forms of ``||b||_p`` used as test oracles."""
    sp = get_space(space)
    q = 0.5 * t * p
    if sp.id == "S2":
        lg = 0.5 * math.log(math.pi) + math.lgamma(q + 1) - math.log(2.0) - math.lgamma(q + 1.5)
        return math.exp(lg / p)
    return (1.0 / (q + 1.0)) ** (1.0 / p)


@dataclass(frozen=True)
class FitReport:
    slope: float
    expected: float
    tolerance: float
    xs: tuple[float, ...]
    ys: tuple[float, ...]

    @property
    def passed(self) -> bool:
        return abs(self.slope - self.expected) <= self.tolerance


def loglog_slope(xs, ys) -> float:
    lx, ly = np.log(np.asarray(xs, float)), np.log(np.asarray(ys, float))
    return float(np.polyfit(lx, ly, 1)[0])


def beam_l2_lower(space, t_grid, tol: float = 0.05) -> FitReport:
    """Slope of ``log ||b_t||_2`` against ``log t``; expected ``-(n - r)/4``."""
    sp = get_space(space)
    ys = [beam_lp_norm(beam(sp, t), 2) for t in t_grid]
    return FitReport(loglog_slope(t_grid, ys), -(sp.n - sp.r) / 4.0, tol,
                     tuple(float(t) for t in t_grid), tuple(ys))


def beam_decay_check(space, t: int, D: tuple[float, float], npts: int = 401) -> float:
    """Max of ``|b_t|`` over the chart band ``theta in D`` (all torus angles).

    ``D`` must stay away from ``T = {theta = pi/2}``.
    """
    lo, hi = D
    if not (0.0 <= lo <= hi < 0.5 * math.pi - 1e-9):
        raise ValueError("region must be compact and at positive distance from the torus")
    b = beam(space, t)
    best = 0.0
    for th in np.linspace(lo, hi, npts):
        if math.sin(th) < CHART_FLOOR:
            continue
        for ph in (0.0, 1.1, 2.3):
            best = max(best, abs(beam_eval(b, (float(th), ph))))
    return best


def beam_lp_scaling(space, p, t_grid, tol: float = 0.1) -> FitReport:
    """Slope of ``log ||t^{(n-r)/4} b_t||_p`` in ``log t``; expected ``L(v1, p) / 2``."""
    sp = get_space(space)
    ys = [t ** ((sp.n - sp.r) / 4.0) * beam_lp_norm(beam(sp, t), p) for t in t_grid]
    expected = float(L_of([1] * sp.r, p, sp)) / 2.0
    return FitReport(loglog_slope(t_grid, ys), expected, tol, tuple(float(t) for t in t_grid), tuple(ys))


def zonal_lp_scaling(space, p, t_grid, tol: float = 0.1) -> FitReport:
    """Slope of ``log ||phi_{t mu}||_p / ||phi_{t mu}||_2``; expected ``L(v0, p) / 2``.

    ``mu`` is the first spherical lattice generator.
    """
    sp = get_space(space)
    mu0 = sp.weight_lattice_basis[0]
    ys = []
    for t in t_grid:
        mu = t * mu0

        def f(H, mu=mu):
            return phi_compact_values(sp, mu, H)

        ys.append(lp_norm(sp, f, p, n=256).value / lp_norm(sp, f, 2).value)
    expected = float(L_of([0] * sp.r, p, sp)) / 2.0
    return FitReport(loglog_slope(t_grid, ys), expected, tol, tuple(float(t) for t in t_grid), tuple(ys))


def schur_defect(space, mu) -> float:
    """``| ||phi_mu||_2 * d(mu)^{1/2} - 1 |`` with ``d`` the spherical dimension."""
    sp = get_space(space)
    val = lp_norm(sp, lambda H: phi_compact_values(sp, mu, H), 2, tol=1e-13).value
    return abs(val * math.sqrt(spherical_dimension(sp, mu)) - 1.0)
