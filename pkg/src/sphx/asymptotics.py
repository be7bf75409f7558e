"""Large-parameter asymptotics of spherical functions, envelopes and phase Hessians.

Conventions: ``lam`` (and ``Lambda``) are coordinate vectors of forms on the
flat, paired with ``H`` by the dot product; ``<., .>`` is the dual Killing
pairing and ``H_alpha = K^{-1} alpha``.
"""

from __future__ import annotations

import math
import itertools
from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import expm

from .exponents import sigma_w
from .rootsys import dual_vector, get_space
from .spherical.compact import phi_compact_values, weight_vector
from .spherical.noncompact import phi_noncompact, point_vector
from .spherical.quadrature import QuadratureSpec
from .spherical.realization import (
    coords_from_diag,
    diag_basis,
    exp_a,
    iwasawa_H,
    root_adapted_basis,
    su2_cartan_angle,
    torus_su2,
    weyl_representative,
)

# Leading constants of the W-sum.  Rank one: closed form, checked against the
# classical Legendre-function asymptotics.  SL3R: least-squares calibration at
# t = 80 (see ``calibrate_constant``), frozen here.
CLOSED_FORM_CONSTANTS = {
    "H2": 1.0 / (2.0 * math.sqrt(2.0) * math.pi),
    "H3": 1.0 / (16.0 * math.pi),
}
SL3R_CANDIDATE = 4.0 / (8.0 * math.pi**2 * 12.0**1.5)
CALIBRATED_CONSTANTS = {"SL3R": 0.0012203194}
CALIBRATION_T = 80.0
# calibration data for SL3R, as diagonal entries (direction diag(1, 0, -1))
CALIBRATION_POINTS_DIAG = ((0.5, 0.1, -0.6), (0.3, -0.05, -0.25), (0.7, -0.2, -0.5))
CALIBRATION_DIRECTION_DIAG = (1.0, 0.0, -1.0)


def leading_constant(space) -> float:
    sp = get_space(space)
    if len(sp.factors) > 1:
        return float(np.prod([leading_constant(f) for f in sp.factors]))
    if sp.id in CLOSED_FORM_CONSTANTS:
        return CLOSED_FORM_CONSTANTS[sp.id]
    if sp.id in CALIBRATED_CONSTANTS:
        return CALIBRATED_CONSTANTS[sp.id]
    raise KeyError(f"no leading constant for {sp.id}")


@dataclass(frozen=True)
class AsymptoticTerm:
    w: int
    phase: float
    amplitude: float
    constant: float

    @property
    def value(self) -> complex:
        return self.constant * self.amplitude * complex(math.cos(self.phase), math.sin(self.phase))


def regularity_window_ok(space, t: float, H, eps: float = 0.1) -> bool:
    sp = get_space(space)
    H = point_vector(H)
    return all(abs(a(H)) >= t ** (-1.0 + eps) for a in sp.roots.positive_roots)


def dkv_terms(space, lam_tilde, t: float, H, eps: float = 0.1, constant: float | None = None,
              check: bool = True) -> list[AsymptoticTerm]:
    """Per-Weyl-element terms of the leading asymptotic of ``phi_{t lam}(exp H)``."""
    sp = get_space(space)
    rs, W = sp.roots, sp.weyl
    lam = np.asarray(lam_tilde, float)
    H = point_vector(H)
    if check and not regularity_window_ok(sp, t, H, eps):
        raise ValueError("H is not in the regularity window |alpha(H)| >= t^(-1+eps)")
    C = leading_constant(sp) if constant is None else constant
    power = t ** (-(sp.n - sp.r) / 2.0)
    out = []
    for i, w in enumerate(W.elements):
        y = np.linalg.solve(w, H)  # w alpha(H) = alpha(w^{-1} H)
        amp = power
        for a in rs.positive_roots:
            amp *= abs(rs.pairing(a.vector, lam) / (2 * math.pi) * math.sinh(a.vector @ y)) ** (-a.multiplicity / 2.0)
        ph = t * float(lam @ y) + math.pi * sigma_w(rs, W, i, H) / 4.0
        out.append(AsymptoticTerm(i, ph, amp, C))
    return out


def dkv_main_term(space, lam_tilde, t: float, H, eps: float = 0.1, constant: float | None = None) -> complex:
    """Leading W-sum approximation to ``phi_{t lam}(exp H)`` for regular ``H``."""
    return complex(sum(term.value for term in dkv_terms(space, lam_tilde, t, H, eps, constant)))


def dkv_amplitude_sum(space, lam_tilde, t, H, eps: float = 0.1, constant: float | None = None) -> float:
    return float(sum(abs(term.value) for term in dkv_terms(space, lam_tilde, t, H, eps, constant)))


def classical_rank_one(nu: float, r: float) -> float:
    """Large-degree asymptotic ``(2 / (pi nu sinh r))^{1/2} cos(nu r - pi/4)`` on H2."""
    return math.sqrt(2.0 / (math.pi * nu * math.sinh(r))) * math.cos(nu * r - math.pi / 4.0)


def sl3_direction() -> np.ndarray:
    return coords_from_diag("SL3R", CALIBRATION_DIRECTION_DIAG)


def sl3_calibration_points() -> list[np.ndarray]:
    return [coords_from_diag("SL3R", h) for h in CALIBRATION_POINTS_DIAG]


def calibrate_constant(space="SL3R", lam_tilde=None, t: float = CALIBRATION_T,
                       points=None, window: int = 8, q: QuadratureSpec | None = None) -> float:
    """Least-squares constant ``C`` with ``phi ~ C * (W-sum with C = 1)``.

    Samples ``t (1 + k/16)`` for ``k < window`` at each point: a single ``t``
    leaves the oscillating first-order correction inside ``C``.
    """
    sp = get_space(space)
    lam = sl3_direction() if lam_tilde is None else np.asarray(lam_tilde, float)
    points = sl3_calibration_points() if points is None else points
    num = den = 0.0
    for k in range(window):
        tk = t * (1.0 + k / 16.0)
        for H in points:
            m = dkv_main_term(sp, lam, tk, H, constant=1.0)
            phi = phi_noncompact(sp, tk * lam, H, q).value
            num += (np.conj(m) * phi).real
            den += abs(m) ** 2
    return float(num / den)


def windowed_asymptotic_error(space, lam_tilde, t, H, window: int = 6, constant=None) -> float:
    """RMS of the normalized error over ``t (1 + k/16)``, ``k < window``."""
    errs = [asymptotic_error(space, lam_tilde, t * (1.0 + k / 16.0), H, constant=constant)["amp_err"]
            for k in range(window)]
    return float(math.sqrt(np.mean(np.square(errs))))


def asymptotic_error(space, lam_tilde, t, H, q: QuadratureSpec | None = None, constant=None) -> dict:
    """Errors of the leading term, plain and normalized by the summed term sizes."""
    sp = get_space(space)
    lam = np.asarray(lam_tilde, float)
    phi = phi_noncompact(sp, t * lam, H, q).value
    terms = dkv_terms(sp, lam, t, H, constant=constant)
    main = complex(sum(x.value for x in terms))
    amp = float(sum(abs(x.value) for x in terms))
    diff = abs(phi - main)
    return {
        "phi": phi,
        "model": main,
        "rel_err": diff / abs(main) if main != 0 else math.inf,
        "amp_err": diff / amp,
        "min_root": min(abs(a(point_vector(H))) for a in sp.roots.positive_roots),
    }


# ---------------------------------------------------------------------------
# envelopes


def envelope_noncompact(space, t: float, H) -> float:
    """``prod (1 + t |alpha(H)|)^{-m/2}``; valid on walls."""
    sp = get_space(space)
    H = point_vector(H)
    val = 1.0
    for a in sp.roots.positive_roots:
        val *= (1.0 + t * abs(a(H))) ** (-a.multiplicity / 2.0)
    return val


DEFAULT_BALL = 0.5


def envelope_compact(space, t: float, H, ball: float = DEFAULT_BALL) -> float:
    """``prod (1 + t |e^{i alpha(H)} - 1|)^{-m/2}`` on a ball about the torus origin."""
    sp = get_space(space)
    H = point_vector(H)
    if np.linalg.norm(H) > ball + 1e-12:
        raise ValueError(f"point outside the envelope ball of radius {ball}")
    val = 1.0
    for a in sp.roots.positive_roots:
        val *= (1.0 + t * abs(np.exp(1j * a(H)) - 1.0)) ** (-a.multiplicity / 2.0)
    return float(val)


@dataclass(frozen=True)
class EnvelopeReport:
    grid: tuple[tuple[float, tuple[float, ...]], ...]
    ratios: tuple[float, ...]
    max_ratio: float
    per_t: dict = field(default_factory=dict)

    def __post_init__(self):
        if any(r < 0 for r in self.ratios):
            raise ValueError("ratios must be nonnegative")

    def drift(self) -> float:
        """Largest relative change of the per-t maximum between consecutive ``t``."""
        ts = sorted(self.per_t)
        vals = [self.per_t[t] for t in ts]
        return max((abs(b - a) / a for a, b in zip(vals, vals[1:])), default=0.0)


def wall_crossing_path(space, t: float, npts: int = 81, extent: float = 20.0) -> np.ndarray:
    """Points ``X / t`` along a line crossing a root hyperplane.

    Rank one: the whole line through 0.  Rank two: offset from the first
    simple wall by a fixed multiple of ``1/t`` along a coweight, so the path
    passes within distance ``1/t`` of it and through the other walls.
    """
    sp = get_space(space)
    x = np.linspace(-extent, extent, npts)
    if sp.r == 1:
        a = sp.roots.simple_roots[0].vector
        return (x[:, None] * (a / (a @ a))[None, :]) / t
    if sp.id in ("SL3R", "SU3group"):
        a1 = sp.roots.simple_roots[0].vector
        om = sp.roots.fundamental_coweights()
        normal = a1 / (a1 @ a1)
        return (x[:, None] * normal[None, :] + 0.5 * om[1][None, :] + 0.0) / t
    raise NotImplementedError(f"no wall-crossing path for {sp.id}")


def regular_path(space, npts: int = 9) -> np.ndarray:
    """Fixed regular points (unscaled) inside the positive chamber."""
    sp = get_space(space)
    om = sp.roots.fundamental_coweights()
    s = np.linspace(0.4, 1.2, npts)
    if sp.r == 1:
        return s[:, None] * om[0][None, :]
    return np.array([u * om[0] + (1.6 - u) * om[1] for u in s]) * 0.5


def envelope_sweep_noncompact(space, lam_tilde, t_ladder, path: str = "wall-crossing",
                              npts: int = 81, q: QuadratureSpec | None = None):
    sp = get_space(space)
    lam = np.asarray(lam_tilde, float)
    rows, grid, ratios, per_t = [], [], [], {}
    for t in t_ladder:
        pts = wall_crossing_path(sp, t, npts) if path == "wall-crossing" else regular_path(sp, npts)
        best = 0.0
        for H in pts:
            phi = phi_noncompact(sp, t * lam, H, q).value
            env = envelope_noncompact(sp, t, H)
            ratio = abs(phi) / env
            best = max(best, ratio)
            grid.append((float(t), tuple(map(float, H))))
            ratios.append(ratio)
            rows.append((t, H, phi, env, ratio))
        per_t[float(t)] = best
    return EnvelopeReport(tuple(grid), tuple(ratios), max(ratios), per_t), rows


def compact_ball_path(space, t: float, npts: int = 401, ball: float = DEFAULT_BALL) -> np.ndarray:
    """Points across the ball, passing through the origin and the walls there."""
    sp = get_space(space)
    x = np.linspace(-ball, ball, npts)
    if sp.r == 1:
        return x[:, None]
    a1 = sp.roots.simple_roots[0].vector
    om = sp.roots.fundamental_coweights()
    d = a1 / np.linalg.norm(a1)
    off = om[1] / np.linalg.norm(om[1])
    pts = x[:, None] * d[None, :] + (0.5 / t) * off[None, :]
    return pts[np.linalg.norm(pts, axis=1) <= ball]


def envelope_sweep_compact(space, mu_tilde, t_ladder, npts: int = 401, ball: float = DEFAULT_BALL):
    sp = get_space(space)
    mu_tilde = np.asarray(mu_tilde, float)
    rows, grid, ratios, per_t = [], [], [], {}
    for t in t_ladder:
        mu = weight_vector(sp, t * mu_tilde)
        pts = compact_ball_path(sp, t, npts, ball)
        vals = phi_compact_values(sp, mu, pts)
        best = 0.0
        for H, phi in zip(pts, vals):
            env = envelope_compact(sp, t, H, ball)
            ratio = abs(phi) / env
            best = max(best, ratio)
            grid.append((float(t), tuple(map(float, H))))
            ratios.append(ratio)
            rows.append((t, H, complex(phi), env, ratio))
        per_t[float(t)] = best
    return EnvelopeReport(tuple(grid), tuple(ratios), max(ratios), per_t), rows


# ---------------------------------------------------------------------------
# phases, critical sets and Hessians (noncompact)


def phase_phi(space, Lam, H, k) -> float:
    """``-Lambda(H(k exp H))`` for ``k`` in K."""
    sp = get_space(space)
    return -float(np.asarray(Lam, float) @ iwasawa_H(np.asarray(k) @ exp_a(sp, point_vector(H)), sp))


def phase_gradient(space, Lam, H, k, h: float = 1e-5) -> np.ndarray:
    """Central-difference gradient along the root-adapted directions (right translation)."""
    sp = get_space(space)
    k = np.asarray(k)
    out = []
    for d in root_adapted_basis(sp):
        fp = phase_phi(sp, Lam, H, k @ expm(h * d.matrix))
        fm = phase_phi(sp, Lam, H, k @ expm(-h * d.matrix))
        out.append((fp - fm) / (2 * h))
    return np.array(out)


@dataclass(frozen=True)
class CriticalSet:
    representatives: tuple[np.ndarray, ...]
    weyl_indices: tuple[int, ...]
    vanishing_roots: tuple[int, ...]
    component_dim: int
    n_components: int


def critical_set(space, H, tol: float = 1e-12) -> CriticalSet:
    """Critical set ``W K_H`` of ``k -> -Lambda(H(k exp H))``.

    One Weyl representative per component (components match distinct ``wH``);
    the component dimension is the sum of multiplicities of roots vanishing on ``H``.
    """
    sp = get_space(space)
    H = point_vector(H)
    van = tuple(i for i, a in enumerate(sp.roots.positive_roots) if abs(a(H)) <= tol)
    dim = sum(sp.roots.positive_roots[i].multiplicity for i in van)
    seen, reps, idx = [], [], []
    for i, w in enumerate(sp.weyl.elements):
        wH = w @ H
        if any(np.allclose(wH, s, atol=1e-10) for s in seen):
            continue
        seen.append(wH)
        reps.append(weyl_representative(sp, i))
        idx.append(i)
    return CriticalSet(tuple(reps), tuple(idx), van, dim, len(reps))


def hessian_noncompact(space, Lam, H, w: int, form: str = "exact") -> np.ndarray:
    """Diagonal Hessian of the phase at the Weyl point ``w`` in the root-adapted basis.

    ``form="exact"``: ``(e/2) Lambda(w H_alpha) (exp(2 e alpha(H)) - 1)`` with
    ``e = +1`` when ``w alpha`` is a positive root and ``-1`` otherwise, which
    matches finite differences of the phase for every ``Lambda`` and ``H``.  ``form="stated"``: ``(1/2) Lambda(w H_alpha) (1 - exp(-alpha(H)))``,
    kept for comparison.
    """
    sp = get_space(space)
    rs = sp.roots
    Lam = np.asarray(Lam, float)
    H = point_vector(H)
    Wm = sp.weyl.elements[w]
    rho = np.sum([a.vector for a in rs.positive_roots], axis=0)
    diag = []
    for d in root_adapted_basis(sp):
        i, j = d.pair
        # orient the root as h_i - h_j to match the adapted direction
        e = np.zeros(diag_basis(sp).shape[1])
        e[i], e[j] = 1.0, -1.0
        alpha = diag_basis(sp) @ e
        wH = Wm @ dual_vector(rs, alpha)
        lw = float(Lam @ wH)
        aH = float(alpha @ H)
        if form == "stated":
            diag.append(0.5 * lw * (1.0 - math.exp(-aH)))
        elif form == "exact":
            eps = 1.0 if float(rho @ wH) > 0 else -1.0
            diag.append(0.5 * eps * lw * (math.exp(2 * eps * aH) - 1.0))
        else:
            raise ValueError(f"unknown form {form!r}")
    return np.diag(diag)


def hessian_noncompact_fd(space, Lam, H, w: int, h: float = 1e-3) -> np.ndarray:
    """Second central differences of the phase along each adapted direction at ``w``."""
    sp = get_space(space)
    P = weyl_representative(sp, w)
    f0 = phase_phi(sp, Lam, H, P)
    out = []
    for d in root_adapted_basis(sp):
        fp = phase_phi(sp, Lam, H, P @ expm(h * d.matrix))
        fm = phase_phi(sp, Lam, H, P @ expm(-h * d.matrix))
        out.append((fp - 2 * f0 + fm) / (h * h))
    return np.diag(out)


# ---------------------------------------------------------------------------
# compact phase (SU2group)

_Z_SU2 = np.array([[0.0, 1.0], [-1.0, 0.0]], dtype=complex) / 4.0  # unit for minus Killing
_W_SU2 = (np.eye(2, dtype=complex), np.array([[0.0, 1.0], [-1.0, 0.0]], dtype=complex))


def compact_phase(mu_scale: float, theta1: float, theta: float, k: np.ndarray) -> float:
    """``-mu(A(h1 k h)) / i`` on SU2group for ``mu = mu_scale * alpha``.

    Points of the symmetric space are ``g = u1 u2^{-1}``; the torus point with
    angle ``theta`` is ``diag(e^{i theta}, e^{-i theta})``.  ``h1 k h`` acts as
    ``g = t1 k t^2 k^{-1} t1`` with half-angle torus elements.
    """
    t1, th = torus_su2(theta1), torus_su2(theta)
    g = t1 @ k @ th @ th @ np.linalg.inv(k) @ t1
    return -mu_scale * su2_cartan_angle(g)


def hessian_compact(space, mu, theta1: float, theta: float, w: int = 0, form: str = "corrected") -> np.ndarray:
    """Hessian coefficient (of ``i``) of the compact phase at ``k = w``.

    ``form="stated"`` is ``-mu(H_alpha) (a1 - 1/a1)(ah - 1/ah) / (2 (aa - 1/aa))``
    divided by ``i``; ``form="corrected"`` has the opposite sign, which is what
    finite differences of ``-mu(A)`` give.  ``w = 1`` (the reflection) replaces
    ``theta`` by ``-theta``.  ``A`` is folded into ``[0, pi]``, so the corrected
    form carries the sign of ``sin(theta1 + theta)``.
    """
    sp = get_space(space)
    if sp.id != "SU2group":
        raise NotImplementedError("compact Hessian is realized on SU2group")
    rs = sp.roots
    mu = np.atleast_1d(np.asarray(mu, float))
    alpha = rs.simple_roots[0].vector
    mu_Ha = rs.pairing(mu, alpha)
    th = theta if w == 0 else -theta
    s_a = math.sin(theta1 + th)
    if abs(s_a) < 1e-12:
        raise ValueError("alpha(a) = +-1: degenerate Hessian")
    stated = -mu_Ha * math.sin(theta1) * math.sin(th) / s_a
    val = stated if form == "stated" else -math.copysign(1.0, s_a) * stated
    return np.array([[val]])


def hessian_compact_fd(space, mu, theta1: float, theta: float, w: int = 0, h: float = 1e-3) -> np.ndarray:
    sp = get_space(space)
    rs = sp.roots
    mu = np.atleast_1d(np.asarray(mu, float))
    alpha = rs.simple_roots[0].vector
    scale = float(mu @ alpha / (alpha @ alpha))  # mu = scale * alpha
    k0 = _W_SU2[w]

    def f(s):
        return compact_phase(scale, theta1, theta, k0 @ expm(s * _Z_SU2))

    return np.array([[(f(h) - 2 * f(0.0) + f(-h)) / (h * h)]])


def richardson_check(fd_fn, h: float = 1e-2) -> tuple[float, float, float]:
    """(value at h, value at h/2, observed order) for a scalar FD estimator."""
    a, b, c = fd_fn(h), fd_fn(h / 2), fd_fn(h / 4)
    d1, d2 = abs(a - b), abs(b - c)
    order = math.log2(d1 / d2) if d2 > 0 and d1 > 0 else math.inf
    return float(b), float(c), float(order)


# ---------------------------------------------------------------------------
# compact regular scaling


def compact_regular_scaling(space, mu_tilde, H, t_grid, window: int = 8, radius: float = 0.1,
                            per_dim: int = 9) -> dict:
    """Slope of the averaged ``|phi_{t mu}(exp H)|`` against ``log t``.

    The RMS runs over ``t + j`` (``j < window``) and a small grid of points
    within ``radius`` of ``H``; both average out the cross terms of the
    oscillating W-sum.  The fit uses the window centres as abscissae.
    """
    sp = get_space(space)
    mu_tilde = np.asarray(mu_tilde, float)
    H = point_vector(H)
    offs = np.linspace(-radius, radius, per_dim) if radius > 0 else np.zeros(1)
    pts = np.array([H + np.array(o) for o in itertools.product(offs, repeat=sp.r)])
    ys = []
    for t in t_grid:
        vals = np.concatenate([np.abs(phi_compact_values(sp, (t + j) * mu_tilde, pts)) for j in range(window)])
        ys.append(math.sqrt(np.mean(vals**2)))
    centres = np.asarray(t_grid, float) + 0.5 * (window - 1)
    slope = float(np.polyfit(np.log(centres), np.log(ys), 1)[0])
    return {"slope": slope, "expected": -(sp.n - sp.r) / 2.0, "values": ys}
