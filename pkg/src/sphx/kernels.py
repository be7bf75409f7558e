"""Spectral-projector kernels on H2 and S2, their dyadic pieces and envelope checks.

Rank-one spectral variable: ``nu`` with ``lam(H) = nu * alpha(H)``; radial
variable ``r = |alpha(H)|``.  On H2 the spherical function is
``phi_nu(r)`` with ``phi_nu(0) = 1`` and the transform pair is

    Kh(nu) = 2 pi int_0^inf K(r) phi_nu(r) sinh r dr,
    K(r)   = c int_0^inf Kh(nu) phi_nu(r) nu tanh(pi nu) dnu,

where ``c`` comes from the round trip (``calibrate_plancherel``), never typed in.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field

import numpy as np

from . import core
from .exponents import L_of
from .gausslegendre import gauss
from .rootsys import get_space
from .spherical.compact import legendre

# ---------------------------------------------------------------------------
# Paley-Wiener bump


def _bump(x: np.ndarray, R: float) -> np.ndarray:
    y = np.zeros_like(x)
    inside = np.abs(x) < R
    y[inside] = np.exp(-1.0 / (1.0 - (x[inside] / R) ** 2))
    return y


@dataclass(frozen=True)
class PaleyWienerBump:
    """``h = c |g_hat|^2`` for the smooth bump ``g`` of radius ``radius``.

    ``support_radius`` (= 2 radius) bounds the support of the inverse
    Fourier transform of ``h``.
    """

    radius: float
    scale: float
    support_radius: float
    nu_grid: np.ndarray = field(repr=False)
    samples: np.ndarray = field(repr=False)
    min_on_unit_ball: float = 1.0
    n_quad: int = 2048

    def g_hat(self, nu) -> np.ndarray:
        nu = np.atleast_1d(np.asarray(nu, float))
        x = np.linspace(-self.radius, self.radius, self.n_quad + 1)
        dx = x[1] - x[0]
        g = _bump(x, self.radius)
        # g vanishes to all orders at +-R, so the trapezoid rule is spectrally accurate
        out = np.empty(nu.size)
        for i0 in range(0, nu.size, 256):
            blk = nu[i0:i0 + 256]
            out[i0:i0 + 256] = np.cos(np.outer(blk, x)) @ g * dx
        return out

    def __call__(self, nu) -> np.ndarray:
        return self.scale * self.g_hat(nu) ** 2

    def decay_radius(self, rel: float = 1e-18) -> float:
        """Smallest ``V`` with ``h(nu) < rel * h(0)`` for all tabulated ``|nu| >= V``."""
        h = self.samples
        above = np.nonzero(h >= rel * h[0])[0]
        return float(self.nu_grid[above[-1] + 1]) if above[-1] + 1 < h.size else float(self.nu_grid[-1])


def build_bump(radius: float = 1.0, nu_max: float = 400.0, n_grid: int = 4001, n_quad: int = 2048) -> PaleyWienerBump:
    """Scale ``|g_hat|^2`` so that it is at least 1 on ``|nu| <= 1``."""
    tmp = PaleyWienerBump(radius, 1.0, 2 * radius, np.zeros(1), np.zeros(1), 1.0, n_quad)
    ball = np.linspace(0.0, 1.0, 201)
    gb = tmp.g_hat(ball) ** 2
    if np.min(gb) <= 0:
        raise ValueError("bump transform vanishes on the unit ball")
    scale = 1.0 / float(np.min(gb))
    grid = np.linspace(0.0, nu_max, n_grid)
    samples = scale * tmp.g_hat(grid) ** 2
    out = PaleyWienerBump(radius, scale, 2 * radius, grid, samples, float(np.min(scale * gb)), n_quad)
    if out.min_on_unit_ball < 1.0 - 1e-12 or np.any(samples < 0):
        raise ValueError("positivity certificate failed")
    return out


def bump_inverse_transform(bump: PaleyWienerBump, x, n: int = 8192) -> np.ndarray:
    """``(1/2 pi) int h(nu) e^{i nu x} dnu`` (real, even), for the support check."""
    V = bump.decay_radius(1e-30)
    nus, ws = gauss(n, 0.0, V)
    h = bump(nus)
    x = np.atleast_1d(np.asarray(x, float))
    return (np.cos(np.outer(x, nus)) @ (ws * h)) / math.pi


def h_t(bump: PaleyWienerBump, space, Lam, t: float, lam) -> float:
    """``sum_w h(|w lam - t Lam|)`` with distances in units of the simple-root length.

    On H2 this makes ``lam = nu * alpha`` and ``Lam = alpha`` reproduce
    ``h_t_rank_one(bump, t, nu)``.
    """
    sp = get_space(space)
    lam = np.atleast_1d(np.asarray(lam, float))
    Lam = np.atleast_1d(np.asarray(Lam, float))
    unit = float(np.linalg.norm(sp.roots.simple_roots[0].vector))
    dists = [float(np.linalg.norm(w @ lam - t * Lam)) / unit for w in sp.weyl.elements]
    return float(np.sum(bump(np.array(dists))))


def h_t_rank_one(bump: PaleyWienerBump, nu0: float, nu) -> np.ndarray:
    nu = np.asarray(nu, float)
    return bump(nu - nu0) + bump(-nu - nu0)


# ---------------------------------------------------------------------------
# H2 transforms

def plancherel_density(nu) -> np.ndarray:
    nu = np.asarray(nu, float)
    return nu * np.tanh(math.pi * nu)


def _mehler_nodes(r: float, nu_max: float) -> int:
    """Gauss nodes for the Mehler integral; ``0.5 nu r + 40`` already reaches roundoff."""
    n = int(0.7 * nu_max * r) + 40
    return 32 * (n // 32 + 1)


def h2_phi_mehler(nu, r) -> np.ndarray:
    """Matrix ``phi_{nu_i}(r_j)`` via the Mehler integral (vectorized over ``nu``)."""
    nu = np.atleast_1d(np.asarray(nu, float))
    r = np.atleast_1d(np.asarray(r, float))
    numax = float(np.max(np.abs(nu))) if nu.size else 0.0
    out = np.empty((nu.size, r.size))
    for j, rj in enumerate(r):
        if rj <= 0.0:
            out[:, j] = 1.0
            continue
        v, wg = gauss(_mehler_nodes(rj, numax), 0.0, math.sqrt(rj))
        ker = wg * 2.0 * v / np.sqrt(2.0 * np.sinh(rj - 0.5 * v * v) * np.sinh(0.5 * v * v))
        out[:, j] = math.sqrt(2.0) / math.pi * (np.cos(np.outer(nu, rj - v * v)) @ ker)
    return out


def inverse_sum(r, nus, weights) -> np.ndarray:
    """``sum_j weights_j phi_{nu_j}(r)``, grouped by the node count each r needs."""
    r = np.atleast_1d(np.asarray(r, float))
    nus = np.ascontiguousarray(nus, float)
    weights = np.ascontiguousarray(weights, float)
    numax = float(np.max(np.abs(nus))) if nus.size else 0.0
    out = np.empty(r.size)
    need = np.array([_mehler_nodes(x, numax) for x in r])
    for n in np.unique(need):
        sel = need == n
        out[sel] = core.mehler_sum(np.ascontiguousarray(r[sel]), nus, weights, int(n))
    return out


def forward_transform(r_nodes, r_weights, K_vals, nu) -> np.ndarray:
    """``2 pi int K phi_nu sinh r dr`` with a given radial rule."""
    nu = np.atleast_1d(np.asarray(nu, float))
    phis = h2_phi_mehler(nu, r_nodes)
    return 2 * math.pi * phis @ (np.asarray(r_weights) * np.sinh(r_nodes) * np.asarray(K_vals))


@dataclass(frozen=True)
class KernelTable:
    space_id: str
    t: float
    Lam: float
    r: np.ndarray = field(repr=False)
    values: np.ndarray = field(repr=False)
    metadata: dict = field(default_factory=dict)

    def value_at(self, r) -> np.ndarray:
        return np.interp(r, self.r, self.values)


def spectral_nodes(bump: PaleyWienerBump, nu0: float, n_nu: int):
    """Gauss-Legendre nodes covering the support of ``h_t^2`` on ``nu >= 0``."""
    V = bump.decay_radius(1e-9)  # h^2 then drops below 1e-18 of its peak
    return gauss(n_nu, max(0.0, nu0 - V), nu0 + V)


def multiplier(bump: PaleyWienerBump, nu0: float, nu) -> np.ndarray:
    """Adjoint-square multiplier ``h_t(nu)^2``."""
    return h_t_rank_one(bump, nu0, nu) ** 2


def default_nu_nodes(bump: PaleyWienerBump, nu0: float, r_max: float) -> int:
    """Gauss node count for the spectral integral.

    The integrand ``h_t(nu)^2 cos(nu s)`` has frequency at most
    ``s + 2 * support_radius`` in ``nu``; this returns a count resolving it
    over the spectral window with a fixed margin.
    """
    V = bump.decay_radius(1e-9)
    span = 2 * V if nu0 > V else nu0 + V
    return int(span * (r_max + 2 * bump.support_radius) / 2.0) + 48


def invert_transform(bump: PaleyWienerBump, t: float, r_grid, Lam: float = 1.0, n_nu: int | None = None,
                     plancherel_constant: float | None = None, tol: float = 1e-8) -> KernelTable:
    """``K_t(r) = c int h_t(nu)^2 phi_nu(r) nu tanh(pi nu) dnu`` on H2.

    The nu-quadrature error estimate (difference to a rule with two thirds
    the nodes on every eighth radius, relative to ``K_t(0)``) is stored in
    the metadata.
    """
    nu0 = t * Lam
    c = calibrate_plancherel(bump) if plancherel_constant is None else plancherel_constant
    r_grid = np.asarray(r_grid, float)
    base = default_nu_nodes(bump, nu0, float(r_grid.max()) if r_grid.size else 0.0)
    if n_nu is None:
        n_nu = (3 * base) // 2
    n_check = max(16, min(base, (2 * n_nu) // 3))

    def run(n, r):
        nus, ws = spectral_nodes(bump, nu0, n)
        wts = c * ws * multiplier(bump, nu0, nus) * plancherel_density(nus)
        return inverse_sum(r, nus, wts), float(np.sum(wts))

    vals, k0 = run(n_nu, r_grid)
    probe = np.unique(np.r_[np.arange(0, r_grid.size, 8), r_grid.size - 1]) if r_grid.size else np.arange(0)
    half, _ = run(n_check, r_grid[probe])
    err = float(np.max(np.abs(vals[probe] - half)) / abs(k0)) if probe.size else 0.0
    meta = {
        "space": "H2", "t": t, "Lam": Lam, "n_nu": n_nu, "bump_radius": bump.radius,
        "support_radius": bump.support_radius, "plancherel_constant": c,
        "nu_quad_rel_err": err, "converged": err <= tol, "K0": k0,
    }
    return KernelTable("H2", float(t), float(Lam), r_grid, vals, meta)


_PLANCHEREL_CACHE: dict = {}


def calibrate_plancherel(bump: PaleyWienerBump, t: float = 20.0, n_nu: int | None = None, n_r: int = 512) -> float:
    """Constant ``c`` making forward(inverse(m)) = m at the spectral centre."""
    key = (bump.radius, t)
    if key in _PLANCHEREL_CACHE:
        return _PLANCHEREL_CACHE[key]
    rn, rw = radial_rule(bump, n_r)
    tab = invert_transform(bump, t, rn, n_nu=n_nu, plancherel_constant=1.0)
    back = forward_transform(rn, rw, tab.values, [t])[0]
    c = float(multiplier(bump, t, np.array([t]))[0] / back)
    _PLANCHEREL_CACHE[key] = c
    return c


def radial_rule(bump: PaleyWienerBump, n_r: int):
    """Gauss-Legendre rule on ``[0, 2 * support_radius]`` (the kernel support)."""
    return gauss(n_r, 0.0, 2 * bump.support_radius)


def round_trip(bump: PaleyWienerBump, t: float, offsets=(-1.0, -0.5, 0.0, 0.5, 1.0), n_r: int | None = None,
               n_nu: int | None = None) -> dict:
    """Relative errors of forward(inverse(h_t^2)) against ``h_t^2`` near ``nu = t``."""
    n_r = n_r or int(256 + 2 * t * bump.support_radius)
    rn, rw = radial_rule(bump, n_r)
    tab = invert_transform(bump, t, rn, n_nu=n_nu)
    nus = t + np.asarray(offsets, float)
    back = forward_transform(rn, rw, tab.values, nus)
    target = multiplier(bump, t, nus)
    rel = np.abs(back - target) / np.abs(target)
    return {"nu": nus, "transform": back, "target": target, "rel_err": rel, "max_rel_err": float(rel.max())}


def radial_grid(bump: PaleyWienerBump, t: float, n_uniform: int | None = None, n_log: int = 200) -> np.ndarray:
    """Uniform grid on the support resolving oscillation ``2 pi / t``, plus a log grid near 0."""
    L = 2 * bump.support_radius
    n_uniform = n_uniform or int(16 * t * L / (2 * math.pi)) + 200
    g = np.concatenate([[0.0], np.geomspace(1e-4 / max(t, 1.0), 1.0, n_log), np.linspace(0.0, L, n_uniform)])
    return np.unique(g)


def kernel_table(t: float, radius: float = 1.0, grid_points: int | None = None, Lam: float = 1.0) -> KernelTable:
    bump = build_bump(radius)
    if grid_points:
        r = np.linspace(0.0, 2 * bump.support_radius, grid_points)
    else:
        r = radial_grid(bump, t)
    return invert_transform(bump, t, r, Lam)


# ---------------------------------------------------------------------------
# envelope checks


def kernel_envelope(space, t: float, H) -> float:
    """``t^{n-r} prod (1 + t |alpha(H)|)^{-m/2}``."""
    sp = get_space(space)
    H = np.atleast_1d(np.asarray(H, float))
    val = t ** (sp.n - sp.r)
    for a in sp.roots.positive_roots:
        val *= (1.0 + t * abs(a(H))) ** (-a.multiplicity / 2.0)
    return val


def h2_coords(r) -> np.ndarray:
    """Flat coordinate of the H2 point at radius ``r = alpha(H)``."""
    a = get_space("H2").roots.simple_roots[0].vector[0]
    return np.asarray(r, float) / a


@dataclass(frozen=True)
class KernelEnvelopeReport:
    t: float
    ratios: np.ndarray = field(repr=False)
    max_ratio: float = 0.0
    ratio_at_zero: float = 0.0
    ratio_small_r: float = 0.0


def kernel_envelope_check(table: KernelTable) -> KernelEnvelopeReport:
    """``|K_t(r)| / (t (1 + t r)^{-1/2})`` across the radial grid."""
    t = table.t
    env = t * (1.0 + t * table.r) ** (-0.5)
    ratios = np.abs(table.values) / env
    small = table.r <= 1.0 / t
    return KernelEnvelopeReport(t, ratios, float(ratios.max()), float(ratios[0]),
                                float(ratios[small].max()) if np.any(small) else float("nan"))


def far_field_profile(bump: PaleyWienerBump, ts, r0: float, periods: float = 2.0, npts: int = 64) -> dict:
    """Window maxima of ``|K_t| / t`` around ``r0``, one per ``t``.

    Against ``log(t r0)`` these decay with slope ``-1/2``.
    """
    maxima = []
    for t in ts:
        w = periods * 2 * math.pi / t
        r = np.linspace(r0, r0 + w, npts)
        tab = invert_transform(bump, t, r)
        maxima.append(float(np.max(np.abs(tab.values))) / t)
    x = np.log(np.asarray(ts, float) * r0)
    slope = float(np.polyfit(x, np.log(maxima), 1)[0])
    return {"t": list(ts), "maxima": maxima, "slope": slope}


def k0_slope(bump: PaleyWienerBump, ts) -> dict:
    vals = [invert_transform(bump, t, np.array([0.0])).values[0] for t in ts]
    slope = float(np.polyfit(np.log(ts), np.log(vals), 1)[0])
    return {"t": list(ts), "K0": vals, "slope": slope}


# ---------------------------------------------------------------------------
# dyadic decomposition


def smooth_step(y) -> np.ndarray:
    """0 for y <= 0, 1 for y >= 1, smooth in between."""
    y = np.asarray(y, float)
    a = np.where(y > 0, np.exp(-1.0 / np.where(y > 0, y, 1.0)), 0.0)
    b = np.where(y < 1, np.exp(-1.0 / np.where(y < 1, 1.0 - y, 1.0)), 0.0)
    return a / (a + b)


def cutoff(x) -> np.ndarray:
    """Even smooth cutoff: 1 on ``[-1, 1]``, 0 outside ``[-e, e]``."""
    return smooth_step((math.e - np.abs(np.asarray(x, float))) / (math.e - 1.0))


def beta(t: float, m: int, r) -> np.ndarray:
    r = np.asarray(r, float)
    if m == 0:
        return cutoff(t * r)
    return cutoff(t * math.exp(-m) * r) - cutoff(t * math.exp(-m + 1) * r)


def dyadic_range(t: float, support: float) -> range:
    """Indices ``m`` whose pieces can be nonzero on ``r <= support``."""
    top = math.floor(1.0 + math.log(t * support)) + 1
    return range(0, max(top, 1) + 1)


@dataclass(frozen=True)
class DyadicPiece:
    m: int
    t: float
    values: np.ndarray = field(repr=False)
    sup_norm: float = 0.0
    transform_sup: float = float("nan")
    transform_argmax: float = float("nan")


def shell(t: float, m: int) -> tuple[float, float]:
    """Radial support of ``beta_{t,m}``."""
    if m == 0:
        return 0.0, math.e / t
    return math.exp(m - 1) / t, math.exp(m + 1) / t


def dyadic_truncate(table: KernelTable, m: int, bump: PaleyWienerBump | None = None,
                    nu_grid=None, n_r: int = 128) -> DyadicPiece:
    """``beta_{t,m} K_t`` on the table grid; with ``bump`` also the sup of its transform.

    The transform is computed on a Gauss rule over the piece's support with
    the kernel re-evaluated there, not interpolated.  ``nu_grid`` defaults to
    ``[0, t Lam + 40]`` at spacing 1/2.
    """
    t = table.t
    vals = beta(t, m, table.r) * table.values
    sup = float(np.max(np.abs(vals)))
    tsup, targ = float("nan"), float("nan")
    if bump is not None:
        lo, hi = shell(t, m)
        hi = min(hi, 2 * bump.support_radius)
        if hi > lo:
            rn, rw = gauss(n_r, lo, hi)
            K = invert_transform(bump, t, rn, table.Lam, plancherel_constant=table.metadata.get("plancherel_constant"))
            piece = beta(t, m, rn) * K.values
            if nu_grid is None:
                nu_grid = np.arange(0.0, t * table.Lam + 40.0, 0.5)
            T = np.abs(forward_transform(rn, rw, piece, nu_grid))
            i = int(np.argmax(T))
            tsup, targ = float(T[i]), float(nu_grid[i])
    return DyadicPiece(m, t, vals, sup, tsup, targ)


def dyadic_reconstruction_error(table: KernelTable, support: float) -> float:
    total = np.zeros_like(table.values)
    for m in dyadic_range(table.t, support):
        total += beta(table.t, m, table.r) * table.values
    return float(np.max(np.abs(total - table.values)) / np.max(np.abs(table.values)))


@dataclass(frozen=True)
class DyadicScaling:
    t: float
    radius: float
    ms: tuple[int, ...]
    fit_ms: tuple[int, ...]
    sup: tuple[float, ...]
    transform_sup: tuple[float, ...]
    transform_argmax: tuple[float, ...]
    sup_slope: float
    transform_slope: float
    sup_band: tuple[float, ...]  # log sup - L(sigma, inf) log t
    transform_band: tuple[float, ...]  # log transform_sup - L(sigma, 2) log t

    def band_width(self, which: str) -> float:
        vals = [v for m, v in zip(self.ms, self.sup_band if which == "sup" else self.transform_band)
                if m in self.fit_ms]
        return float(max(vals) - min(vals))


def dyadic_scaling(t: float = 80.0, radius: float = 4.0, ms=(1, 2, 3, 4), fit_ms=(2, 3, 4),
                   points_per_period: int = 16) -> DyadicScaling:
    """Sup norms and transform sups of the pieces ``K_{t,m}`` on H2.

    Slopes in ``m`` are fitted over ``fit_ms``: pieces whose shells satisfy
    ``t r >= 1`` throughout and stay inside the flat part of the bump's
    spatial profile.  All of ``ms`` are reported.
    """
    bump = build_bump(radius)
    r_hi = min(shell(t, max(ms))[1], 2 * bump.support_radius)
    n = int(points_per_period * t * r_hi / (2 * math.pi)) + 64
    r = np.unique(np.concatenate([np.linspace(0.0, r_hi, n), np.geomspace(1e-3 / t, r_hi, 100)]))
    tab = invert_transform(bump, t, r)
    pieces = [dyadic_truncate(tab, m, bump) for m in ms]
    lt = math.log(t)
    sup = tuple(p.sup_norm for p in pieces)
    tsup = tuple(p.transform_sup for p in pieces)
    sb = tuple(math.log(v) - float(L_of([m / lt], "inf", "H2")) * lt for m, v in zip(ms, sup))
    tb = tuple(math.log(v) - float(L_of([m / lt], 2, "H2")) * lt for m, v in zip(ms, tsup))
    sel = [i for i, m in enumerate(ms) if m in fit_ms]
    fm = np.array([ms[i] for i in sel], float)
    return DyadicScaling(
        float(t), float(radius), tuple(ms), tuple(fit_ms), sup, tsup, tuple(p.transform_argmax for p in pieces),
        float(np.polyfit(fm, np.log([sup[i] for i in sel]), 1)[0]),
        float(np.polyfit(fm, np.log([tsup[i] for i in sel]), 1)[0]),
        sb, tb,
    )


# ---------------------------------------------------------------------------
# shell volumes


def shell_volume(space, t: float, m, n: int = 400) -> dict:
    """Cartan-density volume of the dyadic cell ``e^{m-1}/t <= alpha(H) <= e^m/t`` (rank one)
    against ``prod_{Phi} alpha(H_m) prod_{Delta+} alpha(H_m)^{m(alpha)}``.

    Higher rank returns the monomial degree of the product only.
    """
    sp = get_space(space)
    m = tuple(np.atleast_1d(m).tolist())
    if sp.r != 1:
        deg = sp.r + sum(a.multiplicity for a in sp.roots.positive_roots)
        return {"degree": deg, "n": sp.n}
    a = sp.roots.simple_roots[0].vector[0]
    lo = 0.0 if m[0] == 0 else math.exp(m[0] - 1) / t
    hi = math.exp(m[0]) / t
    s, w = gauss(n, lo, hi)
    dens = np.ones_like(s)
    for root in sp.roots.positive_roots:
        dens *= np.abs(np.sinh(root.vector[0] / a * s)) ** root.multiplicity
    vol = float(np.sum(w * dens))
    Hm = math.exp(m[0]) / t
    prod = Hm * np.prod([Hm ** r.multiplicity for r in sp.roots.positive_roots])
    return {"volume": vol, "product": float(prod), "ratio": vol / float(prod)}


# ---------------------------------------------------------------------------
# compact projector on S2


def zonal_cutoff(theta, theta_c: float) -> np.ndarray:
    theta = np.asarray(theta, float)
    return _bump(theta, theta_c)


@dataclass(frozen=True)
class CompactProjector:
    t: int
    theta_c: float
    band: int
    coefficients: np.ndarray = field(repr=False)  # Legendre coefficients of K_mu
    outside_mass: float = 0.0
    truncation_residual: float = 0.0
    residual_ok: bool = True

    def table(self, thetas) -> KernelTable:
        thetas = np.asarray(thetas, float)
        meta = {"space": "S2", "t": self.t, "theta_c": self.theta_c, "band": self.band,
                "l_max": self.coefficients.size - 1, "outside_mass": self.outside_mass,
                "truncation_residual": self.truncation_residual, "converged": self.residual_ok}
        return KernelTable("S2", float(self.t), 1.0, thetas, self(thetas), meta)

    def __call__(self, theta) -> np.ndarray:
        theta = np.atleast_1d(np.asarray(theta, float))
        c = np.cos(theta)
        out = np.zeros_like(c)
        p0, p1 = np.ones_like(c), c.copy()
        out += self.coefficients[0] * p0
        if self.coefficients.size > 1:
            out += self.coefficients[1] * p1
        for k in range(1, self.coefficients.size - 1):
            p0, p1 = p1, ((2 * k + 1) * c * p1 - k * p0) / (k + 1)
            out += self.coefficients[k + 1] * p1
        return out


def compact_projector(t: int, theta_c: float = 1.0, band: int | None = None, l_max: int | None = None,
                      n_quad: int | None = None, tol: float = 1e-6) -> CompactProjector:
    """``K_mu = t^2 (b P_t) * (b P_t)`` on S2 via Legendre coefficients.

    With ``f = b P_t = sum a_l P_l`` (normalized measure), the zonal
    convolution square has coefficients ``t^2 a_l^2 / (2l + 1)``, all
    nonnegative.  ``band`` defaults to ``max(t, 60)``.  A Legendre-series
    residual of ``b P_t`` above ``tol`` is flagged in ``residual_ok``.
    """
    band = band if band is not None else max(t, 60)
    l_max = l_max or t + 3 * band
    n_quad = n_quad or 2 * l_max + 64
    x, w = gauss(n_quad)
    f = zonal_cutoff(np.arccos(x), theta_c) * legendre(t, x)
    a = np.empty(l_max + 1)
    p0, p1 = np.ones_like(x), x.copy()
    for l in range(l_max + 1):
        if l == 0:
            pl = p0
        elif l == 1:
            pl = p1
        else:
            p0, p1 = p1, ((2 * l - 1) * x * p1 - (l - 1) * p0) / l
            pl = p1
        a[l] = 0.5 * (2 * l + 1) * np.sum(w * f * pl)
    ls = np.arange(l_max + 1)
    coef = t**2 * a**2 / (2 * ls + 1)
    mass = coef.sum()
    outside = float(coef[np.abs(ls - t) > band].sum() / mass)
    # residual of the Legendre series of f at the quadrature nodes
    resid = float(np.max(np.abs(_legendre_series(a, x) - f)))
    return CompactProjector(t, theta_c, band, coef, outside, resid, resid <= tol)


def _legendre_series(a, x) -> np.ndarray:
    return np.polynomial.legendre.legval(x, a)


def compact_pointwise_ratio(P: CompactProjector, thetas, near: int = 5) -> np.ndarray:
    """``|K_mu(theta)| / (t * max_{|nu - t| <= near} |P_nu(cos theta)|)``."""
    thetas = np.asarray(thetas, float)
    c = np.cos(thetas)
    best = np.zeros_like(c)
    for nu in range(max(0, P.t - near), P.t + near + 1):
        best = np.maximum(best, np.abs(legendre(nu, c)))
    return np.abs(P(thetas)) / (P.t * best)


# ---------------------------------------------------------------------------
# CSV persistence


def table_to_csv(table: KernelTable, path=None, extra_columns: dict | None = None) -> str:
    buf = io.StringIO()
    for k, v in table.metadata.items():
        buf.write(f"# {k}={v}\n")
    cols = ["r", "H", "K"] + list((extra_columns or {}).keys())
    wr = csv.writer(buf, lineterminator="\n")
    wr.writerow(cols)
    Hs = h2_coords(table.r) if table.space_id == "H2" else table.r
    for i in range(table.r.size):
        row = [repr(float(table.r[i])), repr(float(Hs[i])), repr(float(table.values[i]))]
        row += [repr(float(v[i])) for v in (extra_columns or {}).values()]
        wr.writerow(row)
    text = buf.getvalue()
    if path is not None:
        with open(path, "w", newline="") as fh:
            fh.write(text)
    return text


def table_from_csv(path) -> KernelTable:
    meta, rows = {}, []
    with open(path) as fh:
        lines = fh.read().splitlines()
    body = []
    for ln in lines:
        if ln.startswith("#"):
            k, _, v = ln[1:].strip().partition("=")
            meta[k] = _parse_meta(v)
        else:
            body.append(ln)
    rd = csv.DictReader(body)
    for row in rd:
        rows.append((float(row["r"]), float(row["K"])))
    arr = np.array(rows)
    return KernelTable(str(meta.get("space", "H2")), float(meta.get("t", 0.0)), float(meta.get("Lam", 1.0)),
                       arr[:, 0], arr[:, 1], meta)


def _parse_meta(v: str):
    for cast in (int, float):
        try:
            return cast(v)
        except ValueError:
            pass
    if v in ("True", "False"):
        return v == "True"
    return v
