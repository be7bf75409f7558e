"""Exact L^p exponent calculus.

All exponent identities are evaluated in rational arithmetic with the
variable ``s = 1/p`` (``s = 0`` for ``p = inf``).  Floats only enter the
geometric-progression fits.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .rootsys import ChamberVector, RootSystem, SpaceDescriptor, WeylGroup, get_space

INF = float("inf")


def inv_p(p) -> Fraction:
    """Exact ``1/p`` from an int, Fraction, float, or the strings 'inf'/'kink'."""
    if isinstance(p, str):
        if p.strip().lower() in ("inf", "infinity", "oo"):
            return Fraction(0)
        p = Fraction(p)
    if isinstance(p, float):
        if math.isinf(p):
            return Fraction(0)
        p = Fraction(p).limit_denominator(10**9)
    p = Fraction(p)
    if p < 2:
        raise ValueError(f"p must lie in [2, inf], got {p}")
    return 1 / p


def _check_s(s: Fraction) -> Fraction:
    s = Fraction(s)
    if s < 0 or s > Fraction(1, 2):
        raise ValueError("1/p must lie in [0, 1/2]")
    return s


def kink_inv_p(n: int, r: int = 1) -> Fraction:
    """Abscissa ``1/p`` of the kink of delta(p; n, r)."""
    return Fraction(n - r, 2 * (n + r))


def delta_s(s, n: int, r: int) -> Fraction:
    s = _check_s(s)
    if not 1 <= r < n:
        raise ValueError("need 1 <= r < n")
    high = n * (Fraction(1, 2) - s) - Fraction(r, 2)
    low = Fraction(n - r, 2) * (Fraction(1, 2) - s)
    return max(high, low)


def delta0(p, n: int) -> Fraction:
    """Exponent for a single eigenfunction on an ``n``-manifold."""
    if n < 2:
        raise ValueError("n must be >= 2")
    return delta_s(inv_p(p), n, 1)


def delta(p, n: int, r: int) -> Fraction:
    """Exponent for joint eigenfunctions on a rank ``r`` space of dimension ``n``."""
    if r >= n:
        raise ValueError("r must be < n")
    return delta_s(inv_p(p), n, r)


@dataclass(frozen=True)
class ExponentReport:
    p: float
    inv_p: Fraction
    delta0: Fraction
    delta: Fraction
    kink_p: Fraction
    branch: str


def exponent_report(p, n: int, r: int) -> ExponentReport:
    s = inv_p(p)
    k = kink_inv_p(n, r)
    branch = "at" if s == k else ("above" if s < k else "below")
    kink_p = Fraction(1) / k if k else Fraction(0)
    return ExponentReport(
        p=INF if s == 0 else float(1 / s),
        inv_p=s,
        delta0=delta_s(s, n, 1),
        delta=delta_s(s, n, r),
        kink_p=kink_p,
        branch=branch,
    )


def both_branches_at_kink(n: int, r: int) -> bool:
    s = kink_inv_p(n, r)
    high = n * (Fraction(1, 2) - s) - Fraction(r, 2)
    low = Fraction(n - r, 2) * (Fraction(1, 2) - s)
    return high == low


def default_s_grid(npts: int = 50, extra: Iterable[Fraction] = ()) -> list[Fraction]:
    """Rational grid on [0, 1/2] with optional extra abscissas merged in."""
    pts = {Fraction(k, 2 * (npts - 1)) for k in range(npts)}
    pts.update(Fraction(e) for e in extra)
    return sorted(pts)


def product_delta_check(n: int, r: int, npts: int = 50) -> bool:
    """delta(p; n, r) == r * delta0(p; n/r) on a rational grid containing both kinks."""
    if n % r:
        raise ValueError("r must divide n")
    grid = default_s_grid(npts, [kink_inv_p(n, r), kink_inv_p(n // r, 1)])
    return all(delta_s(s, n, r) == r * delta_s(s, n // r, 1) for s in grid)


# ---------------------------------------------------------------------------
# Weyl signatures


def sigma_w(rs: RootSystem, W: WeylGroup, w: int, H) -> int:
    """``-sum m(alpha) sgn(w alpha (H))`` with ``w alpha(H) = alpha(w^{-1} H)``."""
    H = np.asarray(H, float)
    wiH = np.linalg.solve(W.elements[w], H)
    total = 0
    for a in rs.positive_roots:
        v = a.vector @ wiH
        if abs(v) < 1e-14:
            raise ValueError("sigma_w is undefined on a wall")
        total += a.multiplicity * (1 if v > 0 else -1)
    return -total


# ---------------------------------------------------------------------------
# L(x, p) and vertex data


def _supports(rs: RootSystem) -> list[tuple[int, tuple[int, ...]]]:
    """(multiplicity, support) for each positive root in coweight coordinates."""
    return [
        (a.multiplicity, tuple(i for i, c in enumerate(coef) if c != 0))
        for a, coef in zip(rs.positive_roots, rs.simple_coefficients)
    ]


def L_inf(x: Sequence, space) -> Fraction:
    sp = get_space(space)
    x = [Fraction(v) for v in x]
    total = Fraction(sp.n - sp.r)
    for m, supp in _supports(sp.roots):
        total -= Fraction(m, 2) * max(x[i] for i in supp)
    return total


def L_two(x: Sequence, space) -> Fraction:
    sp = get_space(space)
    x = [Fraction(v) for v in x]
    # a simple root is supported on its own coweight only
    return -sp.r + sum(x, Fraction(0))


def L_of(x: Sequence, p, space) -> Fraction:
    """Dyadic exponent profile, linear in 1/p between p = inf and p = 2."""
    return L_of_s(x, inv_p(p), space)


def L_of_s(x: Sequence, s, space) -> Fraction:
    s = _check_s(s)
    if any(Fraction(v) < 0 or Fraction(v) > 1 for v in x):
        raise ValueError("x must lie in [0, 1]^r")
    a, b = L_inf(x, space), L_two(x, space)
    return a + 2 * s * (b - a)


@dataclass(frozen=True)
class VertexProfile:
    v: tuple[int, ...]
    Delta_v_plus_mass: int
    Phi_v_count: int


def vertex_profile(space, v: Sequence[int]) -> VertexProfile:
    """Levi data of a vertex: roots vanishing on ``sum v_i omega_i``."""
    sp = get_space(space)
    v = tuple(int(x) for x in v)
    if len(v) != sp.r or any(x not in (0, 1) for x in v):
        raise ValueError("v must lie in {0,1}^r")
    mass = 0
    for a, coef in zip(sp.roots.positive_roots, sp.roots.simple_coefficients):
        if sum(Fraction(c) * vi for c, vi in zip(coef, v)) == 0:
            mass += a.multiplicity
    phi_count = sum(1 for vi in v if vi == 0)
    return VertexProfile(v, mass, phi_count)


def vertex_value_s(space, v: Sequence[int], s) -> Fraction:
    sp = get_space(space)
    prof = vertex_profile(sp, v)
    s = _check_s(s)
    at_inf = Fraction(sp.n - sp.r, 2) + Fraction(prof.Delta_v_plus_mass, 2)
    at_two = Fraction(-prof.Phi_v_count)
    return at_inf + 2 * s * (at_two - at_inf)


def vertex_value(space, v: Sequence[int], p) -> Fraction:
    return vertex_value_s(space, v, inv_p(p))


def vertices(r: int) -> list[tuple[int, ...]]:
    return list(itertools.product((0, 1), repeat=r))


def delta_relation_check(space, p) -> bool:
    """max{L(v0,p), L(v1,p)} == 2 delta(p) exactly."""
    sp = get_space(space)
    s = inv_p(p)
    v0, v1 = (0,) * sp.r, (1,) * sp.r
    lhs = max(vertex_value_s(sp, v0, s), vertex_value_s(sp, v1, s))
    return lhs == 2 * delta_s(s, sp.n, sp.r)


def max_vertex_check(space, s) -> bool:
    """Maximum over every vertex equals 2 delta."""
    sp = get_space(space)
    top = max(vertex_value_s(sp, v, s) for v in vertices(sp.r))
    return top == 2 * delta_s(s, sp.n, sp.r)


def M_of_s(space, s: int) -> int:
    """max m(Delta_v^+) over vertices with |Phi_v| = s."""
    sp = get_space(space)
    if not 0 <= s <= sp.r:
        raise ValueError("s out of range")
    vals = [
        prof.Delta_v_plus_mass
        for prof in (vertex_profile(sp, v) for v in vertices(sp.r))
        if prof.Phi_v_count == s
    ]
    return max(vals)


@dataclass(frozen=True)
class ConvexityCertificate:
    convex: bool
    sequence: tuple[int, ...]
    witnesses: tuple[tuple[int, ...], ...]
    connected: bool
    reducible: bool


def _dynkin_connected(rs: RootSystem, idx: Sequence[int]) -> bool:
    idx = list(idx)
    if len(idx) <= 1:
        return True
    S = [rs.simple_roots[i].vector for i in idx]
    seen, stack = {0}, [0]
    while stack:
        a = stack.pop()
        for b in range(len(idx)):
            if b not in seen and abs(rs.pairing(S[a], S[b])) > 1e-12:
                seen.add(b)
                stack.append(b)
    return len(seen) == len(idx)


def convexity_certificate(space) -> ConvexityCertificate:
    """Strict convexity of s -> M(s); reducible spaces are flagged, not certified."""
    sp = get_space(space)
    seq = tuple(M_of_s(sp, s) for s in range(sp.r + 1))
    gaps = [b - a for a, b in zip(seq, seq[1:])]
    convex = all(g2 > g1 for g1, g2 in zip(gaps, gaps[1:]))
    witnesses = []
    connected = True
    for s in range(sp.r + 1):
        for v in vertices(sp.r):
            prof = vertex_profile(sp, v)
            if prof.Phi_v_count == s and prof.Delta_v_plus_mass == seq[s]:
                phi = tuple(i for i, x in enumerate(v) if x == 0)
                witnesses.append(phi)
                connected &= _dynkin_connected(sp.roots, phi)
                break
    reducible = not sp.is_irreducible
    return ConvexityCertificate(
        convex=convex and not reducible,
        sequence=seq,
        witnesses=tuple(witnesses),
        connected=connected,
        reducible=reducible,
    )


def maximizer_locus(space, p) -> set[tuple[int, ...]]:
    sp = get_space(space)
    s = inv_p(p)
    vals = {v: vertex_value_s(sp, v, s) for v in vertices(sp.r)}
    top = max(vals.values())
    return {v for v, x in vals.items() if x == top}


# ---------------------------------------------------------------------------
# dyadic indices


def H_of_m(space, t: float, m: Sequence[float]) -> ChamberVector:
    """``t^{-1} sum_i omega_i e^{m_i}`` in the fundamental coweight basis."""
    sp = get_space(space)
    if t <= 1:
        raise ValueError("t must exceed 1")
    omega = sp.roots.fundamental_coweights()
    H = (np.exp(np.asarray(m, float)) @ omega) / t
    return ChamberVector(tuple(float(x) for x in H), True)


@dataclass(frozen=True)
class DyadicIndex:
    m: tuple[int, ...]
    t: float
    regular: bool
    class_members: tuple[tuple[int, ...], ...]


def dyadic_index_set(space, t: float, delta_param: float = 0.1) -> list[DyadicIndex]:
    """Classes of Z^r in [0, log t]^r merging small coordinates.

    ``|m| = max m_i``; coordinates with ``m_i <= delta |m|`` are free inside
    a class.  Representatives carry the largest admissible entries.
    """
    sp = get_space(space)
    if t <= math.e or not 0 < delta_param < 1:
        raise ValueError("need t > e and 0 < delta < 1")
    d = Fraction(str(delta_param))
    top = int(math.floor(math.log(t) + 1e-12))
    classes: dict[tuple, list[tuple[int, ...]]] = {}
    for m in itertools.product(range(top + 1), repeat=sp.r):
        size = max(m)
        cut = d * size
        key = (size,) + tuple(-1 if x <= cut else x for x in m)
        classes.setdefault(key, []).append(m)
    out = []
    for key, members in sorted(classes.items()):
        size = key[0]
        free = int(math.floor(d * size))
        rep = tuple(free if k == -1 else k for k in key[1:])
        out.append(DyadicIndex(rep, float(t), len(members) == 1, tuple(sorted(members))))
    return out


@dataclass(frozen=True)
class ProgressionResult:
    value: float
    predicted_exponent: Fraction
    predicted_log_power: int


def progression_sum(space, p, t: float) -> ProgressionResult:
    """Sum of ``t^{L(sigma, p)}`` over ``sigma in [0,1]^r cap Z^r / log t``."""
    sp = get_space(space)
    if t <= math.e:
        raise ValueError("t must exceed e")
    s = inv_p(p)
    lt = math.log(t)
    top = int(math.floor(lt + 1e-12))
    sup = _supports(sp.roots)
    w = 2.0 * float(s)
    total = 0.0
    for m in itertools.product(range(top + 1), repeat=sp.r):
        sigma = [x / lt for x in m]
        a = (sp.n - sp.r) - sum(mult * max(sigma[i] for i in supp) for mult, supp in sup) / 2.0
        b = -sp.r + sum(sigma)
        total += math.exp((a + w * (b - a)) * lt)
    kink = kink_inv_p(sp.n, sp.r)
    return ProgressionResult(total, 2 * delta_s(s, sp.n, sp.r), 1 if s == kink else 0)


def progression_log_slope(space, p, log_ts: Sequence[float] = (5, 6, 7, 8, 9)) -> float:
    """Slope of log(sum / t^{2 delta}) against log log t."""
    xs, ys = [], []
    for lt in log_ts:
        t = math.exp(lt)
        res = progression_sum(space, p, t)
        xs.append(math.log(lt))
        ys.append(math.log(res.value) - float(res.predicted_exponent) * lt)
    return float(np.polyfit(xs, ys, 1)[0])


def h_of_m_constant(space, t: float) -> float:
    """Largest |ln alpha(H_m) - (max_{alpha(omega_i) != 0} m_i - log t)| over the grid."""
    sp = get_space(space)
    top = int(math.floor(math.log(t) + 1e-12))
    worst = 0.0
    for m in itertools.product(range(top + 1), repeat=sp.r):
        H = H_of_m(sp, t, m).vector
        for a, coef in zip(sp.roots.positive_roots, sp.roots.simple_coefficients):
            mx = max(m[i] for i, c in enumerate(coef) if c)
            worst = max(worst, abs(math.log(a.vector @ H) - (mx - math.log(t))))
    return worst


__all__ = [
    "inv_p",
    "kink_inv_p",
    "delta0",
    "delta",
    "delta_s",
    "ExponentReport",
    "exponent_report",
    "product_delta_check",
    "sigma_w",
    "L_of",
    "L_of_s",
    "VertexProfile",
    "vertex_profile",
    "vertex_value",
    "vertex_value_s",
    "delta_relation_check",
    "max_vertex_check",
    "M_of_s",
    "ConvexityCertificate",
    "convexity_certificate",
    "maximizer_locus",
    "H_of_m",
    "DyadicIndex",
    "dyadic_index_set",
    "ProgressionResult",
    "progression_sum",
    "progression_log_slope",
    "h_of_m_constant",
]
