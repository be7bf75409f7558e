"""Restricted root systems, Weyl groups and the catalog of model spaces.

Coordinates
-----------
Every space fixes a basis of the flat subalgebra ``a`` that is orthonormal
for the trace form of its matrix realization.  A root is stored as the
vector ``c`` with ``alpha(H) = c @ x`` where ``x`` are the coordinates of
``H``.  The Killing form on ``a`` is then ``x @ killing @ y`` with
``killing = kappa * I`` on each simple block; ``kappa`` is recorded as
``SpaceDescriptor.normalization``.  For compact spaces the positive form
``-B`` on ``i a`` is used, which is the Killing form of the noncompact dual.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

_TOL = 1e-9


def _frozen(a) -> np.ndarray:
    arr = np.array(a, dtype=float)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class Root:
    coords: tuple[float, ...]
    multiplicity: int = 1

    def __post_init__(self):
        if not any(abs(c) > _TOL for c in self.coords):
            raise ValueError("root coordinates must be nonzero")
        if self.multiplicity < 1:
            raise ValueError("multiplicity must be >= 1")

    @property
    def vector(self) -> np.ndarray:
        return np.asarray(self.coords, dtype=float)

    def __call__(self, H) -> float:
        """Evaluate the root on a point of ``a`` (or a stack of points)."""
        return np.asarray(H, dtype=float) @ self.vector


@dataclass(frozen=True)
class RootSystem:
    """Positive restricted roots with multiplicities and the Killing Gram matrix.

    Attributes
    ----------
    rank : int
    positive_roots : tuple of Root
        Ordered by height, then lexicographically by simple coefficients.
    simple_roots : tuple of Root
    simple_coefficients : tuple of tuple of int
        Expansion of each positive root in the simple roots.
    killing : ndarray
        Gram matrix of the Killing form on ``a``.
    cartan_type : str
    """

    rank: int
    positive_roots: tuple[Root, ...]
    simple_roots: tuple[Root, ...]
    simple_coefficients: tuple[tuple[int, ...], ...]
    killing: np.ndarray
    cartan_type: str
    blocks: tuple[tuple[int, ...], ...] = ()

    @property
    def killing_inv(self) -> np.ndarray:
        return np.linalg.inv(self.killing)

    def pairing(self, a, b) -> float:
        """Killing pairing on the dual space."""
        return float(np.asarray(a, float) @ self.killing_inv @ np.asarray(b, float))

    @property
    def coroots(self) -> tuple[np.ndarray, ...]:
        """``2 H_alpha / <alpha, alpha>`` for the simple roots."""
        out = []
        for a in self.simple_roots:
            Ha = self.killing_inv @ a.vector
            out.append(_frozen(2.0 * Ha / (a.vector @ Ha)))
        return tuple(out)

    @property
    def rho(self) -> np.ndarray:
        return _frozen(0.5 * sum(a.multiplicity * a.vector for a in self.positive_roots))

    @property
    def total_mass(self) -> int:
        """m(Delta) summed over positive and negative roots."""
        return 2 * sum(a.multiplicity for a in self.positive_roots)

    def all_roots(self) -> list[Root]:
        return list(self.positive_roots) + [
            Root(tuple(-c for c in a.coords), a.multiplicity) for a in self.positive_roots
        ]

    def fundamental_coweights(self) -> np.ndarray:
        """Rows ``omega_i`` with ``alpha_j(omega_i) = delta_ij``."""
        S = np.array([a.vector for a in self.simple_roots])
        return _frozen(np.linalg.inv(S).T)

    @property
    def is_irreducible(self) -> bool:
        return len(self.blocks) <= 1


def root_system_from_simple(
    simple: Sequence[Sequence[float]],
    multiplicity: int | Sequence[int],
    killing,
    cartan_type: str,
    max_roots: int = 200,
) -> RootSystem:
    """Close a set of simple roots under reflections.

    ``multiplicity`` is a single integer or one per simple root; every root
    inherits the multiplicity of the simple root in its Weyl orbit, which is
    exact for the simply laced catalog types.
    """
    simple = [np.asarray(s, float) for s in simple]
    r = len(simple[0])
    K = np.asarray(killing, float)
    Kinv = np.linalg.inv(K)
    mults = [multiplicity] * len(simple) if isinstance(multiplicity, int) else list(multiplicity)

    def reflect(v, a):
        return v - 2.0 * (v @ Kinv @ a) / (a @ Kinv @ a) * a

    S = np.array(simple)
    found: list[tuple[np.ndarray, int]] = [(s, m) for s, m in zip(simple, mults)]
    frontier = list(found)
    while frontier:
        nxt = []
        for v, m in frontier:
            for a in simple:
                w = reflect(v, a)
                if any(np.allclose(w, u, atol=1e-8) for u, _ in found):
                    continue
                found.append((w, m))
                nxt.append((w, m))
        frontier = nxt
        if len(found) > max_roots:
            raise ValueError("reflection closure did not terminate; invalid root data")

    positive = []
    for v, m in found:
        coef = np.linalg.lstsq(S.T, v, rcond=None)[0]
        icoef = np.rint(coef)
        if not np.allclose(coef, icoef, atol=1e-8):
            raise ValueError("root is not an integer combination of simple roots")
        if np.all(icoef >= 0):
            positive.append((tuple(int(c) for c in icoef), v, m))
    positive.sort(key=lambda p: (sum(p[0]), tuple(-c for c in p[0])))
    return RootSystem(
        rank=r,
        positive_roots=tuple(Root(tuple(float(c) for c in v), m) for _, v, m in positive),
        simple_roots=tuple(Root(tuple(float(c) for c in s), m) for s, m in zip(simple, mults)),
        simple_coefficients=tuple(c for c, _, _ in positive),
        killing=_frozen(K),
        cartan_type=cartan_type,
        blocks=(tuple(range(r)),),
    )


@dataclass(frozen=True)
class WeylGroup:
    """Weyl group as matrices acting on coordinates of ``a``.

    Elements are ordered by word length, then lexicographically by the word
    in simple reflection indices.
    """

    elements: tuple[np.ndarray, ...]
    words: tuple[tuple[int, ...], ...]
    identity: int = 0
    longest: int = 0

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def act_on_dual(self, i: int, coords) -> np.ndarray:
        """(w lambda)(H) = lambda(w^{-1} H)."""
        w = self.elements[i]
        return np.linalg.solve(w, np.eye(len(w))).T @ np.asarray(coords, float)

    def sign(self, i: int) -> int:
        return -1 if len(self.words[i]) % 2 else 1


def generate_weyl(rs: RootSystem, max_order: int = 10_000) -> WeylGroup:
    """Generate W from the simple reflections by breadth-first word search."""
    Kinv = rs.killing_inv
    gens = []
    for a in rs.simple_roots:
        v = a.vector
        Ha = Kinv @ v
        gens.append(np.eye(rs.rank) - 2.0 * np.outer(Ha, v) / (v @ Ha))
    elements = [np.eye(rs.rank)]
    words: list[tuple[int, ...]] = [()]
    layer = [(np.eye(rs.rank), ())]
    while layer:
        nxt = []
        for mat, word in layer:
            for i, g in enumerate(gens):
                cand = mat @ g
                if any(np.allclose(cand, e, atol=1e-9) for e in elements):
                    continue
                elements.append(cand)
                words.append(word + (i,))
                nxt.append((cand, word + (i,)))
        nxt.sort(key=lambda p: p[1])
        layer = nxt
        if len(elements) > max_order:
            raise ValueError("Weyl group generation exceeded bound; invalid root data")
    order = sorted(range(len(elements)), key=lambda k: (len(words[k]), words[k]))
    elements = [_frozen(elements[k]) for k in order]
    words = [words[k] for k in order]
    longest = max(range(len(words)), key=lambda k: (len(words[k]), words[k]))
    return WeylGroup(tuple(elements), tuple(words), identity=0, longest=longest)


@dataclass(frozen=True)
class ChamberVector:
    coords: tuple[float, ...]
    dominant_flag: bool = False

    @property
    def vector(self) -> np.ndarray:
        return np.asarray(self.coords, float)


@dataclass(frozen=True)
class SpectralParameter:
    """A direction in the open dual chamber together with a scale ``t``."""

    direction: tuple[float, ...]
    scale: float = 1.0

    @property
    def vector(self) -> np.ndarray:
        return np.asarray(self.direction, float)

    def value(self) -> np.ndarray:
        return self.scale * self.vector

    def check_regular(self, rs: RootSystem) -> None:
        for a in rs.positive_roots:
            if rs.pairing(a.vector, self.vector) <= 0:
                raise ValueError("spectral direction must be strictly dominant")


@dataclass(frozen=True)
class SpaceDescriptor:
    """A catalog symmetric space.

    ``normalization`` is the ratio of the Killing form to the trace form
    used for the coordinates of ``a``; ``weight_lattice_basis`` holds the
    spherical weights ``mu_i`` with ``<mu_i, alpha_j> = delta_ij <alpha_j, alpha_j>``.
    """

    id: str
    duality: str
    n: int
    r: int
    roots: RootSystem
    realization: str
    normalization: tuple[float, ...]
    weight_lattice_basis: np.ndarray | None = None
    factors: tuple[str, ...] = ()
    weyl: WeylGroup = field(default=None, compare=False, repr=False)  # type: ignore[assignment]

    def __post_init__(self):
        if self.r > self.n or self.roots.rank != self.r:
            raise ValueError("inconsistent rank data")
        if self.roots.total_mass != 2 * self.n - 2 * self.r:
            raise ValueError(f"{self.id}: m(Delta) != 2n - 2r")
        if self.weyl is None:
            object.__setattr__(self, "weyl", generate_weyl(self.roots))

    @property
    def is_compact(self) -> bool:
        return self.duality == "compact"

    @property
    def is_irreducible(self) -> bool:
        return self.roots.is_irreducible

    def to_json(self) -> dict:
        rs = self.roots
        return {
            "id": self.id,
            "duality": self.duality,
            "n": self.n,
            "r": self.r,
            "simple_roots": [list(a.coords) for a in rs.simple_roots],
            "positive_roots": [list(a.coords) for a in rs.positive_roots],
            "multiplicities": [a.multiplicity for a in rs.positive_roots],
            "killing": rs.killing.tolist(),
            "realization": self.realization,
        }


def dual_vector(rs: RootSystem, alpha: Root | Sequence[float]) -> np.ndarray:
    """``H_alpha`` with ``<H_alpha, H> = alpha(H)`` under the Killing form."""
    v = alpha.vector if isinstance(alpha, Root) else np.asarray(alpha, float)
    if abs(np.linalg.det(rs.killing)) < 1e-14:
        raise ValueError("singular Killing matrix; corrupted catalog data")
    return np.linalg.solve(rs.killing, v)


def chamber_decompose(rs: RootSystem, H, weyl: WeylGroup | None = None, tol: float = 1e-12):
    """Return ``(index of w, ChamberVector)`` with ``w H`` dominant.

    Ties on walls are broken by the first element in the Weyl ordering.
    """
    W = weyl or generate_weyl(rs)
    H = np.asarray(H, float)
    P = np.array([a.vector for a in rs.positive_roots])
    for i, w in enumerate(W.elements):
        wH = w @ H
        if np.all(P @ wH >= -tol):
            return i, ChamberVector(tuple(float(x) for x in wH), True)
    raise RuntimeError("no Weyl image is dominant")  # unreachable for valid data


def regularity_gap(rs: RootSystem, H) -> float:
    """min over roots of |alpha(H)|."""
    H = np.asarray(H, float)
    return float(min(abs(a.vector @ H) for a in rs.positive_roots))


# ---------------------------------------------------------------------------
# catalog

_S3 = math.sqrt(3.0)
_S2 = math.sqrt(2.0)
_A2_NONCOMPACT = [(_S2, 0.0), (-1.0 / _S2, math.sqrt(1.5))]
_A2_COMPACT = [(1.0, 0.0), (-0.5, _S3 / 2)]


def _space(id, duality, n, simple, mult, kappa, realization, cartan):
    r = len(simple)
    rs = root_system_from_simple(simple, mult, kappa * np.eye(r), cartan)
    basis = None
    if duality == "compact":
        basis = _spherical_weight_basis(rs)
    return SpaceDescriptor(
        id=id,
        duality=duality,
        n=n,
        r=r,
        roots=rs,
        realization=realization,
        normalization=(float(kappa),),
        weight_lattice_basis=basis,
        factors=(id,),
    )


def _spherical_weight_basis(rs: RootSystem) -> np.ndarray:
    S = np.array([a.vector for a in rs.simple_roots])
    G = S @ rs.killing_inv @ S.T
    # <mu_i, alpha_j> = delta_ij <alpha_j, alpha_j>
    rhs = np.diag(np.diag(G))
    M = np.linalg.solve((rs.killing_inv @ S.T).T, rhs).T
    return _frozen(M)


def build_catalog() -> dict[str, SpaceDescriptor]:
    """The model spaces used throughout, keyed by id."""
    spaces = [
        _space("H2", "noncompact", 2, [(_S2,)], 1, 4.0, "SL(2,R)/SO(2)", "A1"),
        _space("H3", "noncompact", 3, [(_S2,)], 2, 8.0, "SL(2,C)/SU(2)", "A1"),
        _space("SL3R", "noncompact", 5, _A2_NONCOMPACT, 1, 6.0, "SL(3,R)/SO(3)", "A2"),
        _space("S2", "compact", 2, [(1.0,)], 1, 2.0, "SO(3)/SO(2)", "A1"),
        _space("SU2group", "compact", 3, [(1.0,)], 2, 4.0, "SU(2)xSU(2)/SU(2)", "A1"),
        _space("SU3group", "compact", 8, _A2_COMPACT, 2, 6.0, "SU(3)xSU(3)/SU(3)", "A2"),
    ]
    cat = {s.id: s for s in spaces}
    cat["H2xH2"] = product_space(cat["H2"], cat["H2"])
    return cat


def product_space(a: SpaceDescriptor, b: SpaceDescriptor) -> SpaceDescriptor:
    """Block product of two spaces of the same duality."""
    if a.duality != b.duality:
        raise ValueError("product of mixed duality is not supported")
    ra, rb = a.roots, b.roots
    r = ra.rank + rb.rank

    def pad(root: Root, left: bool) -> Root:
        z = [0.0] * (rb.rank if left else ra.rank)
        c = list(root.coords) + z if left else z + list(root.coords)
        return Root(tuple(c), root.multiplicity)

    pos = [pad(x, True) for x in ra.positive_roots] + [pad(x, False) for x in rb.positive_roots]
    simp = [pad(x, True) for x in ra.simple_roots] + [pad(x, False) for x in rb.simple_roots]
    coef = [tuple(c) + (0,) * rb.rank for c in ra.simple_coefficients] + [
        (0,) * ra.rank + tuple(c) for c in rb.simple_coefficients
    ]
    K = np.zeros((r, r))
    K[: ra.rank, : ra.rank] = ra.killing
    K[ra.rank :, ra.rank :] = rb.killing
    rs = RootSystem(
        rank=r,
        positive_roots=tuple(pos),
        simple_roots=tuple(simp),
        simple_coefficients=tuple(coef),
        killing=_frozen(K),
        cartan_type=f"{ra.cartan_type}x{rb.cartan_type}",
        blocks=(tuple(range(ra.rank)), tuple(range(ra.rank, r))),
    )
    basis = None
    if a.weight_lattice_basis is not None and b.weight_lattice_basis is not None:
        basis = np.zeros((r, r))
        basis[: ra.rank, : ra.rank] = a.weight_lattice_basis
        basis[ra.rank :, ra.rank :] = b.weight_lattice_basis
        basis = _frozen(basis)
    return SpaceDescriptor(
        id=f"{a.id}x{b.id}",
        duality=a.duality,
        n=a.n + b.n,
        r=r,
        roots=rs,
        realization=f"{a.realization} x {b.realization}",
        normalization=a.normalization + b.normalization,
        weight_lattice_basis=basis,
        factors=a.factors + b.factors,
    )


def get_space(space: str | SpaceDescriptor) -> SpaceDescriptor:
    if isinstance(space, SpaceDescriptor):
        return space
    cat = _catalog_cache()
    if space not in cat:
        raise KeyError(f"unknown catalog space {space!r}; known: {sorted(cat)}")
    return cat[space]


_CACHE: dict[str, SpaceDescriptor] = {}


def _catalog_cache() -> dict[str, SpaceDescriptor]:
    if not _CACHE:
        _CACHE.update(build_catalog())
    return _CACHE


def catalog_json(spaces: Iterable[SpaceDescriptor] | None = None) -> str:
    spaces = list(spaces) if spaces is not None else list(_catalog_cache().values())
    return json.dumps([s.to_json() for s in spaces], indent=2)


def weyl_orbit(rs: RootSystem, W: WeylGroup, H) -> np.ndarray:
    """All images ``w H`` in the Weyl ordering."""
    H = np.asarray(H, float)
    return np.array([w @ H for w in W.elements])


def weight_from_labels(space: SpaceDescriptor, labels: Sequence[int]) -> np.ndarray:
    """Spherical weight ``sum_i labels[i] * mu_i``."""
    if space.weight_lattice_basis is None:
        raise ValueError(f"{space.id} has no weight lattice")
    labels = np.asarray(labels, float)
    if np.any(labels < 0) or not np.allclose(labels, np.rint(labels)):
        raise ValueError("labels must be nonnegative integers")
    return labels @ space.weight_lattice_basis


def labels_from_weight(space: SpaceDescriptor, mu) -> np.ndarray:
    rs = space.roots
    return np.array(
        [rs.pairing(mu, a.vector) / rs.pairing(a.vector, a.vector) for a in rs.simple_roots]
    )


def is_lattice_weight(space: SpaceDescriptor, mu, tol: float = 1e-9) -> bool:
    rs = space.roots
    for a in rs.positive_roots:
        q = rs.pairing(mu, a.vector) / rs.pairing(a.vector, a.vector)
        if q < -tol or abs(q - round(q)) > tol:
            return False
    return True


__all__ = [
    "Root",
    "RootSystem",
    "WeylGroup",
    "ChamberVector",
    "SpectralParameter",
    "SpaceDescriptor",
    "root_system_from_simple",
    "generate_weyl",
    "dual_vector",
    "chamber_decompose",
    "regularity_gap",
    "build_catalog",
    "product_space",
    "get_space",
    "catalog_json",
    "weyl_orbit",
    "weight_from_labels",
    "labels_from_weight",
    "is_lattice_weight",
]
