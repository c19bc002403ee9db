"""Structure theory of sp(4,R): coordinates, roots, parabolics and the Weyl group."""

from __future__ import annotations

from collections.abc import Iterable, Sequence
from dataclasses import astuple, dataclass, fields
from itertools import combinations, permutations, product

import numpy as np

from eingeom.einstein import ConformalTransform, EinPoint, Photon, incidence, photon_span
from eingeom.errors import DegenerateError, NotInGroupError, WallError
from eingeom.forms import W0_FORM
from eingeom.linalg import as_columns, null_space
from eingeom.sympl4 import in_sp4_algebra, is_symplectic


@dataclass(frozen=True)
class Sp4Element:
    """Coordinates of an element of sp(4,R).

    The assembled matrix is::

        [[ a,    a12,  r11,  r12],
         [ a21, -a,    r21,  r22],
         [-r22,  r12,  b,    b12],
         [ r21, -r11,  b21, -b  ]]
    """

    a: float = 0.0
    b: float = 0.0
    a12: float = 0.0
    a21: float = 0.0
    r11: float = 0.0
    r12: float = 0.0
    r21: float = 0.0
    r22: float = 0.0
    b12: float = 0.0
    b21: float = 0.0

    def matrix(self) -> np.ndarray:
        return assemble(self)

    @classmethod
    def from_matrix(cls, m: object) -> Sp4Element:
        mat = np.asarray(m, dtype=float)
        if mat.shape != (4, 4) or not in_sp4_algebra(mat):
            raise NotInGroupError("matrix is not in sp(4,R)")
        return cls(
            a=mat[0, 0],
            b=mat[2, 2],
            a12=mat[0, 1],
            a21=mat[1, 0],
            r11=mat[0, 2],
            r12=mat[0, 3],
            r21=mat[1, 2],
            r22=mat[1, 3],
            b12=mat[2, 3],
            b21=mat[3, 2],
        )

    @classmethod
    def basis(cls) -> list[Sp4Element]:
        names = [f.name for f in fields(cls)]
        return [cls(**{name: 1.0}) for name in names]


def assemble(coords: Sp4Element) -> np.ndarray:
    a, b, a12, a21, r11, r12, r21, r22, b12, b21 = astuple(coords)
    return np.array(
        [
            [a, a12, r11, r12],
            [a21, -a, r21, r22],
            [-r22, r12, b, b12],
            [r21, -r11, b21, -b],
        ],
        dtype=float,
    )


def cartan(a: float, b: float) -> np.ndarray:
    return np.diag([a, -a, b, -b]).astype(float)


def bracket(m: np.ndarray, n: np.ndarray) -> np.ndarray:
    return m @ n - n @ m


# ---------------------------------------------------------------------------
# Roots

_ROOT_SLOTS: dict[tuple[int, int], str] = {
    (2, 0): "a12",
    (-2, 0): "a21",
    (0, 2): "b12",
    (0, -2): "b21",
    (1, -1): "r11",
    (1, 1): "r12",
    (-1, -1): "r21",
    (-1, 1): "r22",
}


@dataclass(frozen=True, order=True)
class Root:
    """A root, acting on H(a, b) by the dot product with (a, b)."""

    pair: tuple[int, int]

    def __post_init__(self) -> None:
        pair = (int(self.pair[0]), int(self.pair[1]))
        if pair not in _ROOT_SLOTS:
            raise ValueError(f"{pair!r} is not a root of sp(4,R)")
        object.__setattr__(self, "pair", pair)

    def __neg__(self) -> Root:
        return Root((-self.pair[0], -self.pair[1]))

    def __call__(self, v: Sequence[float]) -> float:
        return float(self.pair[0] * v[0] + self.pair[1] * v[1])

    @property
    def slot(self) -> str:
        return _ROOT_SLOTS[self.pair]

    @property
    def is_long(self) -> bool:
        return 0 in self.pair

    def generator(self) -> np.ndarray:
        return assemble(Sp4Element(**{self.slot: 1.0}))


ROOT_SYSTEM = tuple(Root(pair) for pair in _ROOT_SLOTS)
ALPHA = Root((2, 0))
BETA = Root((-1, 1))


def is_root(pair: tuple[int, int]) -> bool:
    return pair in _ROOT_SLOTS


@dataclass(frozen=True, eq=False)
class RootSpace:
    root: Root
    generator: np.ndarray


def roots() -> list[RootSpace]:
    return [RootSpace(r, r.generator()) for r in ROOT_SYSTEM]


def root_of(x: np.ndarray, tol: float = 1e-9) -> Root | None:
    """The weight of a nonzero matrix under the Cartan subalgebra, if it is a root vector."""
    norm = float(np.linalg.norm(x))
    if norm == 0.0:
        return None
    weights = []
    for h in (cartan(1.0, 0.0), cartan(0.0, 1.0)):
        hx = bracket(h, x)
        lam = float(np.sum(hx * x)) / norm**2
        if np.linalg.norm(hx - lam * x) > tol * norm:
            return None
        weights.append(round(lam))
    pair = (weights[0], weights[1])
    return Root(pair) if is_root(pair) else None


@dataclass(frozen=True)
class PositiveSystem:
    positive: tuple[Root, ...]
    simple: tuple[Root, ...]


def positive_system(v0: Sequence[float] = (1.0, 2.0)) -> PositiveSystem:
    values = {r: r(v0) for r in ROOT_SYSTEM}
    walls = [r for r, value in values.items() if value == 0.0]
    if walls:
        raise WallError(f"functional {tuple(v0)!r} vanishes on the root {walls[0].pair!r}")
    positive = tuple(sorted((r for r in values if values[r] > 0), key=lambda r: values[r]))
    sums = {(x.pair[0] + y.pair[0], x.pair[1] + y.pair[1]) for x in positive for y in positive}
    simple = tuple(r for r in positive if r.pair not in sums)
    return PositiveSystem(positive, simple)


def _span_closure(generators: Iterable[Root]) -> set[Root]:
    gens = list(generators)
    closed: set[Root] = set(gens)
    frontier = list(gens)
    while frontier:
        nxt = []
        for r in frontier:
            for g in gens:
                pair = (r.pair[0] + g.pair[0], r.pair[1] + g.pair[1])
                if is_root(pair) and Root(pair) not in closed:
                    closed.add(Root(pair))
                    nxt.append(Root(pair))
        frontier = nxt
    return closed


def parabolic_basis(
    subset: Iterable[Root] = (), v0: Sequence[float] = (1.0, 2.0)
) -> list[np.ndarray]:
    """Basis of the parabolic subalgebra p_S for S a set of negative simple roots.

    Args:
        subset: Negatives of simple roots of the positive system of ``v0``
        v0: Functional defining the positive system

    Returns:
        Cartan generators, then the positive root vectors, then the root
        vectors of all non-negative sums of elements of ``subset``.
    """
    system = positive_system(v0)
    chosen = list(subset)
    allowed = {-r for r in system.simple}
    for r in chosen:
        if r not in allowed:
            raise ValueError(f"{r.pair!r} is not the negative of a simple root")
    extra = _span_closure(chosen) - set(system.positive)
    ordered = list(system.positive) + sorted(extra)
    return [cartan(1.0, 0.0), cartan(0.0, 1.0)] + [r.generator() for r in ordered]


def stabilized_subspaces(basis: Sequence[np.ndarray], tol: float = 1e-9) -> list[np.ndarray]:
    """Coordinate subspaces span{e_i : i in I} preserved by every matrix in ``basis``."""
    out = []
    for size in (1, 2, 3):
        for idx in combinations(range(4), size):
            others = [k for k in range(4) if k not in idx]
            if all(np.max(np.abs(m[np.ix_(others, list(idx))])) <= tol for m in basis):
                out.append(np.eye(4)[:, list(idx)])
    return out


# ---------------------------------------------------------------------------
# Weyl group and stem configurations


def _cartan_action(w: np.ndarray) -> np.ndarray:
    # induced map on (a, b) from H -> w H w^{-1}
    cols = []
    for h in (cartan(1.0, 0.0), cartan(0.0, 1.0)):
        d = np.diag(w @ h @ w.T)
        cols.append([d[0], d[2]])
    return np.array(cols).T


def weyl_group_sp4() -> list[np.ndarray]:
    """Signed permutation matrices in Sp(4,R), one per element of the Weyl group."""
    seen: list[np.ndarray] = []
    out = []
    for perm in permutations(range(4)):
        for signs in product((1.0, -1.0), repeat=4):
            w = np.zeros((4, 4))
            for col, row in enumerate(perm):
                w[row, col] = signs[col]
            if not is_symplectic(w):
                continue
            action = _cartan_action(w)
            if any(np.allclose(action, s) for s in seen):
                continue
            seen.append(action)
            out.append(w)
    return out


@dataclass(frozen=True, eq=False)
class StemConfig:
    """Points (p0, p_inf, p1, p2) and photons, each point on exactly two of them."""

    points: tuple[EinPoint, EinPoint, EinPoint, EinPoint]
    photons: tuple[Photon, Photon, Photon, Photon]

    def __post_init__(self) -> None:
        for p in self.points:
            if sum(ph.contains(p) for ph in self.photons) != 2:
                raise DegenerateError("each stem point must lie on exactly two photons")
        for ph in self.photons:
            if sum(ph.contains(p) for p in self.points) != 2:
                raise DegenerateError("each stem photon must contain exactly two points")

    def adjacency(self) -> np.ndarray:
        adj = np.zeros((4, 4), dtype=bool)
        for i, j in product(range(4), repeat=2):
            if i != j:
                adj[i, j] = incidence(self.points[i], self.points[j])
        return adj


def stem_configuration(points: Sequence[EinPoint]) -> StemConfig:
    """Stem configuration on four points in which p0, p_inf and p1, p2 are not incident."""
    p0, pinf, p1, p2 = points
    photons = (
        photon_span(p0.rep, p1.rep, p0.form),
        photon_span(p1.rep, pinf.rep, p0.form),
        photon_span(pinf.rep, p2.rep, p0.form),
        photon_span(p2.rep, p0.rep, p0.form),
    )
    return StemConfig((p0, pinf, p1, p2), photons)


def standard_stem_configuration() -> StemConfig:
    e = np.eye(5)
    return stem_configuration([EinPoint(e[:, k], W0_FORM) for k in (0, 4, 1, 3)])


@dataclass(frozen=True, eq=False)
class WeylSymmetry:
    permutation: tuple[int, ...]
    transform: ConformalTransform


_SLOTS = (0, 4, 1, 3)


def _adapted_frame(cfg: StemConfig) -> np.ndarray:
    form = cfg.points[0].form
    p0, pinf, p1, p2 = (p.rep for p in cfg.points)
    c0, c1 = form.inner(p0, pinf), form.inner(p1, p2)
    if abs(c0) < 1e-9 or abs(c1) < 1e-9:
        raise DegenerateError("opposite stem points must not be incident")
    four = np.column_stack([p0, pinf, p1, p2])
    w = null_space(four.T @ form.matrix)
    if w.shape[1] != 1 or form.quadratic(w[:, 0]) <= 0:
        raise DegenerateError("stem points do not span a nondegenerate 4-space")
    frame = np.zeros((5, 5))
    frame[:, _SLOTS[0]] = p0
    frame[:, _SLOTS[1]] = pinf / c0
    frame[:, _SLOTS[2]] = p1
    frame[:, _SLOTS[3]] = p2 / c1
    frame[:, 2] = w[:, 0] / np.sqrt(form.quadratic(w[:, 0]))
    return frame


def weyl_symmetries(cfg: StemConfig) -> list[WeylSymmetry]:
    """Incidence-preserving relabelings of the stem points, each with a realizing transform."""
    adj = cfg.adjacency()
    if adj.sum() != 8:
        raise DegenerateError("stem points do not form a 4-cycle of incident pairs")
    frame = _adapted_frame(cfg)
    inv = np.linalg.inv(frame)
    out = []
    for perm in permutations(range(4)):
        if not all(adj[perm[i], perm[j]] == adj[i, j] for i in range(4) for j in range(4)):
            continue
        p = np.zeros((5, 5))
        p[2, 2] = 1.0
        for i, image in enumerate(perm):
            p[_SLOTS[image], _SLOTS[i]] = 1.0
        out.append(WeylSymmetry(perm, ConformalTransform(frame @ p @ inv, cfg.points[0].form)))
    return out


@dataclass(frozen=True)
class DynamicalQuadruple:
    """Attracting, repelling and codimension-one attracting/repelling lines of a basis."""

    attract: np.ndarray
    repel: np.ndarray
    codim1_attract: np.ndarray
    codim1_repel: np.ndarray


def dynamical_quadruple(basis: object = None) -> DynamicalQuadruple:
    frame = np.eye(4) if basis is None else as_columns(basis)
    if frame.shape != (4, 4) or not is_symplectic(frame):
        raise NotInGroupError("basis is not symplectic")
    cols = [frame[:, k] / np.linalg.norm(frame[:, k]) for k in range(4)]
    return DynamicalQuadruple(cols[2], cols[3], cols[0], cols[1])
