"""Spine reflections and the discrete groups they generate.

A spacelike circle through the improper point is the closure of a spacelike
geodesic of the Minkowski patch; the spine reflection fixing it acts on the
patch as the half-turn about that geodesic. Pairwise disjoint crooked planes
with these spines bound a fundamental region of the reflection group.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from enum import StrEnum
from itertools import combinations

import numpy as np

from eingeom.config import DEFAULT_EPS, DEFAULT_SEED, DEFAULT_WORD_LENGTH
from eingeom.crooked import CrookedPlane, disjoint, sample_region
from eingeom.dynamics import Word, reduced_words, word_label, word_matrix
from eingeom.einstein import (
    ConformalTransform,
    EinPoint,
    InvolutionKind,
    Photon,
    chart_section,
    classify_involution,
    improper_point,
    null_lines_of_plane,
    similarity_parts,
)
from eingeom.errors import (
    DegenerateError,
    FactorizationError,
    NotInGroupError,
    NotInvolutionError,
    NotUltraparallelError,
    PatchError,
    WallsIntersectError,
)
from eingeom.forms import EIN_21, MINKOWSKI_21, Subspace, orth_complement, signature
from eingeom.linalg import (
    as_vector,
    distance_to_span,
    intersect_spans,
    null_space,
    orth,
    rank,
    same_span,
)

logger = logging.getLogger(__name__)

__all__ = [
    "reduced_words",
    "word_label",
    "SpacelikeCircle",
    "SpineReflection",
    "spine_reflection",
    "ultraparallel",
    "compose_pair",
    "factor_triple",
    "GroupPresentation",
    "example_group",
    "orbit",
    "properness_certificate",
]

_Q = MINKOWSKI_21.matrix
_SEPARATION = 1e-6

SQRT2 = np.sqrt(2.0)
SQRT6 = np.sqrt(6.0)
EXAMPLE_DIRECTIONS = (
    np.array([SQRT2, 0.0, 1.0]),
    np.array([-SQRT2 / 2, SQRT6 / 2, 1.0]),
    np.array([-SQRT2 / 2, -SQRT6 / 2, 1.0]),
)
# The third vertex is the 120 degree rotation of the second; its printed form repeats an entry.
EXAMPLE_VERTICES = (
    np.array([0.0, SQRT2, 1.0]),
    np.array([-SQRT6 / 2, -SQRT2 / 2, 1.0]),
    np.array([SQRT6 / 2, -SQRT2 / 2, 1.0]),
)


def lorentz_cross(u: np.ndarray, v: np.ndarray) -> np.ndarray:
    """The vector n with <n, x> = det(u, v, x) for the Minkowski form."""
    return _Q @ np.cross(u, v)


# ---------------------------------------------------------------------------
# Circles and reflections


@dataclass(frozen=True, eq=False)
class SpacelikeCircle:
    """The projectivized null cone of a type (2,1) subspace of R^{3,2}."""

    subspace: Subspace
    eps: float = field(default=DEFAULT_EPS, repr=False)

    def __post_init__(self) -> None:
        if self.subspace.form != EIN_21:
            raise DegenerateError("spacelike circles live in Ein^{2,1}")
        sig = signature(self.subspace, self.eps)
        if sig != (2, 1, 0):
            raise DegenerateError(f"subspace has signature {sig}, expected (2, 1, 0)")

    @classmethod
    def from_spine(cls, point: object, direction: object) -> SpacelikeCircle:
        """Closure of the geodesic point + R direction of the patch."""
        p, u = as_vector(point), as_vector(direction)
        tangent = np.concatenate([u, [0.0, 0.0]])
        basis = np.column_stack([tangent, improper_point().rep, chart_section(p)])
        return cls(Subspace(basis, EIN_21))

    @property
    def basis(self) -> np.ndarray:
        return self.subspace.basis

    def contains(self, p: EinPoint, tol: float = 1e-7) -> bool:
        return self.subspace.contains(p.rep, tol)

    def isclose(self, other: SpacelikeCircle, tol: float = 1e-7) -> bool:
        return same_span(self.basis, other.basis, tol)

    def transformed(self, g: ConformalTransform) -> SpacelikeCircle:
        return SpacelikeCircle(Subspace(g.matrix @ self.basis, EIN_21), self.eps)

    def points(self, n: int) -> list[EinPoint]:
        q = orth(self.basis)
        w, r = np.linalg.eigh(q.T @ EIN_21.matrix @ q)
        frame = q @ r @ np.diag(1.0 / np.sqrt(np.abs(w)))
        # eigh sorts ascending: frame[:, 0] is the timelike vector
        theta = np.linspace(0.0, 2 * np.pi, n, endpoint=False)
        return [
            EinPoint(frame[:, 0] + np.cos(t) * frame[:, 1] + np.sin(t) * frame[:, 2]) for t in theta
        ]

    def spine(self) -> tuple[np.ndarray, np.ndarray]:
        """A point and unit direction of the spacelike geodesic of the patch, if it passes p_inf."""
        e4 = improper_point().rep
        if not self.subspace.contains(e4):
            raise PatchError("circle does not pass through the improper point")
        # points of the circle inside the patch: v = 1, modulo e4
        proj = self.basis[[0, 1, 2, 4], :]
        kernel = null_space(proj[3:4])
        directions = proj[:3] @ kernel
        direction = orth(directions)[:, 0]
        row = proj[3]
        point = proj[:3] @ (row / (row @ row))
        norm = float(direction @ _Q @ direction)
        return point, direction / np.sqrt(norm)


@dataclass(frozen=True, eq=False)
class SpineReflection:
    """The involution fixing a spacelike circle and the two points of its polar plane."""

    transform: ConformalTransform
    circle: SpacelikeCircle
    fixed_points: tuple[EinPoint, EinPoint]

    @classmethod
    def from_matrix(cls, matrix: object, eps: float = DEFAULT_EPS) -> SpineReflection:
        m = np.asarray(matrix, dtype=float)
        if np.linalg.det(m) < 0:
            m = -m
        g = ConformalTransform(m, EIN_21)
        fixed = classify_involution(g, eps)
        if fixed.kind is not InvolutionKind.SPACELIKE_CIRCLE_AND_TWO_POINTS:
            raise NotInvolutionError(f"involution fixes a {fixed.kind}, not a spine")
        assert fixed.fixed is not None and fixed.points is not None
        return cls(g, SpacelikeCircle(fixed.fixed, eps), fixed.points)

    @property
    def matrix(self) -> np.ndarray:
        return self.transform.matrix


def spine_reflection(circle: SpacelikeCircle) -> SpineReflection:
    """+Id on the circle's subspace, -Id on its orthogonal complement.

    The lift with determinant +1 is chosen; it reverses time orientation.
    """
    b = EIN_21.matrix
    v = circle.basis
    proj = v @ np.linalg.solve(v.T @ b @ v, v.T @ b)
    g = ConformalTransform(2.0 * proj - np.eye(5), EIN_21)
    if g.time_orientation != -1:
        raise DegenerateError("spine reflection preserves time orientation")
    polar = orth_complement(circle.subspace)
    a, c = null_lines_of_plane(polar.basis, EIN_21)
    return SpineReflection(g, circle, (EinPoint(a), EinPoint(c)))


def _common_null_point(w: np.ndarray, eps: float) -> np.ndarray:
    b = EIN_21.matrix
    e4 = improper_point().rep
    if w.shape[1] == 1:
        q = w[:, 0]
        if abs(float(q @ b @ q)) > 10 * eps * float(q @ q):
            raise NotUltraparallelError("circles share no point")
        return q
    if distance_to_span(e4, w) <= 1e-9:
        return e4
    if signature(Subspace(w, EIN_21), eps)[:2] != (1, 1):
        raise NotUltraparallelError("V1 ∩ V2 contains no null line")
    return null_lines_of_plane(w, EIN_21)[0]


def _tangent_direction(circle: SpacelikeCircle, q: np.ndarray) -> np.ndarray:
    """A vector of V ∩ q^perp independent of q; its class in q^perp / q is the spine direction."""
    b = EIN_21.matrix
    coeffs = null_space((q @ b @ circle.basis).reshape(1, 3))
    vecs = circle.basis @ coeffs
    unit = q / np.linalg.norm(q)
    vecs = vecs - np.outer(unit, unit @ vecs)
    return vecs[:, int(np.argmax(np.linalg.norm(vecs, axis=0)))]


def ultraparallel(
    first: SpacelikeCircle, second: SpacelikeCircle, eps: float = DEFAULT_EPS
) -> bool:
    """Whether two spacelike circles through a common point are ultraparallel.

    With q the common point and u_i the direction of circle i in q^perp / q (a copy
    of R^{2,1}), the pair is ultraparallel iff u1^perp ∩ u2^perp is a spacelike line,
    i.e. span{u1, u2} has type (1,1). Equivalently span{q, u1, u2} has signature
    (1, 1, 1); a null common perpendicular gives (1, 0, 2).

    Raises:
        NotUltraparallelError: If the circles coincide or share no point
    """
    w = intersect_spans(first.basis, second.basis, eps)
    if w.shape[1] == 3:
        raise NotUltraparallelError("the circles coincide")
    if w.shape[1] == 0:
        raise NotUltraparallelError("circles share no point")
    q = _common_null_point(w, eps)
    z = np.column_stack([q, _tangent_direction(first, q), _tangent_direction(second, q)])
    if rank(z, 1e-9) < 3:
        logger.debug("circles are tangent at the common point")
        return False
    sig = signature(Subspace(z, EIN_21), eps)
    logger.debug("span of common point and directions has signature %s", sig)
    return sig == (1, 1, 1)


# ---------------------------------------------------------------------------
# Compositions


class LinearClass(StrEnum):
    HYPERBOLIC = "hyperbolic"
    ELLIPTIC = "elliptic"
    PARABOLIC = "parabolic"


@dataclass(frozen=True)
class CompositionReport:
    """Eigenvalues of the linear part of a composition and its class (None for the identity)."""

    eigenvalues: np.ndarray
    kind: LinearClass | None

    @property
    def hyperbolic(self) -> bool:
        return self.kind is LinearClass.HYPERBOLIC


def linear_class(lin: np.ndarray, tol: float = 1e-9) -> CompositionReport:
    eig = np.linalg.eigvals(lin)
    if np.max(np.abs(eig.imag)) > tol:
        return CompositionReport(eig, LinearClass.ELLIPTIC)
    real = np.sort(eig.real)
    if np.allclose(lin, np.eye(3), atol=tol):
        return CompositionReport(real, None)
    if np.min(np.diff(real)) > _SEPARATION:
        return CompositionReport(real, LinearClass.HYPERBOLIC)
    return CompositionReport(real, LinearClass.PARABOLIC)


def _linear_part(g: ConformalTransform) -> tuple[float, np.ndarray, np.ndarray]:
    try:
        return similarity_parts(g)
    except NotInGroupError as exc:
        raise PatchError("transform does not preserve the Minkowski patch") from exc


def compose_pair(
    first: SpineReflection, second: SpineReflection
) -> tuple[ConformalTransform, CompositionReport]:
    """gamma = second ∘ first with the class of its linear part."""
    gamma = second.transform @ first.transform
    _, lin, _ = _linear_part(gamma)
    report = linear_class(lin)
    logger.debug("composition eigenvalues %s", np.round(report.eigenvalues, 9).tolist())
    return gamma, report


@dataclass(frozen=True)
class InvariantLine:
    point: np.ndarray
    direction: np.ndarray


def invariant_line(g: ConformalTransform) -> InvariantLine:
    """The unique line of the patch preserved by an isometry with hyperbolic linear part."""
    r, lin, t = _linear_part(g)
    report = linear_class(lin)
    if not report.hyperbolic:
        raise FactorizationError(f"linear part is {report.kind}, not hyperbolic")
    if abs(r - 1.0) > 1e-8:
        raise FactorizationError("transform is not an isometry of the patch")
    w, vecs = np.linalg.eig(lin)
    k = int(np.argmin(np.abs(w - 1.0)))
    direction = np.real(vecs[:, k])
    direction = direction / np.sqrt(float(direction @ _Q @ direction))
    system = np.column_stack([lin - np.eye(3), -direction])
    sol = np.linalg.lstsq(system, -t, rcond=None)[0]
    return InvariantLine(sol[:3], direction)


def common_perpendicular(a: InvariantLine, b: InvariantLine) -> tuple[np.ndarray, np.ndarray]:
    """Point and unit direction of the line meeting both lines orthogonally."""
    n = lorentz_cross(a.direction, b.direction)
    norm = float(n @ _Q @ n)
    if norm <= 0:
        raise NotUltraparallelError("invariant lines are not ultraparallel")
    n = n / np.sqrt(norm)
    system = np.column_stack([a.direction, -b.direction, n])
    s, _, _ = np.linalg.solve(system, b.point - a.point)
    return a.point + s * a.direction, n


def factor_triple(
    gammas: tuple[ConformalTransform, ConformalTransform, ConformalTransform],
    tol: float = 1e-8,
) -> tuple[SpineReflection, SpineReflection, SpineReflection]:
    """Spine reflections with gamma1 = i1 i2, gamma2 = i2 i3, gamma3 = i3 i1.

    The spine of i2 is the common perpendicular of the invariant lines of gamma1
    and gamma2; i1 and i3 follow as gamma1 i2 and i2 gamma2.

    Raises:
        FactorizationError: If the product is not the identity, a linear part is not
            hyperbolic, or the recovered maps are not spine reflections
        NotUltraparallelError: If two invariant lines are not ultraparallel
    """
    g1, g2, g3 = gammas
    if not (g1 @ g2 @ g3).is_projective_identity(tol):
        raise FactorizationError("gamma1 gamma2 gamma3 is not the identity")
    lines = [invariant_line(g) for g in gammas]
    for a, b in combinations(lines, 2):
        common_perpendicular(a, b)
    point, direction = common_perpendicular(lines[0], lines[1])
    i2 = spine_reflection(SpacelikeCircle.from_spine(point, direction))
    try:
        i1 = SpineReflection.from_matrix(g1.matrix @ i2.matrix)
        i3 = SpineReflection.from_matrix(i2.matrix @ g2.matrix)
    except (NotInvolutionError, DegenerateError) as exc:
        raise FactorizationError(f"recovered map is not a spine reflection: {exc}") from exc
    checks = (
        (i1.transform @ i2.transform, g1),
        (i2.transform @ i3.transform, g2),
        (i3.transform @ i1.transform, g3),
    )
    for got, want in checks:
        if not got.isclose(want, tol):
            raise FactorizationError("factorization does not reproduce the input")
    return i1, i2, i3


# ---------------------------------------------------------------------------
# Groups


@dataclass(frozen=True, eq=False)
class GroupPresentation:
    """Generators of a subgroup of O(3,2) with optional relator words."""

    generators: tuple[ConformalTransform, ...]
    relations: tuple[Word, ...] = ()
    involutive: bool = False

    def __post_init__(self) -> None:
        if not self.generators:
            raise ValueError("a presentation needs at least one generator")
        for g in self.generators:
            if g.form != EIN_21:
                raise NotInGroupError("generators must act on Ein^{2,1}")
        if self.involutive and not all(g.is_involution() for g in self.generators):
            raise NotInvolutionError("involutive presentation with a non-involutive generator")

    @classmethod
    def from_reflections(cls, reflections: list[SpineReflection]) -> GroupPresentation:
        relations = tuple((k, k) for k in range(len(reflections)))
        return cls(tuple(r.transform for r in reflections), relations, involutive=True)

    @property
    def rank(self) -> int:
        return len(self.generators)

    def word_matrix(self, word: Word) -> np.ndarray:
        mats = [g.matrix for g in self.generators]
        invs = [g.inverse().matrix for g in self.generators]
        return word_matrix(mats, word, invs)

    def element(self, word: Word) -> ConformalTransform:
        return ConformalTransform(self.word_matrix(word), EIN_21)

    def words(self, max_length: int) -> list[Word]:
        return list(reduced_words(self.rank, max_length, self.involutive))


GeometricObject = EinPoint | Photon | SpacelikeCircle | CrookedPlane


def orbit(
    seed: GeometricObject, group: GroupPresentation, max_length: int
) -> list[GeometricObject]:
    """Distinct images of ``seed`` under reduced words of length <= max_length, shortlex order."""
    if max_length < 0:
        raise ValueError(f"word length must be non-negative, got {max_length}")
    out: list[GeometricObject] = [seed]
    for word in group.words(max_length):
        image = seed.transformed(group.element(word))
        if not any(image.isclose(other) for other in out):  # type: ignore[arg-type]
            out.append(image)
    logger.debug("orbit of length %d: %d distinct objects", max_length, len(out))
    return out


# ---------------------------------------------------------------------------
# Fundamental regions and certificates


def region_sides(planes: list[CrookedPlane]) -> list[int]:
    """For each wall, the side containing the vertices of all the other walls."""
    sides = []
    for i, plane in enumerate(planes):
        others = np.array([q.vertex for j, q in enumerate(planes) if j != i])
        found = set(plane.sides(others).tolist()) if len(others) else {1}
        if len(found) != 1 or 0 in found:
            raise DegenerateError(f"wall {i} does not have the other walls on one side")
        sides.append(found.pop())
    return sides


def fundamental_region_contains(planes: list[CrookedPlane], x: object) -> bool:
    point = as_vector(x).reshape(1, 3)
    return all(
        int(plane.sides(point)[0]) == side
        for plane, side in zip(planes, region_sides(planes), strict=True)
    )


def _similarity_apply(g: ConformalTransform, points: np.ndarray) -> np.ndarray:
    r, lin, t = _linear_part(g)
    return r * points @ lin.T + t


def maps_halfspace_into(
    g: ConformalTransform,
    source: tuple[CrookedPlane, int],
    target: tuple[CrookedPlane, int],
    samples: int = 2000,
    seed: int = DEFAULT_SEED,
    extent: float = 10.0,
) -> bool:
    """Sampled check that g maps a crooked half-space into another one."""
    rng = np.random.default_rng(seed)
    pts = sample_region([source], samples, rng, source[0].vertex, extent)
    images = _similarity_apply(g, pts)
    plane, side = target
    return bool(np.all(plane.sides(images) == side))


@dataclass(frozen=True)
class ProperCertificate:
    """Finite evidence for proper discontinuity up to a word length.

    Attributes:
        certified: No checked word moved a region sample back into the region
        depth: Maximal word length checked
        words: Number of nontrivial words checked
        samples: Number of fundamental-region samples
        offending_word: First word that failed, if any
        offending_point: Region sample whose image stayed in the region, if any
    """

    certified: bool
    depth: int
    words: int
    samples: int
    offending_word: Word | None = None
    offending_point: np.ndarray | None = None

    @property
    def verdict(self) -> str:
        if self.certified:
            return f"certified-to-depth-{self.depth}"
        assert self.offending_word is not None
        return f"failed at word {word_label(self.offending_word)}"


def properness_certificate(
    planes: list[CrookedPlane],
    group: GroupPresentation,
    max_length: int = DEFAULT_WORD_LENGTH,
    samples: int = 2000,
    seed: int = DEFAULT_SEED,
    eps: float = DEFAULT_EPS,
    extent: float | None = None,
) -> ProperCertificate:
    """Check the walls and the action of all short words on the fundamental region.

    Args:
        planes: Crooked planes bounding the fundamental region, one per generator
        group: The group they are walls for
        max_length: Maximal reduced word length
        samples: Number of region samples
        seed: Seed of the sampling generator
        eps: Distance tolerance of the wall disjointness test
        extent: Half-width of the sampling box around the vertex centroid

    Returns:
        ProperCertificate labelled certified-to-depth-L on success

    Raises:
        WallsIntersectError: If two walls meet; carries the pair and a witness point
    """
    for i, j in combinations(range(len(planes)), 2):
        cert = disjoint(planes[i], planes[j], eps=eps, oracle=False)
        if not cert.disjoint:
            raise WallsIntersectError((i, j), cert.witness)
    sides = region_sides(planes)
    center = np.mean([p.vertex for p in planes], axis=0)
    if extent is None:
        extent = 4.0 * max(1.0, max(float(np.linalg.norm(p.vertex - center)) for p in planes))
    rng = np.random.default_rng(seed)
    walls = list(zip(planes, sides, strict=True))
    pts = sample_region(walls, samples, rng, center, extent)
    words = group.words(max_length)
    logger.debug("checking %d words on %d region samples", len(words), len(pts))
    for word in words:
        images = _similarity_apply(group.element(word), pts)
        inside = np.ones(len(images), dtype=bool)
        for plane, side in walls:
            inside &= plane.sides(images) == side
        if np.any(inside):
            k = int(np.argmax(inside))
            logger.warning("word %s keeps a region sample in the region", word_label(word))
            return ProperCertificate(False, max_length, len(words), len(pts), word, pts[k])
    return ProperCertificate(True, max_length, len(words), len(pts))


@dataclass(frozen=True, eq=False)
class ExampleGroup:
    circles: tuple[SpacelikeCircle, ...]
    planes: tuple[CrookedPlane, ...]
    reflections: tuple[SpineReflection, ...]
    presentation: GroupPresentation


def example_group(eps: float = DEFAULT_EPS) -> ExampleGroup:
    """Three pairwise ultraparallel circles through p_inf and their crooked planes.

    The spines pass through the vertices p_i with directions u_i. Both orientations are
    tried and the one whose planes are pairwise disjoint is returned.

    Raises:
        WallsIntersectError: If neither orientation gives disjoint planes
    """
    circles = tuple(
        SpacelikeCircle.from_spine(p, u)
        for p, u in zip(EXAMPLE_VERTICES, EXAMPLE_DIRECTIONS, strict=True)
    )
    reflections = tuple(spine_reflection(c) for c in circles)
    presentation = GroupPresentation.from_reflections(list(reflections))
    last = None
    for orientation in (1, -1):
        planes = tuple(
            CrookedPlane(p, u, orientation)
            for p, u in zip(EXAMPLE_VERTICES, EXAMPLE_DIRECTIONS, strict=True)
        )
        bad = None
        for i, j in combinations(range(3), 2):
            cert = disjoint(planes[i], planes[j], eps=eps, oracle=False)
            if not cert.disjoint:
                bad = ((i, j), cert.witness)
                break
        if bad is None:
            return ExampleGroup(circles, planes, reflections, presentation)
        logger.debug("orientation %+d: planes %s meet", orientation, bad[0])
        last = bad
    assert last is not None
    raise WallsIntersectError(last[0], last[1])
