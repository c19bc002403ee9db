"""Crooked planes in Minkowski space E^{2,1} and their closures in Ein^{2,1}.

A crooked plane with vertex p and unit spacelike spine direction s is the union
of two wings and a stem. With l1, l2 the future null directions of s^perp
(third coordinate 1, ordered so that det(s, l1, l2) < 0):

* wing i is the null half-plane {p + t l_i + r sigma_i s : r >= 0},
* the stem is {p + a l1 + b l2 : ab >= 0},

where sigma_i = sign(orientation * det(u, l_i, s)) for the future timelike
reference u = (0, 0, 1). Every point is located by its coordinates
x - p = a l1 + b l2 + c s.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from enum import StrEnum
from functools import cached_property
from itertools import product

import numpy as np
from scipy.optimize import linprog, lsq_linear
from scipy.spatial import KDTree

from eingeom.config import DEFAULT_EPS, DEFAULT_SAMPLES, DEFAULT_SEED
from eingeom.einstein import (
    ConformalTransform,
    EinPoint,
    Photon,
    chart_inverse,
    chart_section,
    improper_point,
    inversion_matrix,
    null_lines_of_plane,
    photon_span,
    similarity_matrix,
    similarity_parts,
)
from eingeom.errors import DegenerateError, IdealPointError, NotInGroupError
from eingeom.forms import EIN_21, MINKOWSKI_21
from eingeom.linalg import as_vector, distance_to_span, null_space, projective_distance

logger = logging.getLogger(__name__)

REFERENCE_TIMELIKE = np.array([0.0, 0.0, 1.0])
DEFAULT_EXTENT = 10.0
_Q = MINKOWSKI_21.matrix


def _mink(u: np.ndarray, v: np.ndarray) -> float:
    return float(u @ _Q @ v)


class FaceLabel(StrEnum):
    VERTEX = "vertex"
    WING1 = "wing1"
    WING2 = "wing2"
    STEM_PLUS = "stem+"
    STEM_MINUS = "stem-"
    PHI1_PLUS = "phi1+"
    PHI1_MINUS = "phi1-"
    PHI2_PLUS = "phi2+"
    PHI2_MINUS = "phi2-"
    PSI1_PLUS = "psi1+"
    PSI1_MINUS = "psi1-"
    PSI2_PLUS = "psi2+"
    PSI2_MINUS = "psi2-"
    IDEAL1 = "ideal1"
    IDEAL2 = "ideal2"
    IMPROPER = "improper"
    OUTSIDE_PLUS = "outside+"
    OUTSIDE_MINUS = "outside-"
    OFF_SURFACE = "off_surface"

    @property
    def on_surface(self) -> bool:
        return self not in _OFF

    @property
    def dimension(self) -> int:
        if self in POINT_LABELS:
            return 0
        if self in SEGMENT_LABELS:
            return 1
        if self in FACE_LABELS:
            return 2
        return 3


_OFF = frozenset({FaceLabel.OUTSIDE_PLUS, FaceLabel.OUTSIDE_MINUS, FaceLabel.OFF_SURFACE})
POINT_LABELS = (FaceLabel.VERTEX, FaceLabel.IMPROPER, FaceLabel.IDEAL1, FaceLabel.IDEAL2)
SEGMENT_LABELS = (
    FaceLabel.PHI1_PLUS,
    FaceLabel.PHI1_MINUS,
    FaceLabel.PHI2_PLUS,
    FaceLabel.PHI2_MINUS,
    FaceLabel.PSI1_PLUS,
    FaceLabel.PSI1_MINUS,
    FaceLabel.PSI2_PLUS,
    FaceLabel.PSI2_MINUS,
)
FACE_LABELS = (FaceLabel.WING1, FaceLabel.WING2, FaceLabel.STEM_PLUS, FaceLabel.STEM_MINUS)

_PHI = {
    (0, 1): FaceLabel.PHI1_PLUS,
    (0, -1): FaceLabel.PHI1_MINUS,
    (1, 1): FaceLabel.PHI2_PLUS,
    (1, -1): FaceLabel.PHI2_MINUS,
}
_PSI = {
    (0, 1): FaceLabel.PSI1_PLUS,
    (0, -1): FaceLabel.PSI1_MINUS,
    (1, 1): FaceLabel.PSI2_PLUS,
    (1, -1): FaceLabel.PSI2_MINUS,
}


def _sign(x: float) -> int:
    return 1 if x > 0 else -1


# ---------------------------------------------------------------------------
# Crooked planes


@dataclass(frozen=True, eq=False)
class ConvexPiece:
    """A closed polyhedral piece apex + gens @ c with lower <= c <= upper."""

    face: FaceLabel
    apex: np.ndarray
    gens: np.ndarray
    lower: tuple[float, float]
    upper: tuple[float, float]

    def point(self, c: np.ndarray) -> np.ndarray:
        return self.apex + self.gens @ c

    def distance(self, x: np.ndarray) -> tuple[float, np.ndarray]:
        """Euclidean distance from x and the closest point of the piece."""
        res = lsq_linear(
            self.gens, as_vector(x) - self.apex, bounds=(self.lower, self.upper), method="bvls"
        )
        closest = self.point(res.x)
        return float(np.linalg.norm(closest - x)), closest


@dataclass(frozen=True, eq=False)
class CrookedPlane:
    """A crooked plane in E^{2,1}.

    Attributes:
        vertex: The vertex p
        spine: Unit spacelike direction s of the spine
        orientation: +1 for a positively oriented plane, -1 for a negatively oriented one
    """

    vertex: np.ndarray
    spine: np.ndarray
    orientation: int = 1

    def __post_init__(self) -> None:
        p, s = as_vector(self.vertex), as_vector(self.spine)
        if p.shape != (3,) or s.shape != (3,):
            raise ValueError("vertex and spine must be vectors of E^{2,1}")
        norm = _mink(s, s)
        if norm <= DEFAULT_EPS * float(s @ s):
            raise DegenerateError(f"spine direction {s.tolist()} is not spacelike")
        if self.orientation not in (1, -1):
            raise ValueError(f"orientation must be +1 or -1, got {self.orientation!r}")
        p, s = p.copy(), s / np.sqrt(norm)
        p.setflags(write=False)
        s.setflags(write=False)
        object.__setattr__(self, "vertex", p)
        object.__setattr__(self, "spine", s)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, CrookedPlane):
            return NotImplemented
        return self.isclose(other)

    __hash__ = None  # type: ignore[assignment]

    def isclose(self, other: CrookedPlane, tol: float = 1e-8) -> bool:
        """Same vertex, spine line and orientation."""
        return bool(
            np.allclose(self.vertex, other.vertex, atol=tol)
            and projective_distance(self.spine, other.spine) <= tol
            and self.orientation == other.orientation
        )

    @cached_property
    def null_directions(self) -> tuple[np.ndarray, np.ndarray]:
        plane = null_space((self.spine @ _Q).reshape(1, 3))
        first, second = null_lines_of_plane(plane, MINKOWSKI_21)
        first, second = first / first[2], second / second[2]
        if np.linalg.det(np.column_stack([self.spine, first, second])) > 0:
            first, second = second, first
        return first, second

    @cached_property
    def wing_signs(self) -> tuple[int, int]:
        s = self.spine
        signs = [
            _sign(self.orientation * np.linalg.det(np.column_stack([REFERENCE_TIMELIKE, ell, s])))
            for ell in self.null_directions
        ]
        return signs[0], signs[1]

    @cached_property
    def _frame(self) -> np.ndarray:
        l1, l2 = self.null_directions
        return np.column_stack([l1, l2, self.spine])

    def coordinates(self, x: object) -> np.ndarray:
        """Coefficients (a, b, c) with x - p = a l1 + b l2 + c s."""
        return np.linalg.solve(self._frame, as_vector(x) - self.vertex)

    def point(self, a: float, b: float, c: float) -> np.ndarray:
        return self.vertex + self._frame @ np.array([a, b, c])

    def membership(self, x: object, eps: float = DEFAULT_EPS) -> FaceLabel:
        """Locate a point on the plane or in one of its two complementary half-spaces."""
        w = as_vector(x) - self.vertex
        tol = eps * max(1.0, float(np.linalg.norm(w)))
        a, b, c = np.linalg.solve(self._frame, w)
        za, zb, zc = abs(a) <= tol, abs(b) <= tol, abs(c) <= tol
        s1 = self.wing_signs[0]
        if zc:
            if za and zb:
                return FaceLabel.VERTEX
            if zb:
                return _PHI[(0, _sign(a))]
            if za:
                return _PHI[(1, _sign(b))]
            if a * b > 0:
                return FaceLabel.STEM_PLUS if a > 0 else FaceLabel.STEM_MINUS
            side = _sign(b)
        else:
            cw = c * s1
            if zb and cw > 0:
                return FaceLabel.WING1
            if za and cw < 0:
                return FaceLabel.WING2
            side = _sign(b) if cw > 0 else -_sign(a)
        return FaceLabel.OUTSIDE_PLUS if side > 0 else FaceLabel.OUTSIDE_MINUS

    def transformed(self, g: ConformalTransform) -> CrookedPlane:
        """Image under a Minkowski similarity, given by its lift to Ein^{2,1}."""
        r, lin, t = similarity_parts(g)
        flip = _sign(np.linalg.det(lin))
        return CrookedPlane(r * lin @ self.vertex + t, lin @ self.spine, self.orientation * flip)

    def pieces(self) -> list[ConvexPiece]:
        """The plane as four closed convex pieces: two wings and the two stem quadrants."""
        l1, l2 = self.null_directions
        s1, s2 = self.wing_signs
        inf = np.inf
        p = self.vertex
        wing1 = np.column_stack([l1, s1 * self.spine])
        wing2 = np.column_stack([l2, s2 * self.spine])
        stem = np.column_stack([l1, l2])
        return [
            ConvexPiece(FaceLabel.WING1, p, wing1, (-inf, 0.0), (inf, inf)),
            ConvexPiece(FaceLabel.WING2, p, wing2, (-inf, 0.0), (inf, inf)),
            ConvexPiece(FaceLabel.STEM_PLUS, p, stem, (0.0, 0.0), (inf, inf)),
            ConvexPiece(FaceLabel.STEM_MINUS, p, stem, (-inf, -inf), (0.0, 0.0)),
        ]

    def sides(self, points: np.ndarray, eps: float = DEFAULT_EPS) -> np.ndarray:
        """Vectorized side test: +1 or -1 for the two half-spaces, 0 on the plane."""
        w = np.atleast_2d(points) - self.vertex
        tol = eps * np.maximum(1.0, np.linalg.norm(w, axis=1))
        a, b, c = np.linalg.solve(self._frame, w.T)
        za, zb, zc = np.abs(a) <= tol, np.abs(b) <= tol, np.abs(c) <= tol
        cw = c * self.wing_signs[0]
        on = np.where(zc, za | zb | (a * b > 0), (zb & (cw > 0)) | (za & (cw < 0)))
        side_b = np.where(b > 0, 1, -1)
        side = np.where(zc | (cw > 0), side_b, np.where(a > 0, -1, 1))
        return np.where(on, 0, side)

    def distance(self, x: object) -> float:
        """Euclidean distance from a point of E^{2,1} to the plane."""
        xv = as_vector(x)
        return min(piece.distance(xv)[0] for piece in self.pieces())

    @cached_property
    def standard_frame(self) -> np.ndarray:
        """Isometry A with A e1 = s taking (0, -1, 1), (0, 1, 1) to positive multiples of l1, l2."""
        l1, l2 = self.null_directions
        c = np.sqrt(-2.0 * _mink(l1, l2))
        return np.column_stack([self.spine, (l2 - l1) / c, (l1 + l2) / c])

    def placement(self) -> ConformalTransform:
        """Similarity carrying the standard plane of the same orientation onto this one."""
        return similarity_matrix(1.0, self.standard_frame, self.vertex)


def build_crooked(vertex: object, spine: object, orientation: int | str = 1) -> CrookedPlane:
    if isinstance(orientation, str):
        if orientation not in ("+", "-"):
            raise ValueError(f"orientation must be '+' or '-', got {orientation!r}")
        orientation = 1 if orientation == "+" else -1
    return CrookedPlane(
        np.asarray(vertex, dtype=float), np.asarray(spine, dtype=float), orientation
    )


def standard_crooked_plane(orientation: int = 1) -> CrookedPlane:
    """Vertex the origin, spine the x-axis."""
    return CrookedPlane(np.zeros(3), np.array([1.0, 0.0, 0.0]), orientation)


def membership(x: object, plane: CrookedPlane, eps: float = DEFAULT_EPS) -> FaceLabel:
    return plane.membership(x, eps)


# ---------------------------------------------------------------------------
# Closure in Ein^{2,1}


@dataclass(frozen=True)
class Segment:
    """An open photon segment {start + t * sign * end : t > 0}."""

    label: FaceLabel
    start: np.ndarray
    end: np.ndarray
    sign: int
    endpoints: tuple[FaceLabel, FaceLabel]

    @property
    def photon(self) -> Photon:
        return photon_span(self.start, self.end)

    def sample(self, n: int) -> np.ndarray:
        """n points of the segment as rows of null vectors."""
        theta = np.linspace(0.0, np.pi / 2, n + 2)[1:-1]
        return np.cos(theta)[:, None] * self.start + self.sign * np.sin(theta)[:, None] * self.end


@dataclass(frozen=True)
class CoverSegment:
    label: str
    start: str
    end: str


@dataclass(frozen=True)
class DoubleCoverStrata:
    """Strata of the lift of a crooked surface to the double cover of Ein^{2,1}."""

    points: dict[str, np.ndarray]
    segments: tuple[CoverSegment, ...]
    faces: tuple[FaceLabel, ...]

    @property
    def counts(self) -> tuple[int, int, int]:
        return len(self.points), len(self.segments), len(self.faces)


@dataclass(frozen=True, eq=False)
class CrookedSurface:
    """The closure of a crooked plane in Ein^{2,1} with its stratification."""

    base: CrookedPlane
    points: dict[FaceLabel, EinPoint]
    segments: dict[FaceLabel, Segment]
    ideal_vectors: tuple[np.ndarray, np.ndarray] = field(repr=False)
    faces: tuple[FaceLabel, ...] = FACE_LABELS

    @property
    def counts(self) -> tuple[int, int, int]:
        return len(self.points), len(self.segments), len(self.faces)

    @property
    def euler_characteristic(self) -> int:
        v, e, f = self.counts
        return v - e + f

    def photons(self) -> dict[str, Photon]:
        """The four photons phi1, phi2, psi1, psi2 containing the segments."""
        return {
            "phi1": self.segments[FaceLabel.PHI1_PLUS].photon,
            "phi2": self.segments[FaceLabel.PHI2_PLUS].photon,
            "psi1": self.segments[FaceLabel.PSI1_PLUS].photon,
            "psi2": self.segments[FaceLabel.PSI2_PLUS].photon,
        }

    def double_cover(self) -> DoubleCoverStrata:
        p0 = chart_section(self.base.vertex)
        e4 = improper_point().rep
        points = {"p0": p0, "p_inf_ti": -e4, "p_inf_sp": e4}
        segments: list[CoverSegment] = []
        for i, vec in enumerate(self.ideal_vectors, start=1):
            points[f"p{i}+"] = vec
            points[f"p{i}-"] = -vec
            for sign in "+-":
                segments.append(CoverSegment(f"phi{i}{sign}", "p0", f"p{i}{sign}"))
                segments.append(CoverSegment(f"alpha{i}{sign}", "p_inf_ti", f"p{i}{sign}"))
                segments.append(CoverSegment(f"beta{i}{sign}", "p_inf_sp", f"p{i}{sign}"))
        return DoubleCoverStrata(points, tuple(segments), self.faces)


def ideal_vector(plane: CrookedPlane, i: int) -> np.ndarray:
    """Null vector (l_i, 2<p, l_i>, 0) of the ideal endpoint of the line p + R l_i."""
    ell = plane.null_directions[i]
    return np.concatenate([ell, [2.0 * _mink(plane.vertex, ell), 0.0]])


def closure_strata(plane: CrookedPlane) -> CrookedSurface:
    p0 = chart_section(plane.vertex)
    e4 = improper_point().rep.copy()
    ideals = (ideal_vector(plane, 0), ideal_vector(plane, 1))
    points = {
        FaceLabel.VERTEX: EinPoint(p0),
        FaceLabel.IMPROPER: EinPoint(e4),
        FaceLabel.IDEAL1: EinPoint(ideals[0]),
        FaceLabel.IDEAL2: EinPoint(ideals[1]),
    }
    ideal_labels = (FaceLabel.IDEAL1, FaceLabel.IDEAL2)
    segments: dict[FaceLabel, Segment] = {}
    for (i, sign), label in _PHI.items():
        segments[label] = Segment(label, p0, ideals[i], sign, (FaceLabel.VERTEX, ideal_labels[i]))
    for (i, sign), label in _PSI.items():
        segments[label] = Segment(label, ideals[i], e4, sign, (ideal_labels[i], FaceLabel.IMPROPER))
    surface = CrookedSurface(plane, points, segments, ideals)
    logger.debug("crooked surface strata counts %s", surface.counts)
    return surface


def closure_membership(
    point: EinPoint, surface: CrookedSurface, eps: float = DEFAULT_EPS
) -> FaceLabel:
    """Locate a point of Ein^{2,1} relative to a crooked surface."""
    try:
        x = chart_inverse(point, eps)
    except IdealPointError as exc:
        if exc.stratum == "improper":
            return FaceLabel.IMPROPER
        return _ideal_membership(point.rep, surface)
    return surface.base.membership(x, eps)


def _ideal_membership(rep: np.ndarray, surface: CrookedSurface, tol: float = 1e-7) -> FaceLabel:
    e4 = improper_point().rep
    for i, vec in enumerate(surface.ideal_vectors):
        if projective_distance(rep, vec) <= tol:
            return (FaceLabel.IDEAL1, FaceLabel.IDEAL2)[i]
        basis = np.column_stack([vec, e4])
        if distance_to_span(rep, basis) <= tol:
            coeffs = np.linalg.lstsq(basis, rep, rcond=None)[0]
            return _PSI[(i, _sign(coeffs[1] / coeffs[0]))]
    return FaceLabel.OFF_SURFACE


def inversion_swaps_photons(surface: CrookedSurface, tol: float = 1e-7) -> bool:
    """Whether the standard inversion exchanges phi_i with psi_i and p_0 with p_inf."""
    iota = inversion_matrix()
    photons = surface.photons()
    swapped = all(
        photons[f"phi{i}"].transformed(iota).isclose(photons[f"psi{i}"], tol)
        for i in (1, 2)
    )
    p0 = surface.points[FaceLabel.VERTEX]
    pinf = surface.points[FaceLabel.IMPROPER]
    return swapped and p0.transformed(iota).isclose(pinf, tol)


# ---------------------------------------------------------------------------
# Sampling


@dataclass(frozen=True)
class SurfaceSample:
    points: np.ndarray
    faces: np.ndarray


def sample_surface(
    plane: CrookedPlane,
    n: int,
    rng: np.random.Generator | None = None,
    extent: float = DEFAULT_EXTENT,
) -> SurfaceSample:
    """Draw n points spread evenly over the four faces, parameters bounded by ``extent``."""
    rng = rng if rng is not None else np.random.default_rng(DEFAULT_SEED)
    counts = [n // 4 + (1 if k < n % 4 else 0) for k in range(4)]
    chunks: list[np.ndarray] = []
    labels: list[np.ndarray] = []
    for piece, m in zip(plane.pieces(), counts, strict=True):
        lo = np.maximum(piece.lower, -extent)
        hi = np.minimum(piece.upper, extent)
        c = rng.uniform(lo, hi, size=(m, 2))
        chunks.append(piece.apex + c @ piece.gens.T)
        labels.append(np.full(m, str(piece.face)))
    return SurfaceSample(np.vstack(chunks), np.concatenate(labels))


def sample_region(
    walls: list[tuple[CrookedPlane, int]],
    n: int,
    rng: np.random.Generator | None = None,
    center: np.ndarray | None = None,
    extent: float = DEFAULT_EXTENT,
    max_rounds: int = 50,
) -> np.ndarray:
    """Rejection-sample n points lying on the given side of every wall.

    Raises:
        ValueError: If the region is empty inside the sampling box
    """
    rng = rng if rng is not None else np.random.default_rng(DEFAULT_SEED)
    mid = np.zeros(3) if center is None else as_vector(center)
    kept: list[np.ndarray] = []
    total = 0
    for _ in range(max_rounds):
        batch = mid + rng.uniform(-extent, extent, size=(max(4 * n, 64), 3))
        mask = np.ones(len(batch), dtype=bool)
        for plane, side in walls:
            mask &= plane.sides(batch) == side
        kept.append(batch[mask])
        total += int(mask.sum())
        if total >= n:
            return np.vstack(kept)[:n]
    if total == 0:
        raise ValueError("no sample falls inside the region")
    logger.warning("only %d of %d region samples found", total, n)
    return np.vstack(kept)


def separating_crossing(
    a: object,
    b: object,
    plane: CrookedPlane,
    tol: float = 1e-10,
    max_iter: int = 200,
) -> np.ndarray:
    """Bisect the segment [a, b] joining the two sides down to a point of the plane."""
    lo, hi = as_vector(a), as_vector(b)
    side_lo, side_hi = plane.membership(lo), plane.membership(hi)
    if {side_lo, side_hi} != {FaceLabel.OUTSIDE_PLUS, FaceLabel.OUTSIDE_MINUS}:
        raise ValueError(f"endpoints must lie on opposite sides, got {side_lo} and {side_hi}")
    for _ in range(max_iter):
        mid = 0.5 * (lo + hi)
        label = plane.membership(mid)
        if label.on_surface:
            return mid
        if label == side_lo:
            lo = mid
        else:
            hi = mid
        if np.linalg.norm(hi - lo) <= tol:
            break
    return 0.5 * (lo + hi)


# ---------------------------------------------------------------------------
# Disjointness


@dataclass(frozen=True)
class DisjointnessCertificate:
    """Outcome of the face-pair analysis of two crooked planes.

    Attributes:
        disjoint: Whether the planes are disjoint
        distance: Exact sup-norm distance between the planes
        faces: Face pair attaining the distance
        points: Closest points on the first and second plane
        oracle_distance: Minimum sampled Euclidean distance, capped at 2 distance + extent / 100
        oracle_samples: Number of samples drawn per plane (0 when the oracle was skipped)
        agrees: Whether the oracle bound is consistent with the exact distance
    """

    disjoint: bool
    distance: float
    faces: tuple[FaceLabel, FaceLabel]
    points: tuple[np.ndarray, np.ndarray]
    oracle_distance: float | None = None
    oracle_samples: int = 0
    agrees: bool = True

    @property
    def witness(self) -> np.ndarray:
        """An intersection point when the planes meet, else the midpoint of the closest pair."""
        return 0.5 * (self.points[0] + self.points[1])


def piece_distance(a: ConvexPiece, b: ConvexPiece) -> tuple[float, np.ndarray, np.ndarray]:
    """Sup-norm distance between two convex pieces as a linear program.

    Variables are (c_a, c_b, t); minimize t subject to
    -t <= (apex_a + G_a c_a - apex_b - G_b c_b)_k <= t for every coordinate k.
    """
    diff = np.hstack([a.gens, -b.gens])
    offset = a.apex - b.apex
    ones = np.ones((3, 1))
    a_ub = np.vstack([np.hstack([diff, -ones]), np.hstack([-diff, -ones])])
    b_ub = np.concatenate([-offset, offset])
    lower, upper = a.lower + b.lower, a.upper + b.upper
    bounds = [(_bound(lo), _bound(hi)) for lo, hi in zip(lower, upper, strict=True)]
    bounds.append((0.0, None))
    cost = np.zeros(5)
    cost[-1] = 1.0
    res = linprog(cost, A_ub=a_ub, b_ub=b_ub, bounds=bounds, method="highs")
    if not res.success:
        raise RuntimeError(f"face-pair program failed: {res.message}")
    return float(res.fun), a.point(res.x[:2]), b.point(res.x[2:4])


def _bound(v: float) -> float | None:
    return None if np.isinf(v) else float(v)


def _oracle_distance(
    first: CrookedPlane,
    second: CrookedPlane,
    samples: int,
    seed: int,
    extent: float,
    bound: float,
) -> float:
    """Minimum sampled Euclidean distance, capped at ``bound``.

    Pairs farther apart than ``bound`` are pruned from the tree search, so a
    result equal to ``bound`` means no sampled pair came closer.
    """
    rng = np.random.default_rng(seed)
    pa = sample_surface(first, samples, rng, extent).points
    pb = sample_surface(second, samples, rng, extent).points
    dist, _ = KDTree(pa).query(pb, k=1, distance_upper_bound=bound, workers=-1)
    return float(min(np.min(dist), bound))


def disjoint(
    first: CrookedPlane,
    second: CrookedPlane,
    eps: float = DEFAULT_EPS,
    samples: int = DEFAULT_SAMPLES,
    seed: int = DEFAULT_SEED,
    oracle: bool = True,
    extent: float | None = None,
) -> DisjointnessCertificate:
    """Decide whether two crooked planes are disjoint.

    Every one of the 4 x 4 pairs of convex pieces is a linear program for the
    sup-norm distance. The planes are disjoint iff the minimum exceeds ``eps``
    relative to their scale. When ``oracle`` is set, both planes are sampled
    and the minimum pairwise distance is cross-checked against the exact value.

    Args:
        first: First crooked plane
        second: Second crooked plane
        eps: Relative distance below which the planes count as intersecting
        samples: Monte-Carlo samples per plane
        seed: Seed of the sampling generator
        oracle: Run the Monte-Carlo cross-check
        extent: Parameter box of the samples (defaults to a multiple of the vertex spread)

    Returns:
        DisjointnessCertificate with the closest pair of points
    """
    best: tuple[float, FaceLabel, FaceLabel, np.ndarray, np.ndarray] | None = None
    for pa, pb in product(first.pieces(), second.pieces()):
        d, xa, xb = piece_distance(pa, pb)
        if best is None or d < best[0]:
            best = (d, pa.face, pb.face, xa, xb)
    assert best is not None
    dist, fa, fb, xa, xb = best
    scale = max(1.0, float(np.linalg.norm(first.vertex)), float(np.linalg.norm(second.vertex)))
    is_disjoint = dist > eps * scale
    logger.debug("face-pair distance %.6g attained on (%s, %s)", dist, fa, fb)

    oracle_distance: float | None = None
    agrees = True
    n = 0
    if oracle and samples > 0:
        n = samples
        if extent is None:
            extent = 4.0 * max(scale, float(np.linalg.norm(first.vertex - second.vertex)))
        # Only sampled pairs closer than the exact distance can contradict it.
        bound = 2.0 * dist + 0.01 * extent
        oracle_distance = _oracle_distance(first, second, samples, seed, extent, bound)
        agrees = oracle_distance >= dist - max(eps, 1e-9) * scale
        if not agrees:
            logger.warning(
                "Monte-Carlo distance %.6g below exact face-pair distance %.6g",
                oracle_distance,
                dist,
            )
        logger.debug("oracle min distance %.6g over %d samples", oracle_distance, samples)
    return DisjointnessCertificate(
        is_disjoint, dist, (fa, fb), (xa, xb), oracle_distance, n, agrees
    )


# ---------------------------------------------------------------------------
# Automorphisms


def _conjugate(g: np.ndarray, plane: CrookedPlane | None) -> ConformalTransform:
    if plane is None:
        return ConformalTransform(g)
    s = plane.placement().matrix
    return ConformalTransform(s @ g @ np.linalg.inv(s))


def crooked_automorphisms(plane: CrookedPlane | None = None) -> dict[str, ConformalTransform]:
    """The involutions s0, s1, s2 preserving the closure of ``plane``.

    s0 is the reflection in the spine, s1 the inversion composed with -Id (so it lies in
    SO(3,2)) and s2 exchanges the ideal points. Without a plane, the standard one.
    """
    s0 = np.diag([1.0, -1.0, -1.0, 1.0, 1.0])
    s1 = np.zeros((5, 5))
    s1[:3, :3] = -np.eye(3)
    s1[3:, 3:] = [[0.0, -1.0], [-1.0, 0.0]]
    s2 = np.diag([-1.0, 1.0, -1.0, 1.0, 1.0])
    return {name: _conjugate(m, plane) for name, m in (("s0", s0), ("s1", s1), ("s2", s2))}


def cartan_automorphism(
    r: float, t: float, plane: CrookedPlane | None = None
) -> ConformalTransform:
    """Homothety by r > 0 times the boost scaling l2 by e^t and l1 by e^-t."""
    boost = np.array(
        [[1.0, 0.0, 0.0], [0.0, np.cosh(t), np.sinh(t)], [0.0, np.sinh(t), np.cosh(t)]]
    )
    return _conjugate(similarity_matrix(r, boost, np.zeros(3)).matrix, plane)


def surface_automorphism(
    g: ConformalTransform,
    surface: CrookedSurface,
    samples: int = 64,
    seed: int = DEFAULT_SEED,
    eps: float = 1e-7,
) -> bool:
    """Whether g maps the crooked surface onto itself.

    The four points are compared exactly as a set; faces and photon segments are
    checked on samples, in both directions.
    """
    if g.form != EIN_21:
        raise NotInGroupError("automorphisms act on Ein^{2,1} in the hyp2 convention")
    if g.determinant_sign < 0:
        raise NotInGroupError("transform is not in SO(3,2)")
    corners = list(surface.points.values())
    for h in (g, g.inverse()):
        images = [p.transformed(h) for p in corners]
        if not all(any(img.isclose(q, eps) for q in corners) for img in images):
            logger.debug("corner points not preserved")
            return False
        if not _maps_into(h, surface, samples, seed, eps):
            return False
    return True


def _maps_into(
    h: ConformalTransform, surface: CrookedSurface, samples: int, seed: int, eps: float
) -> bool:
    rng = np.random.default_rng(seed)
    face_points = sample_surface(surface.base, samples, rng).points
    vectors = [chart_section(x) for x in face_points]
    vectors += [v for seg in surface.segments.values() for v in seg.sample(max(2, samples // 8))]
    for v in vectors:
        label = closure_membership(EinPoint(h.matrix @ v), surface, eps)
        if not label.on_surface:
            logger.debug("sample %s maps off the surface", np.round(v, 6).tolist())
            return False
    return True
