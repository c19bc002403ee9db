"""The Einstein universe Ein^{n,1} as the projectivized null cone of R^{n+1,2}.

Points are null lines, photons are totally isotropic 2-planes and conformal
transformations are elements of O(n+1,2) acting projectively. The Minkowski
chart, the similarity matrices and the inversion are written for the
hyperbolic last pair convention, in which p0 = e_{n+3} and p_inf = e_{n+2}.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import StrEnum

import numpy as np

from eingeom.config import DEFAULT_EPS
from eingeom.errors import (
    DegenerateError,
    DimensionError,
    IdealPointError,
    NotInGroupError,
    NotInvolutionError,
    NotNullError,
    PoleError,
)
from eingeom.forms import (
    EIN_21,
    CausalTag,
    Convention,
    FormSpec,
    Subspace,
    classify_vector,
    intertwiner,
    signature,
)
from eingeom.linalg import (
    as_vector,
    distance_to_span,
    normalize_projective,
    null_space,
    orth,
    projective_distance,
    rank,
    rref,
    same_span,
)

_POINT_TOL = 1e-8


def _is_null(v: np.ndarray, form: FormSpec, eps: float) -> bool:
    u = v / np.linalg.norm(v)
    return abs(form.quadratic(u)) <= 10 * eps


@dataclass(frozen=True, eq=False)
class EinPoint:
    """A point of Ein^{n,1}: a null line, stored as a normalized representative."""

    rep: np.ndarray
    form: FormSpec = EIN_21
    eps: float = field(default=DEFAULT_EPS, repr=False)

    def __post_init__(self) -> None:
        v = as_vector(self.rep)
        if v.shape != (self.form.dim,):
            raise DimensionError(f"point of length {v.size} in a form of dim {self.form.dim}")
        if not np.any(v):
            raise DegenerateError("the zero vector is not a point")
        if not _is_null(v, self.form, self.eps):
            raise NotNullError(f"{v.tolist()} is not null")
        rep = normalize_projective(v)
        rep.setflags(write=False)
        object.__setattr__(self, "rep", rep)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, EinPoint):
            return NotImplemented
        return self.isclose(other)

    __hash__ = None  # type: ignore[assignment]

    def isclose(self, other: EinPoint, tol: float = _POINT_TOL) -> bool:
        return self.form == other.form and projective_distance(self.rep, other.rep) <= tol

    def transformed(self, g: ConformalTransform) -> EinPoint:
        return EinPoint(g.matrix @ self.rep, self.form)


def project_null(v: object, spec: FormSpec = EIN_21, eps: float = DEFAULT_EPS) -> EinPoint:
    return EinPoint(np.asarray(v, dtype=float), spec, eps)


@dataclass(frozen=True, eq=False)
class Photon:
    """A totally isotropic 2-plane, stored by the reduced row echelon form of its span."""

    basis: np.ndarray
    form: FormSpec = EIN_21
    eps: float = field(default=DEFAULT_EPS, repr=False)

    def __post_init__(self) -> None:
        cols = np.asarray(self.basis, dtype=float)
        if cols.shape != (self.form.dim, 2):
            raise DimensionError(f"photon needs two vectors of length {self.form.dim}")
        if rank(cols, self.eps) != 2:
            raise DegenerateError("photon spanning vectors are dependent")
        q = orth(cols)
        gram = q.T @ self.form.matrix @ q
        if np.max(np.abs(gram)) > self.eps * 10:
            raise NotNullError("span is not totally isotropic")
        canonical = rref(q.T)[:2].T
        canonical[:, 1] /= np.linalg.norm(canonical[:, 1])
        canonical.setflags(write=False)
        object.__setattr__(self, "basis", canonical)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Photon):
            return NotImplemented
        return self.isclose(other)

    __hash__ = None  # type: ignore[assignment]

    def isclose(self, other: Photon, tol: float = 1e-7) -> bool:
        return self.form == other.form and same_span(self.basis, other.basis, tol)

    def contains(self, p: EinPoint, tol: float = 1e-7) -> bool:
        return distance_to_span(p.rep, self.basis) <= tol

    def points(self, n: int) -> list[EinPoint]:
        q = orth(self.basis)
        ts = np.linspace(0.0, np.pi, n, endpoint=False)
        return [EinPoint(np.cos(t) * q[:, 0] + np.sin(t) * q[:, 1], self.form) for t in ts]

    def transformed(self, g: ConformalTransform) -> Photon:
        return Photon(g.matrix @ self.basis, self.form)


def photon_span(
    v: object, w: object, spec: FormSpec = EIN_21, eps: float = DEFAULT_EPS
) -> Photon:
    a, b = as_vector(v), as_vector(w)
    for x in (a, b):
        if not np.any(x) or not _is_null(x, spec, eps):
            raise NotNullError(f"{x.tolist()} is not null")
    if abs(spec.inner(a, b)) > eps * max(1.0, float(np.linalg.norm(a) * np.linalg.norm(b))):
        raise NotNullError("spanning vectors are not orthogonal")
    return Photon(np.column_stack([a, b]), spec, eps)


@dataclass(frozen=True)
class IsotropicFlag:
    point: EinPoint
    photon: Photon

    def __post_init__(self) -> None:
        if not self.photon.contains(self.point, 1e-6):
            raise DegenerateError("flag point does not lie on the flag photon")


def incidence(a: EinPoint | Photon, b: EinPoint | Photon, eps: float = DEFAULT_EPS) -> bool:
    if isinstance(a, Photon) and isinstance(b, EinPoint):
        a, b = b, a
    if isinstance(a, EinPoint) and isinstance(b, EinPoint):
        return abs(a.form.inner(a.rep, b.rep)) <= max(eps, 1e-12) * 10
    if isinstance(a, EinPoint) and isinstance(b, Photon):
        return b.contains(a)
    assert isinstance(a, Photon) and isinstance(b, Photon)
    return rank(np.hstack([a.basis, b.basis]), 1e-7) < 4


class HypersurfaceKind(StrEnum):
    LIGHTCONE = "lightcone"
    EINSTEIN_HYPERSPHERE = "einstein_hypersphere"
    SPACELIKE_HYPERSPHERE = "spacelike_hypersphere"
    SPACELIKE_CIRCLE = "spacelike_circle"
    TIMELIKE_CIRCLE = "timelike_circle"


@dataclass(frozen=True, eq=False)
class Hypersurface:
    """P(W ∩ N) for the linear subspace W described by ``defining``.

    For the three codimension-one kinds ``defining`` is the normal vector v and
    W = v^⊥; for circles it is a basis of W itself.
    """

    kind: HypersurfaceKind
    defining: np.ndarray
    form: FormSpec = EIN_21

    @property
    def subspace(self) -> Subspace:
        if self.kind in (HypersurfaceKind.SPACELIKE_CIRCLE, HypersurfaceKind.TIMELIKE_CIRCLE):
            return Subspace(self.defining, self.form)
        return Subspace(null_space((self.form.matrix @ self.defining).reshape(1, -1)), self.form)

    @property
    def vertex(self) -> EinPoint | None:
        if self.kind is HypersurfaceKind.LIGHTCONE:
            return EinPoint(self.defining, self.form)
        return None

    def contains(self, p: EinPoint, tol: float = 1e-7) -> bool:
        if self.kind in (HypersurfaceKind.SPACELIKE_CIRCLE, HypersurfaceKind.TIMELIKE_CIRCLE):
            return distance_to_span(p.rep, self.defining) <= tol
        v = self.defining / np.linalg.norm(self.defining)
        return abs(self.form.inner(p.rep, v)) <= tol


def hypersurface_from_vector(
    v: object, spec: FormSpec = EIN_21, eps: float = DEFAULT_EPS
) -> Hypersurface:
    vec = as_vector(v)
    tag = classify_vector(vec, spec, eps).tag
    if tag is CausalTag.ZERO:
        raise DegenerateError("the zero vector defines no hypersurface")
    kind = {
        CausalTag.LIGHTLIKE: HypersurfaceKind.LIGHTCONE,
        CausalTag.SPACELIKE: HypersurfaceKind.EINSTEIN_HYPERSPHERE,
        CausalTag.TIMELIKE: HypersurfaceKind.SPACELIKE_HYPERSPHERE,
    }[tag]
    return Hypersurface(kind, normalize_projective(vec), spec)


def lightcone(p: EinPoint) -> Hypersurface:
    return Hypersurface(HypersurfaceKind.LIGHTCONE, np.array(p.rep), p.form)


def lightcone_pair_intersection(p: EinPoint, q: EinPoint) -> Photon | Hypersurface:
    if p.isclose(q):
        raise DegenerateError("the lightcones of a point with itself coincide")
    if incidence(p, q):
        return photon_span(p.rep, q.rep, p.form)
    both = np.vstack([p.rep, q.rep]) @ p.form.matrix
    return Hypersurface(HypersurfaceKind.SPACELIKE_CIRCLE, null_space(both), p.form)


class LightconeSection(StrEnum):
    SPACELIKE_CIRCLE = "spacelike_circle"
    TWO_INCIDENT_PHOTONS = "two_incident_photons"


def lightcone_vs_hypersphere(
    u: object, v: object, spec: FormSpec = EIN_21, eps: float = DEFAULT_EPS
) -> LightconeSection:
    a, b = as_vector(u), as_vector(v)
    if classify_vector(a, spec, eps).tag is not CausalTag.LIGHTLIKE:
        raise NotNullError("lightcone vertex must be a null vector")
    if classify_vector(b, spec, eps).tag is not CausalTag.SPACELIKE:
        raise DegenerateError("hypersphere normal must be spacelike")
    if abs(spec.inner(a, b)) <= eps * float(np.linalg.norm(a) * np.linalg.norm(b)):
        return LightconeSection.TWO_INCIDENT_PHOTONS
    return LightconeSection.SPACELIKE_CIRCLE


# ---------------------------------------------------------------------------
# Minkowski chart


def _require_hyperbolic(spec: FormSpec) -> None:
    if spec.convention is not Convention.LAST_PAIR_HYPERBOLIC:
        raise ValueError(f"Minkowski chart needs the hyp2 convention, got {spec.convention!r}")


def minkowski_form(spec: FormSpec = EIN_21) -> FormSpec:
    _require_hyperbolic(spec)
    return FormSpec(spec.p - 1, spec.q - 1, Convention.DIAGONAL)


def origin(spec: FormSpec = EIN_21) -> EinPoint:
    e = np.zeros(spec.dim)
    e[-1] = 1.0
    return EinPoint(e, spec)


def improper_point(spec: FormSpec = EIN_21) -> EinPoint:
    e = np.zeros(spec.dim)
    e[-2] = 1.0
    return EinPoint(e, spec)


def chart_section(x: object, spec: FormSpec = EIN_21) -> np.ndarray:
    """The null vector (x, <x,x>, 1) lying over the patch point x."""
    mink = minkowski_form(spec)
    xv = as_vector(x)
    if xv.shape != (mink.dim,):
        raise DimensionError(f"patch point must have {mink.dim} coordinates")
    return np.concatenate([xv, [mink.quadratic(xv), 1.0]])


def minkowski_chart(x: object, spec: FormSpec = EIN_21) -> EinPoint:
    return EinPoint(chart_section(x, spec), spec)


def chart_inverse(point: EinPoint, eps: float = DEFAULT_EPS) -> np.ndarray:
    _require_hyperbolic(point.form)
    r = point.rep
    x, u, v = r[:-2], r[-2], r[-1]
    tol = max(eps, 1e-12) * 100
    if abs(v) <= tol:
        if np.linalg.norm(x) <= tol:
            raise IdealPointError("improper")
        if abs(u) > tol:
            raise IdealPointError("ideal_cone")
        raise IdealPointError("ideal_sphere")
    return np.array(x / v)


# ---------------------------------------------------------------------------
# Conformal transformations


@dataclass(frozen=True, eq=False)
class ConformalTransform:
    """An element of O(p,q) acting projectively on the null cone."""

    matrix: np.ndarray
    form: FormSpec = EIN_21
    eps: float = field(default=DEFAULT_EPS, repr=False)

    def __post_init__(self) -> None:
        m = np.array(self.matrix, dtype=float)
        n = self.form.dim
        if m.shape != (n, n):
            raise DimensionError(f"transform must be {n}x{n}, got {m.shape}")
        b = self.form.matrix
        scale = max(1.0, float(np.linalg.norm(m)) ** 2)
        if np.max(np.abs(m.T @ b @ m - b)) > max(self.eps, 1e-12) * 1e3 * scale:
            raise NotInGroupError("matrix does not preserve the ambient form")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    def __matmul__(self, other: ConformalTransform) -> ConformalTransform:
        return ConformalTransform(self.matrix @ other.matrix, self.form, self.eps)

    def apply(self, obj: EinPoint | Photon) -> EinPoint | Photon:
        return obj.transformed(self)

    def inverse(self) -> ConformalTransform:
        b = self.form.matrix
        return ConformalTransform(np.linalg.solve(b, self.matrix.T @ b), self.form, self.eps)

    def power(self, k: int) -> ConformalTransform:
        base = self if k >= 0 else self.inverse()
        return ConformalTransform(np.linalg.matrix_power(base.matrix, abs(k)), self.form)

    @property
    def determinant_sign(self) -> int:
        return 1 if np.linalg.det(self.matrix) > 0 else -1

    @property
    def time_orientation(self) -> int:
        """+1 if the transform preserves time orientation, -1 if it reverses it."""
        diag = self.form.with_convention(Convention.DIAGONAL)
        t = intertwiner(self.form, diag)
        md = t @ self.matrix @ np.linalg.inv(t)
        p = self.form.p
        return 1 if np.linalg.det(md[p:, p:]) > 0 else -1

    def is_projective_identity(self, tol: float = 1e-8) -> bool:
        eye = np.eye(self.form.dim)
        return bool(
            np.allclose(self.matrix, eye, atol=tol) or np.allclose(self.matrix, -eye, atol=tol)
        )

    def is_involution(self, tol: float = 1e-8) -> bool:
        return ConformalTransform(self.matrix @ self.matrix, self.form).is_projective_identity(tol)

    def isclose(self, other: ConformalTransform, tol: float = 1e-8) -> bool:
        return bool(
            np.allclose(self.matrix, other.matrix, atol=tol)
            or np.allclose(self.matrix, -other.matrix, atol=tol)
        )


def similarity_matrix(
    r: float, a: object, b: object, spec: FormSpec = EIN_21
) -> ConformalTransform:
    """Lift of the Minkowski similarity x -> r A x + b to O(n+1,2)."""
    mink = minkowski_form(spec)
    lin = np.asarray(a, dtype=float)
    t = as_vector(b)
    q = mink.matrix
    if r <= 0:
        raise ValueError(f"similarity scale must be positive, got {r!r}")
    if lin.shape != (mink.dim, mink.dim) or t.shape != (mink.dim,):
        raise DimensionError("linear part or translation has the wrong size")
    if not np.allclose(lin.T @ q @ lin, q, atol=1e-9):
        raise NotInGroupError("linear part is not an isometry of the Minkowski form")
    n = mink.dim
    f = np.zeros((n + 2, n + 2))
    f[:n, :n] = lin
    f[:n, n + 1] = t / r
    f[n, :n] = 2.0 * t @ q @ lin
    f[n, n] = r
    f[n, n + 1] = mink.quadratic(t) / r
    f[n + 1, n + 1] = 1.0 / r
    return ConformalTransform(f, spec)


def similarity_parts(
    g: ConformalTransform, tol: float = 1e-8
) -> tuple[float, np.ndarray, np.ndarray]:
    """Recover (r, A, b) from a transform fixing p_inf; inverse of similarity_matrix."""
    m = np.array(g.matrix)
    n = g.form.dim - 2
    if np.max(np.abs(m[n + 1, : n + 1])) > tol or np.max(np.abs(m[:n, n])) > tol:
        raise NotInGroupError("transform does not fix the improper point")
    if m[n + 1, n + 1] < 0:
        m = -m
    r = 1.0 / m[n + 1, n + 1]
    return float(r), m[:n, :n], m[:n, n + 1] * r


def inversion_matrix(spec: FormSpec = EIN_21) -> ConformalTransform:
    _require_hyperbolic(spec)
    m = np.eye(spec.dim)
    m[-2:, -2:] = [[0.0, 1.0], [1.0, 0.0]]
    return ConformalTransform(m, spec)


def inversion_apply(point: EinPoint) -> EinPoint:
    return EinPoint(inversion_matrix(point.form).matrix @ point.rep, point.form)


def photon_curve(r0: float, psi: float, theta: float, t: float) -> np.ndarray:
    """The null line through r0 (cos psi, sin psi, 0) in direction (cos theta, sin theta, 1)."""
    return np.array([r0 * np.cos(psi), r0 * np.sin(psi), 0.0]) + t * np.array(
        [np.cos(theta), np.sin(theta), 1.0]
    )


def inverted_photon_curve(r0: float, psi: float, theta: float, t_tilde: float) -> np.ndarray:
    p0 = np.array([np.cos(psi), np.sin(psi), 0.0]) / r0
    return p0 + t_tilde * np.array([-np.cos(theta - 2 * psi), np.sin(theta - 2 * psi), 1.0])


def invert_photon_parameter(
    r0: float, psi: float, theta: float, t: float, eps: float = DEFAULT_EPS
) -> float:
    if r0 <= 0:
        raise ValueError(f"radius must be positive, got {r0!r}")
    denominator = r0 * r0 + 2.0 * r0 * np.cos(theta - psi) * t
    if abs(denominator) <= eps:
        raise PoleError(f"t={t!r} maps into the ideal lightcone")
    return float(t / denominator)


# ---------------------------------------------------------------------------
# Involutions


class InvolutionKind(StrEnum):
    EMPTY_FIX = "empty"
    SPACELIKE_SPHERE = "spacelike_sphere"
    TIMELIKE_CIRCLE = "timelike_circle"
    SPACELIKE_CIRCLE_AND_TWO_POINTS = "spacelike_circle_and_two_points"
    EINSTEIN_HYPERSPHERE = "einstein_hypersphere"


_INVOLUTION_TABLE = {
    frozenset({(3, 0), (0, 2)}): InvolutionKind.EMPTY_FIX,
    frozenset({(2, 1), (1, 1)}): InvolutionKind.SPACELIKE_CIRCLE_AND_TWO_POINTS,
    frozenset({(3, 1), (0, 1)}): InvolutionKind.SPACELIKE_SPHERE,
    frozenset({(2, 2), (1, 0)}): InvolutionKind.EINSTEIN_HYPERSPHERE,
    frozenset({(1, 2), (2, 0)}): InvolutionKind.TIMELIKE_CIRCLE,
}


@dataclass(frozen=True)
class InvolutionFixedSet:
    """Fixed set of an involution of Ein^{2,1}.

    Attributes:
        kind: Topological type of the fixed set
        fixed: Subspace whose projectivized null cone is the positive-dimensional part
        points: The two isolated fixed points (circle-and-two-points case only)
    """

    kind: InvolutionKind
    fixed: Subspace | None
    points: tuple[EinPoint, EinPoint] | None = None


def null_lines_of_plane(plane: np.ndarray, form: FormSpec) -> tuple[np.ndarray, np.ndarray]:
    """The two null directions of a 2-plane of type (1,1)."""
    q = orth(plane)
    w, r = np.linalg.eigh(q.T @ form.matrix @ q)
    if not (w[0] < 0 < w[1]):
        raise DegenerateError("plane is not of type (1,1)")
    a, b = 1.0 / np.sqrt(-w[0]), 1.0 / np.sqrt(w[1])
    first = q @ r @ np.array([a, b])
    second = q @ r @ np.array([a, -b])
    return first, second


def classify_involution(g: ConformalTransform, eps: float = DEFAULT_EPS) -> InvolutionFixedSet:
    if g.form.dim != 5:
        raise DimensionError("involution classification is implemented for Ein^{2,1}")
    m = g.matrix
    eye = np.eye(5)
    if not np.allclose(m @ m, eye, atol=1e-8):
        raise NotInvolutionError("g^2 is not the identity")
    if g.is_projective_identity():
        raise NotInvolutionError("g is the identity")
    plus = null_space(m - eye, 1e-8)
    minus = null_space(m + eye, 1e-8)
    sig_plus = signature(Subspace(plus, g.form), eps)
    sig_minus = signature(Subspace(minus, g.form), eps)
    key = frozenset({sig_plus[:2], sig_minus[:2]})
    kind = _INVOLUTION_TABLE.get(key)
    if kind is None:
        raise NotInvolutionError(f"eigenspace signatures {sig_plus}, {sig_minus} are degenerate")
    if kind is InvolutionKind.EMPTY_FIX:
        return InvolutionFixedSet(kind, None)
    if kind is InvolutionKind.SPACELIKE_CIRCLE_AND_TWO_POINTS:
        circle, pair = (plus, minus) if sig_plus[:2] == (2, 1) else (minus, plus)
        a, b = null_lines_of_plane(pair, g.form)
        p1, p2 = EinPoint(a, g.form), EinPoint(b, g.form)
        both = np.vstack([p1.rep, p2.rep]) @ g.form.matrix
        if not same_span(null_space(both), circle, 1e-6):
            raise DegenerateError("fixed circle is not L(p1) ∩ L(p2)")
        return InvolutionFixedSet(kind, Subspace(circle, g.form), (p1, p2))
    if kind is InvolutionKind.EINSTEIN_HYPERSPHERE:
        fixed = plus if sig_plus[:2] == (2, 2) else minus
    elif kind is InvolutionKind.SPACELIKE_SPHERE:
        fixed = plus if sig_plus[:2] == (3, 1) else minus
    else:
        fixed = plus if sig_plus[:2] == (1, 2) else minus
    return InvolutionFixedSet(kind, Subspace(fixed, g.form))


# ---------------------------------------------------------------------------
# Closures of geodesics


@dataclass(frozen=True)
class GeodesicClosure:
    """Frontier of a geodesic of the patch in the double cover of Ein.

    ``frontier`` holds positive-scale representatives; in Ein itself all of
    them collapse to the improper point except in the lightlike case.
    """

    kind: CausalTag
    frontier: tuple[np.ndarray, ...]
    photon: Photon | None = None


def geodesic_closure(p: object, v: object, spec: FormSpec = EIN_21) -> GeodesicClosure:
    mink = minkowski_form(spec)
    base, direction = as_vector(p), as_vector(v)
    tag = classify_vector(direction, mink).tag
    e = np.zeros(spec.dim)
    e[-2] = 1.0
    if tag is CausalTag.ZERO:
        raise DegenerateError("geodesic direction must be nonzero")
    if tag is CausalTag.SPACELIKE:
        return GeodesicClosure(tag, (e,))
    if tag is CausalTag.TIMELIKE:
        return GeodesicClosure(tag, (-e,))
    w = np.concatenate([direction, [2.0 * mink.inner(base, direction), 0.0]])
    return GeodesicClosure(tag, (w, -w), photon_span(chart_section(base, spec), w, spec))


# ---------------------------------------------------------------------------
# The matrix model of Ein^{1,1}

EIN11_FORM_MATRIX = 0.5 * np.array(
    [[0.0, 0.0, 0.0, 1.0], [0.0, 0.0, -1.0, 0.0], [0.0, -1.0, 0.0, 0.0], [1.0, 0.0, 0.0, 0.0]]
)


def ein11_inner(x: np.ndarray, y: np.ndarray) -> float:
    return float(np.ravel(x) @ EIN11_FORM_MATRIX @ np.ravel(y))


@dataclass(frozen=True, eq=False)
class Ein11Point:
    """A rank-one 2x2 matrix up to scale, with the two ruling leaves through it.

    Attributes:
        matrix: Normalized representative
        column: Column space, the leaf of the first ruling, as a point of RP^1
        row: Row space, the leaf of the second ruling, as a point of RP^1
    """

    matrix: np.ndarray
    column: np.ndarray
    row: np.ndarray

    def coordinates(self) -> np.ndarray:
        return np.ravel(self.matrix)

    def leaves(self) -> tuple[np.ndarray, np.ndarray]:
        return self.column, self.row

    def incident(self, other: Ein11Point, tol: float = 1e-9) -> bool:
        return abs(ein11_inner(self.matrix, other.matrix)) <= tol

    def on_leaf_of(self, other: Ein11Point, tol: float = 1e-9) -> bool:
        return (
            projective_distance(self.column, other.column) <= tol
            or projective_distance(self.row, other.row) <= tol
        )


def ein11_model(x: object, eps: float = DEFAULT_EPS) -> Ein11Point:
    m = np.asarray(x, dtype=float)
    if m.shape != (2, 2):
        raise DimensionError("Ein^{1,1} points are 2x2 matrices")
    norm = float(np.linalg.norm(m))
    if norm == 0.0:
        raise DegenerateError("the zero matrix is not a point")
    if abs(np.linalg.det(m)) > eps * norm * norm:
        raise NotNullError("matrix is nonsingular")
    flat = normalize_projective(np.ravel(m))
    u, _, vt = np.linalg.svd(m)
    return Ein11Point(
        flat.reshape(2, 2), normalize_projective(u[:, 0]), normalize_projective(vt[0])
    )


def ein11_act(a: object, b: object, x: Ein11Point) -> Ein11Point:
    """The action (A, B) . X = A X B^{-1} of GL(2) x GL(2)."""
    left, right = np.asarray(a, dtype=float), np.asarray(b, dtype=float)
    return ein11_model(left @ x.matrix @ np.linalg.inv(right))


def ein11_stem_configuration() -> tuple[list[Ein11Point], list[tuple[str, np.ndarray]]]:
    """Four points E_ij and the four leaves through them."""
    points = []
    for i, j in ((0, 0), (0, 1), (1, 1), (1, 0)):
        e = np.zeros((2, 2))
        e[i, j] = 1.0
        points.append(ein11_model(e))
    leaves = [
        ("column", np.array([1.0, 0.0])),
        ("column", np.array([0.0, 1.0])),
        ("row", np.array([1.0, 0.0])),
        ("row", np.array([0.0, 1.0])),
    ]
    return points, leaves
