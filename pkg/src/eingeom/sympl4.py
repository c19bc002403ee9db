"""The symplectic side of the Sp(4,R) / SO(3,2) dictionary.

V = R^4 carries the symplectic form omega(u, v) = u^T J v. Bivectors are stored
in raw coordinates on the ordered basis e12, e13, e14, e23, e24, e34, and the
split form B on Λ²V is defined by a ∧ b = -B(a, b) vol. The orthogonal
complement W0 of the dual bivector omega* is a copy of R^{3,2}; it is written
in the f-basis, whose Gram matrix is the 5x5 antidiagonal matrix.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from eingeom.config import DEFAULT_EPS
from eingeom.einstein import ConformalTransform, EinPoint, Photon, photon_span
from eingeom.errors import DegenerateError, NotInGroupError, NotInvolutionError
from eingeom.forms import W0_FORM
from eingeom.linalg import as_columns, as_vector, compound2, null_space, orth, pair_indices, rank

J = np.array(
    [
        [0.0, -1.0, 0.0, 0.0],
        [1.0, 0.0, 0.0, 0.0],
        [0.0, 0.0, 0.0, -1.0],
        [0.0, 0.0, 1.0, 0.0],
    ]
)

PAIRS = pair_indices(4)
_PAIR_INDEX = {pair: k for k, pair in enumerate(PAIRS)}
TRIPLES = [(0, 1, 2), (0, 1, 3), (0, 2, 3), (1, 2, 3)]


def _wedge_pairing() -> np.ndarray:
    # coefficient of vol in a ∧ b as a bilinear form on raw coordinates
    p = np.zeros((6, 6))
    terms = (((0, 1), (2, 3), 1.0), ((0, 2), (1, 3), -1.0), ((0, 3), (1, 2), 1.0))
    for (i, j), (k, l), sign in terms:
        a, b = _PAIR_INDEX[(i, j)], _PAIR_INDEX[(k, l)]
        p[a, b] = p[b, a] = sign
    return p


WEDGE_PAIRING = _wedge_pairing()
B_RAW = -WEDGE_PAIRING


def _e(i: int, j: int) -> np.ndarray:
    v = np.zeros(6)
    v[_PAIR_INDEX[(i, j)]] = 1.0
    return v


# columns are f1, ..., f5 in raw coordinates
F_BASIS = np.column_stack(
    [
        _e(0, 2),
        _e(1, 2),
        (_e(0, 1) - _e(2, 3)) / np.sqrt(2.0),
        -_e(0, 3),
        _e(1, 3),
    ]
)
B5 = np.array(W0_FORM.matrix)


def _solve_dual_bivector() -> np.ndarray:
    rhs = np.array([J[i, j] for i, j in PAIRS])
    star = np.linalg.solve(B_RAW, rhs)
    if not np.isclose(star @ WEDGE_PAIRING @ star, 2.0):
        star = -star
    return star


OMEGA_STAR = _solve_dual_bivector()


def omega(u: object, v: object) -> float:
    return float(as_vector(u) @ J @ as_vector(v))


def wedge(u: object, v: object) -> np.ndarray:
    a, b = as_vector(u), as_vector(v)
    return np.array([a[i] * b[j] - a[j] * b[i] for i, j in PAIRS])


def wedge3(a: np.ndarray, u: np.ndarray) -> np.ndarray:
    """Raw Λ³ coordinates (123, 124, 134, 234) of a ∧ u for a bivector a."""

    def c(i: int, j: int) -> float:
        return float(a[_PAIR_INDEX[(i, j)]])

    return np.array([c(i, j) * u[k] - c(i, k) * u[j] + c(j, k) * u[i] for i, j, k in TRIPLES])


def _wedge3_matrix(a: np.ndarray) -> np.ndarray:
    return np.column_stack([wedge3(a, e) for e in np.eye(4)])


@dataclass(frozen=True, eq=False)
class Bivector:
    raw: np.ndarray

    def __post_init__(self) -> None:
        v = as_vector(self.raw)
        if v.shape != (6,):
            raise ValueError(f"bivectors have 6 raw coordinates, got {v.shape}")
        object.__setattr__(self, "raw", v)

    @classmethod
    def from_w0(cls, coords: object) -> Bivector:
        return cls(F_BASIS @ as_vector(coords))

    @property
    def w0(self) -> np.ndarray:
        """f-coordinates of the B-orthogonal projection onto W0."""
        return B5 @ (F_BASIS.T @ B_RAW @ self.raw)

    def wedge_square(self) -> float:
        return float(self.raw @ WEDGE_PAIRING @ self.raw)


def bivector_form(a: Bivector, b: Bivector) -> float:
    return float(a.raw @ B_RAW @ b.raw)


def dual_bivector() -> Bivector:
    return Bivector(np.array(OMEGA_STAR))


def is_symplectic(g: np.ndarray, tol: float = 1e-9) -> bool:
    scale = max(1.0, float(np.linalg.norm(g)) ** 2)
    return bool(np.max(np.abs(g.T @ J @ g - J)) <= tol * scale)


def in_sp4_algebra(m: np.ndarray, tol: float = 1e-9) -> bool:
    return bool(np.max(np.abs(m.T @ J + J @ m)) <= tol * max(1.0, float(np.linalg.norm(m))))


# ---------------------------------------------------------------------------
# Lagrangians and points


@dataclass(frozen=True, eq=False)
class Lagrangian:
    span: np.ndarray
    eps: float = DEFAULT_EPS

    def __post_init__(self) -> None:
        cols = as_columns(self.span)
        if cols.shape != (4, 2) or rank(cols, self.eps) != 2:
            raise DegenerateError("a Lagrangian is spanned by two independent vectors of R^4")
        q = orth(cols)
        if abs(omega(q[:, 0], q[:, 1])) > 1e3 * self.eps:
            raise DegenerateError("span is not isotropic for omega")
        object.__setattr__(self, "span", cols)

    def contains(self, v: np.ndarray, tol: float = 1e-7) -> bool:
        return rank(np.column_stack([self.span, v]), tol) == 2


def lagrangian_to_point(lag: Lagrangian) -> EinPoint:
    w = Bivector(wedge(lag.span[:, 0], lag.span[:, 1]))
    return EinPoint(w.w0, W0_FORM)


def point_to_lagrangian(p: EinPoint) -> Lagrangian:
    if p.form != W0_FORM:
        raise ValueError("points must be given in W0 f-coordinates")
    a = Bivector.from_w0(p.rep).raw
    kernel = null_space(_wedge3_matrix(a), 1e-8)
    if kernel.shape[1] != 2:
        raise DegenerateError("bivector is not decomposable")
    return Lagrangian(kernel)


def line_to_photon(v: object) -> Photon:
    """Photon of all Lagrangians containing the line [v]."""
    vec = as_vector(v)
    if not np.any(vec):
        raise DegenerateError("the zero vector spans no line")
    perp = null_space((vec @ J).reshape(1, 4))
    # two vectors of v^{perp omega} independent modulo v
    residual = perp - np.outer(vec, vec @ perp) / float(vec @ vec)
    w = orth(residual)[:, :2]
    a = Bivector(wedge(vec, w[:, 0])).w0
    b = Bivector(wedge(vec, w[:, 1])).w0
    return photon_span(a / np.linalg.norm(a), b / np.linalg.norm(b), W0_FORM)


def photon_to_line(photon: Photon) -> np.ndarray:
    first = point_to_lagrangian(EinPoint(photon.basis[:, 0], W0_FORM))
    second = point_to_lagrangian(EinPoint(photon.basis[:, 1], W0_FORM))
    kernel = null_space(np.hstack([first.span, -second.span]), 1e-8)
    if kernel.shape[1] != 1:
        raise DegenerateError("photon Lagrangians do not share a single line")
    line = first.span @ kernel[:2, 0]
    return line / np.linalg.norm(line)


# ---------------------------------------------------------------------------
# The homomorphisms Sp(4,R) -> SO(3,2)


def restrict_to_w0(m6: np.ndarray) -> np.ndarray:
    """Matrix in the f-basis of a Λ²V endomorphism preserving W0."""
    return B5 @ F_BASIS.T @ B_RAW @ m6 @ F_BASIS


def _derivation(m: np.ndarray) -> np.ndarray:
    d = np.zeros((6, 6))
    eye = np.eye(4)
    for row, (i, j) in enumerate(PAIRS):
        for col, (k, l) in enumerate(PAIRS):
            d[row, col] = (
                m[i, k] * eye[j, l]
                - m[i, l] * eye[j, k]
                + eye[i, k] * m[j, l]
                - eye[i, l] * m[j, k]
            )
    return d


def sp_to_so_algebra(m: object) -> np.ndarray:
    mat = np.asarray(m, dtype=float)
    if mat.shape != (4, 4) or not in_sp4_algebra(mat):
        raise NotInGroupError("matrix is not in sp(4,R)")
    return restrict_to_w0(_derivation(mat))


def sp_to_so_group(g: object) -> ConformalTransform:
    mat = np.asarray(g, dtype=float)
    if mat.shape != (4, 4) or not is_symplectic(mat):
        raise NotInGroupError("matrix is not symplectic")
    return ConformalTransform(restrict_to_w0(compound2(mat)), W0_FORM)


# ---------------------------------------------------------------------------
# Symplectic planes, complex structures, contact geometry


def symplectic_plane_vector(u1: object, u2: object, eps: float = DEFAULT_EPS) -> Bivector:
    a, b = as_vector(u1), as_vector(u2)
    if abs(omega(a, b) - 1.0) > 1e3 * eps:
        raise DegenerateError(f"basis must satisfy omega(u1, u2) = 1, got {omega(a, b):.6g}")
    return Bivector(2.0 * wedge(a, b) + OMEGA_STAR)


def _involution_on_w0(m4: np.ndarray) -> ConformalTransform:
    return ConformalTransform(restrict_to_w0(compound2(m4)), W0_FORM)


def symplectic_plane_involution(u1: object, u2: object) -> ConformalTransform:
    """Induced action of Id on P ⊕ -Id on its omega-orthogonal."""
    plane = np.column_stack([as_vector(u1), as_vector(u2)])
    if abs(omega(plane[:, 0], plane[:, 1])) <= DEFAULT_EPS:
        raise DegenerateError("plane is not symplectic")
    perp = null_space(plane.T @ J)
    frame = np.hstack([plane, perp])
    sigma = frame @ np.diag([1.0, 1.0, -1.0, -1.0]) @ np.linalg.inv(frame)
    return _involution_on_w0(sigma)


@dataclass(frozen=True, eq=False)
class ComplexStructure:
    jc: np.ndarray

    def __post_init__(self) -> None:
        m = np.asarray(self.jc, dtype=float)
        if m.shape != (4, 4) or not np.allclose(m @ m, -np.eye(4), atol=1e-9):
            raise NotInvolutionError("complex structure must square to -Id")
        object.__setattr__(self, "jc", m)

    def conjugated(self, g: np.ndarray) -> ComplexStructure:
        return ComplexStructure(g @ self.jc @ np.linalg.inv(g))


def is_positive_compatible(jc: ComplexStructure, tol: float = 1e-9) -> bool:
    m = jc.jc
    if not np.allclose(m.T @ J @ m, J, atol=tol):
        return False
    gram = J @ m
    if not np.allclose(gram, gram.T, atol=tol):
        return False
    return bool(np.min(np.linalg.eigvalsh((gram + gram.T) / 2.0)) > tol)


def complex_structure_involution(jc: ComplexStructure) -> ConformalTransform:
    if not is_symplectic(jc.jc):
        raise NotInGroupError("complex structure is not compatible with omega")
    return _involution_on_w0(jc.jc)


@dataclass(frozen=True, eq=False)
class ContactPlane:
    """Contact plane at [v], lifted to the 3-space v^{perp omega}."""

    point: np.ndarray
    lift: np.ndarray

    def is_tangent(self, plane: np.ndarray, tol: float = 1e-8) -> bool:
        """Whether the projective line P(plane) through [v] is tangent here."""
        cols = as_columns(plane)
        return rank(np.column_stack([self.lift, cols]), tol) == 3


def _nonzero(v: object) -> np.ndarray:
    vec = as_vector(v)
    if not np.any(vec):
        raise DegenerateError("the zero vector spans no line")
    return vec / np.linalg.norm(vec)


def contact_plane(v: object) -> ContactPlane:
    vec = _nonzero(v)
    return ContactPlane(vec, polarity(vec))


def is_contact_line(plane: object, tol: float = 1e-8) -> bool:
    q = orth(as_columns(plane))
    return q.shape[1] == 2 and abs(omega(q[:, 0], q[:, 1])) <= tol


def polarity(v: object) -> np.ndarray:
    """Basis of the hyperplane v^{perp omega}, whose projectivization is H([v])."""
    vec = _nonzero(v)
    return null_space((vec @ J).reshape(1, 4))


def pole(hyperplane: np.ndarray) -> np.ndarray:
    normal = null_space(as_columns(hyperplane).T)
    if normal.shape[1] != 1:
        raise DegenerateError("basis does not span a hyperplane")
    p = J @ normal[:, 0]
    return p / np.linalg.norm(p)


def maslov_incident(w: Lagrangian, w_prime: Lagrangian, tol: float = 1e-8) -> bool:
    return rank(np.hstack([w.span, w_prime.span]), tol) < 4


@dataclass(frozen=True)
class SplittingInvolution:
    """Anti-symplectic involution Id on L1 ⊕ -Id on L2 and its action on Ein^{2,1}."""

    matrix: np.ndarray
    transform: ConformalTransform

    @property
    def time_reversing(self) -> bool:
        return self.transform.time_orientation == -1


def splitting_involution(first: Lagrangian, second: Lagrangian) -> SplittingInvolution:
    if maslov_incident(first, second):
        raise DegenerateError("Lagrangians are not transverse")
    frame = np.hstack([first.span, second.span])
    theta = frame @ np.diag([1.0, 1.0, -1.0, -1.0]) @ np.linalg.inv(frame)
    return SplittingInvolution(theta, _involution_on_w0(theta))


def bivector_to_w0(a: object) -> np.ndarray:
    return Bivector(as_vector(a)).w0


def w0_to_bivector(x: object) -> np.ndarray:
    return Bivector.from_w0(x).raw
