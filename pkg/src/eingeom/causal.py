"""Causal structure of the double cover Êin and of the universal cover S^n x R.

A null vector of R^{n+1,2} in the hyperbolic last pair convention splits as a
positive part (x_1, ..., x_n, b) and a negative part (a, x_{n+1}) with
a = (U + V)/2 and b = (U - V)/2. Normalizing both parts to unit length gives the
universal cover coordinates (phi, theta) with phi on S^n and (a, x_{n+1}) =
(cos theta, sin theta). For normalized representatives
<p, q> = cos d(phi_p, phi_q) - cos(theta_p - theta_q).
"""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass, field
from enum import StrEnum

import numpy as np

from eingeom.config import DEFAULT_EPS
from eingeom.errors import DegenerateError, DimensionError, NotNullError
from eingeom.forms import EIN_21, Convention, FormSpec
from eingeom.linalg import as_vector

_TWO_PI = 2.0 * np.pi


def _require_lorentzian(spec: FormSpec) -> None:
    if spec.convention is not Convention.LAST_PAIR_HYPERBOLIC or spec.q != 2:
        raise ValueError(f"causal structure needs a hyp2 form of type (n+1, 2), got {spec!r}")


@dataclass(frozen=True, eq=False)
class HatPoint:
    """A point of the double cover: a null vector up to positive scale."""

    rep: np.ndarray
    form: FormSpec = EIN_21
    eps: float = field(default=DEFAULT_EPS, repr=False)

    def __post_init__(self) -> None:
        _require_lorentzian(self.form)
        v = as_vector(self.rep)
        norm = float(np.linalg.norm(v))
        if norm == 0.0:
            raise DegenerateError("the zero vector is not a point")
        u = v / norm
        if abs(self.form.quadratic(u)) > 10 * self.eps:
            raise NotNullError(f"{v.tolist()} is not null")
        u.setflags(write=False)
        object.__setattr__(self, "rep", u)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, HatPoint):
            return NotImplemented
        return self.form == other.form and bool(np.allclose(self.rep, other.rep, atol=1e-9))

    __hash__ = None  # type: ignore[assignment]


def antipode(p: HatPoint) -> HatPoint:
    return HatPoint(-p.rep, p.form)


def spatial_improper_point(spec: FormSpec = EIN_21) -> HatPoint:
    """Common endpoint of all spacelike geodesics of the patch."""
    e = np.zeros(spec.dim)
    e[-2] = 1.0
    return HatPoint(e, spec)


def timelike_improper_point(spec: FormSpec = EIN_21) -> HatPoint:
    """Common endpoint of all timelike geodesics of the patch."""
    e = np.zeros(spec.dim)
    e[-2] = -1.0
    return HatPoint(e, spec)


def causally_related_hat(p: HatPoint, q: HatPoint) -> bool:
    if p.form != q.form:
        raise ValueError("points live in different ambient forms")
    if np.allclose(p.rep, q.rep, atol=1e-9) or np.allclose(p.rep, -q.rep, atol=1e-9):
        raise DegenerateError("points are equal or antipodal")
    return p.form.inner(p.rep, q.rep) > p.eps


# ---------------------------------------------------------------------------
# Universal cover


@dataclass(frozen=True, eq=False)
class TildePoint:
    phi: np.ndarray
    theta: float

    def __post_init__(self) -> None:
        v = as_vector(self.phi)
        if abs(float(np.linalg.norm(v)) - 1.0) > 1e-9:
            raise DegenerateError("phi must be a unit vector")
        v = np.array(v)
        v.setflags(write=False)
        object.__setattr__(self, "phi", v)
        object.__setattr__(self, "theta", float(self.theta))

    def isclose(self, other: TildePoint, tol: float = 1e-9) -> bool:
        return bool(np.allclose(self.phi, other.phi, atol=tol)) and abs(
            self.theta - other.theta
        ) <= tol


def sphere_distance(u: np.ndarray, v: np.ndarray) -> float:
    return float(np.arccos(np.clip(float(u @ v), -1.0, 1.0)))


def lift_to_tilde(p: HatPoint, near: float | None = None) -> TildePoint:
    """Universal cover coordinates of p, with theta in (-pi, pi] or closest to ``near``."""
    r = p.rep
    n = p.form.dim - 3
    u, v = r[-2], r[-1]
    a, b = (u + v) / 2.0, (u - v) / 2.0
    positive = np.concatenate([r[:n], [b]])
    theta = float(np.arctan2(r[n], a))
    if near is not None:
        theta += _TWO_PI * round((near - theta) / _TWO_PI)
    return TildePoint(positive / np.linalg.norm(positive), theta)


def project_tilde(x: TildePoint, spec: FormSpec = EIN_21) -> HatPoint:
    _require_lorentzian(spec)
    n = spec.dim - 3
    if x.phi.shape != (n + 1,):
        raise DimensionError(f"phi must lie on S^{n}")
    a, s = np.cos(x.theta), np.sin(x.theta)
    b = x.phi[-1]
    rep = np.concatenate([x.phi[:n], [s, a + b, a - b]])
    return HatPoint(rep, spec)


class IntervalRelation(StrEnum):
    CHRONOLOGICAL = "chronological"
    CAUSAL_ONLY = "causal_only"
    NONE = "none"


def interval_relation_tilde(
    x: TildePoint, y: TildePoint, eps: float = DEFAULT_EPS
) -> IntervalRelation:
    gap = (y.theta - x.theta) - sphere_distance(x.phi, y.phi)
    if abs(gap) <= eps:
        return IntervalRelation.CAUSAL_ONLY
    if gap > 0:
        return IntervalRelation.CHRONOLOGICAL
    return IntervalRelation.NONE


def spiral_embed(x: TildePoint) -> np.ndarray:
    return np.exp(x.theta) * x.phi


def conjugate_point(x: TildePoint) -> TildePoint:
    return TildePoint(-x.phi, x.theta + np.pi)


@dataclass(frozen=True)
class PatchPredicate:
    """Membership in the Minkowski patches determined by a universal cover point.

    Calling the predicate tests I+(x) minus J+(conjugate(x)), which projects to
    Min+; ``spacelike`` tests the set of points not causally related to x,
    which projects to Min-.
    """

    base: TildePoint
    eps: float = DEFAULT_EPS

    def __call__(self, y: TildePoint) -> bool:
        d = sphere_distance(self.base.phi, y.phi)
        dt = y.theta - self.base.theta
        return d + self.eps < dt < _TWO_PI - d - self.eps

    def spacelike(self, y: TildePoint) -> bool:
        d = sphere_distance(self.base.phi, y.phi)
        return abs(y.theta - self.base.theta) < d - self.eps


def minkowski_patch_tilde(x: TildePoint, eps: float = DEFAULT_EPS) -> PatchPredicate:
    return PatchPredicate(x, eps)


def null_geodesic(x: TildePoint, direction: np.ndarray, s: float) -> TildePoint:
    """Point at parameter s on the future null geodesic leaving x along a tangent direction."""
    u = as_vector(direction)
    u = u - (u @ x.phi) * x.phi
    norm = float(np.linalg.norm(u))
    if norm == 0.0:
        raise DegenerateError("direction must be tangent to the sphere")
    u = u / norm
    return TildePoint(np.cos(s) * x.phi + np.sin(s) * u, x.theta + s)


def is_causal_curve(points: Sequence[TildePoint], tol: float = 1e-9) -> bool:
    """Whether the sampled graph theta -> phi(theta) is 1-Lipschitz."""
    for i, p in enumerate(points):
        for q in points[i + 1 :]:
            if sphere_distance(p.phi, q.phi) > abs(p.theta - q.theta) + tol:
                return False
    return True
