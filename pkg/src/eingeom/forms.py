"""Pseudo-Euclidean inner product spaces R^{p,q}."""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import StrEnum
from functools import cached_property

import numpy as np

from eingeom.config import DEFAULT_EPS
from eingeom.errors import DegenerateError, DimensionError
from eingeom.linalg import as_columns, null_space, orth, rank


class Convention(StrEnum):
    DIAGONAL = "diag"
    CARTAN_BLOCKS = "cartan"
    LAST_PAIR_HYPERBOLIC = "hyp2"
    ANTIDIAGONAL = "anti"


_HYPERBOLIC_PAIR = -0.5 * np.array([[0.0, 1.0], [1.0, 0.0]])


@dataclass(frozen=True)
class FormSpec:
    """A nondegenerate symmetric bilinear form of signature (p, q) in a fixed convention.

    Attributes:
        p: Number of positive directions
        q: Number of negative directions
        convention: Which of the matrix normal forms realizes the form
    """

    p: int
    q: int
    convention: Convention = Convention.DIAGONAL

    def __post_init__(self) -> None:
        object.__setattr__(self, "convention", Convention(self.convention))
        if self.p < 0 or self.q < 0:
            raise ValueError(f"Signature must be non-negative, got ({self.p}, {self.q})")
        if self.convention is Convention.CARTAN_BLOCKS and self.p < self.q:
            raise ValueError(f"Cartan block form needs p >= q, got ({self.p}, {self.q})")
        if self.convention is Convention.LAST_PAIR_HYPERBOLIC and (self.p < 1 or self.q < 1):
            raise ValueError(f"Hyperbolic last pair needs p, q >= 1, got ({self.p}, {self.q})")
        if self.convention is Convention.ANTIDIAGONAL and self.p - self.q not in (0, 1):
            raise ValueError(f"Antidiagonal form needs p - q in (0, 1), got ({self.p}, {self.q})")

    @property
    def dim(self) -> int:
        return self.p + self.q

    @cached_property
    def matrix(self) -> np.ndarray:
        m = _build_matrix(self.p, self.q, self.convention)
        m.setflags(write=False)
        return m

    def inner(self, u: np.ndarray, v: np.ndarray) -> float:
        return float(np.asarray(u) @ self.matrix @ np.asarray(v))

    def quadratic(self, v: np.ndarray) -> float:
        return self.inner(v, v)

    def with_convention(self, convention: Convention | str) -> FormSpec:
        return FormSpec(self.p, self.q, Convention(convention))


def _build_matrix(p: int, q: int, convention: Convention) -> np.ndarray:
    n = p + q
    if convention is Convention.DIAGONAL:
        return np.diag([1.0] * p + [-1.0] * q) if n else np.zeros((0, 0))
    if convention is Convention.CARTAN_BLOCKS:
        m = np.zeros((n, n))
        m[: p - q, : p - q] = np.eye(p - q)
        for k in range(q):
            i = p - q + 2 * k
            m[i : i + 2, i : i + 2] = _HYPERBOLIC_PAIR
        return m
    if convention is Convention.LAST_PAIR_HYPERBOLIC:
        m = np.zeros((n, n))
        m[: n - 2, : n - 2] = np.diag([1.0] * (p - 1) + [-1.0] * (q - 1))
        m[n - 2 :, n - 2 :] = _HYPERBOLIC_PAIR
        return m
    return np.fliplr(np.eye(n))


def form_matrix(spec: FormSpec) -> np.ndarray:
    return np.array(spec.matrix)


# Ambient forms used throughout the package.
MINKOWSKI_21 = FormSpec(2, 1, Convention.DIAGONAL)
EIN_21 = FormSpec(3, 2, Convention.LAST_PAIR_HYPERBOLIC)
W0_FORM = FormSpec(3, 2, Convention.ANTIDIAGONAL)


class CausalTag(StrEnum):
    TIMELIKE = "timelike"
    LIGHTLIKE = "lightlike"
    SPACELIKE = "spacelike"
    ZERO = "zero"


@dataclass(frozen=True)
class CausalClass:
    tag: CausalTag
    causal: bool


def classify_vector(v: object, spec: FormSpec, eps: float = DEFAULT_EPS) -> CausalClass:
    vec = np.asarray(v, dtype=float)
    if vec.shape != (spec.dim,):
        raise DimensionError(f"vector of shape {vec.shape} does not live in R^{spec.p},{spec.q}")
    if not np.any(vec):
        return CausalClass(CausalTag.ZERO, causal=False)
    value = spec.quadratic(vec)
    scale = eps * float(vec @ vec)
    if abs(value) <= scale:
        tag = CausalTag.LIGHTLIKE
    elif value < 0:
        tag = CausalTag.TIMELIKE
    else:
        tag = CausalTag.SPACELIKE
    return CausalClass(tag, causal=value <= scale)


@dataclass(eq=False)
class Subspace:
    """A linear subspace given by a basis of column vectors."""

    basis: np.ndarray
    form: FormSpec
    eps: float = field(default=DEFAULT_EPS, repr=False)

    def __post_init__(self) -> None:
        self.basis = as_columns(self.basis)
        if self.basis.shape[0] != self.form.dim:
            raise DimensionError(
                f"basis vectors have length {self.basis.shape[0]}, form has dim {self.form.dim}"
            )
        if rank(self.basis, self.eps) != self.basis.shape[1]:
            raise DegenerateError("rank-deficient basis")

    @property
    def dim(self) -> int:
        return int(self.basis.shape[1])

    @property
    def gram(self) -> np.ndarray:
        return self.basis.T @ self.form.matrix @ self.basis

    def contains(self, v: np.ndarray, tol: float = 1e-7) -> bool:
        if self.dim == 0:
            return not np.any(np.abs(v) > tol)
        coeffs, *_ = np.linalg.lstsq(self.basis, v, rcond=None)
        return bool(np.linalg.norm(self.basis @ coeffs - v) <= tol * max(1.0, np.linalg.norm(v)))


def signature(s: Subspace, eps: float = DEFAULT_EPS) -> tuple[int, int, int]:
    if s.dim == 0:
        return (0, 0, 0)
    q = orth(s.basis, eps)
    if q.shape[1] != s.dim:
        raise DegenerateError("rank-deficient basis")
    w = np.linalg.eigvalsh(q.T @ s.form.matrix @ q)
    tol = eps * max(1.0, float(np.max(np.abs(s.form.matrix))))
    pos = int(np.sum(w > tol))
    neg = int(np.sum(w < -tol))
    return (pos, neg, s.dim - pos - neg)


def orth_complement(s: Subspace, eps: float = DEFAULT_EPS) -> Subspace:
    if s.dim == 0:
        return Subspace(np.eye(s.form.dim), s.form, eps)
    return Subspace(null_space(s.basis.T @ s.form.matrix, eps), s.form, eps)


def _normal_frame(spec: FormSpec) -> np.ndarray:
    # N^T B N = diag(Id_p, -Id_q)
    w, q = np.linalg.eigh(spec.matrix)
    order = np.argsort(-np.sign(w), kind="stable")
    return q[:, order] @ np.diag(1.0 / np.sqrt(np.abs(w[order])))


def intertwiner(source: FormSpec, target: FormSpec) -> np.ndarray:
    """Matrix T with T^T B_target T = B_source, i.e. T is an isometry source -> target."""
    if (source.p, source.q) != (target.p, target.q):
        raise DimensionError(
            f"cannot intertwine R^{source.p},{source.q} with R^{target.p},{target.q}"
        )
    if source.dim == 0:
        return np.zeros((0, 0))
    return _normal_frame(target) @ np.linalg.inv(_normal_frame(source))
