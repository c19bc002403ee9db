"""Small numerical kernels shared by the geometry modules."""

from __future__ import annotations

from itertools import combinations

import numpy as np
from scipy import linalg as sla

from eingeom.config import DEFAULT_EPS


def as_vector(v: object) -> np.ndarray:
    arr = np.asarray(v, dtype=float)
    if arr.ndim != 1:
        raise ValueError(f"expected a vector, got shape {arr.shape}")
    return arr


def as_columns(vectors: object) -> np.ndarray:
    """Stack a list of vectors (or a matrix of columns) into a 2-D column matrix."""
    arr = np.asarray(vectors, dtype=float)
    if arr.ndim == 1:
        return arr.reshape(-1, 1)
    return arr


def normalize_projective(v: np.ndarray, tol: float = DEFAULT_EPS) -> np.ndarray:
    """Unit Euclidean norm with the first non-negligible coordinate positive."""
    norm = float(np.linalg.norm(v))
    if norm == 0.0:
        raise ValueError("cannot normalize the zero vector")
    u = v / norm
    for c in u:
        if abs(c) > max(tol, 1e-12):
            return u if c > 0 else -u
    return u


def projective_distance(u: np.ndarray, v: np.ndarray) -> float:
    """Sine of the angle between the lines spanned by u and v."""
    a = u / np.linalg.norm(u)
    b = v / np.linalg.norm(v)
    return float(np.linalg.norm(b - (a @ b) * a))


def rank(m: np.ndarray, tol: float = DEFAULT_EPS) -> int:
    if m.size == 0:
        return 0
    s = np.linalg.svd(m, compute_uv=False)
    if s.size == 0 or s[0] == 0.0:
        return 0
    return int(np.sum(s > tol * max(1.0, s[0])))


def null_space(m: np.ndarray, tol: float = DEFAULT_EPS) -> np.ndarray:
    return sla.null_space(np.atleast_2d(m), rcond=tol)


def orth(m: np.ndarray, tol: float = DEFAULT_EPS) -> np.ndarray:
    return sla.orth(as_columns(m), rcond=tol)


def projector(basis: np.ndarray) -> np.ndarray:
    q = orth(basis)
    return q @ q.T


def distance_to_span(x: np.ndarray, basis: np.ndarray) -> float:
    """Projective distance from the line of x to the linear span of ``basis``."""
    u = x / np.linalg.norm(x)
    return float(np.linalg.norm(u - projector(basis) @ u))


def same_span(a: np.ndarray, b: np.ndarray, tol: float = 1e-7) -> bool:
    a, b = as_columns(a), as_columns(b)
    if a.shape[0] != b.shape[0]:
        return False
    pa, pb = projector(a), projector(b)
    return bool(np.allclose(pa, pb, atol=tol))


def intersect_spans(a: np.ndarray, b: np.ndarray, tol: float = DEFAULT_EPS) -> np.ndarray:
    a, b = orth(a, tol), orth(b, tol)
    coeffs = null_space(np.hstack([a, -b]), tol)
    if coeffs.shape[1] == 0:
        return np.zeros((a.shape[0], 0))
    return orth(a @ coeffs[: a.shape[1]], tol)


def rref(m: np.ndarray, tol: float = DEFAULT_EPS) -> np.ndarray:
    """Reduced row echelon form with partial pivoting."""
    r = np.array(m, dtype=float)
    rows, cols = r.shape
    lead = 0
    for c in range(cols):
        if lead >= rows:
            break
        pivot = lead + int(np.argmax(np.abs(r[lead:, c])))
        if abs(r[pivot, c]) <= tol:
            r[lead:, c] = 0.0
            continue
        r[[lead, pivot]] = r[[pivot, lead]]
        r[lead] = r[lead] / r[lead, c]
        for i in range(rows):
            if i != lead:
                r[i] = r[i] - r[i, c] * r[lead]
        lead += 1
    return r


def pair_indices(n: int) -> list[tuple[int, int]]:
    return list(combinations(range(n), 2))


def compound2(g: np.ndarray) -> np.ndarray:
    """Second compound matrix: the action of g on Λ² in lexicographic pair order."""
    pairs = pair_indices(g.shape[0])
    out = np.empty((len(pairs), len(pairs)))
    for row, (i, j) in enumerate(pairs):
        for col, (k, l) in enumerate(pairs):
            out[row, col] = g[i, k] * g[j, l] - g[i, l] * g[j, k]
    return out

