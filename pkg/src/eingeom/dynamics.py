"""Dynamics of divergent sequences in Sp(4,R) and SO(3,2).

Sequences are described by their KAK exponents. In Sp(4,R) the Cartan
subgroup is A(α1, α2) = diag(e^α1, e^-α1, e^α2, e^-α2) with α2 >= α1 >= 0; in
SO(3,2), written in the antidiagonal form, it is
A'(a1, a2) = diag(e^a1, e^a2, 1, e^-a2, e^-a1) with a1 >= a2 >= 0. The two
are related by a1 = α1 + α2 and a2 = α2 - α1.
"""

from __future__ import annotations

import logging
from collections.abc import Iterator, Sequence
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from enum import StrEnum
from itertools import product

import numpy as np
import pandas as pd
from scipy import linalg as sla

from eingeom.config import (
    DEFAULT_LIMIT_TOL,
    DEFAULT_POWER_DEPTH,
    DEFAULT_SLOPE_THRESHOLD,
    DEFAULT_WORD_LENGTH,
    DEFAULT_WORKERS,
)
from eingeom.einstein import ConformalTransform, EinPoint, IsotropicFlag, Photon
from eingeom.errors import (
    DistortionClassError,
    NoEscapeError,
    NonConvergentError,
    NotInGroupError,
)
from eingeom.forms import W0_FORM, FormSpec, intertwiner
from eingeom.linalg import compound2, distance_to_span, null_space, orth, pair_indices
from eingeom.sympl4 import (
    J,
    Lagrangian,
    is_symplectic,
    lagrangian_to_point,
    line_to_photon,
    polarity,
    sp_to_so_group,
)

logger = logging.getLogger(__name__)

B5 = np.array(W0_FORM.matrix)


class GroupKind(StrEnum):
    SP4 = "sp4"
    SO32 = "so32"


def cartan_a(alpha1: float, alpha2: float) -> np.ndarray:
    return np.diag(np.exp([alpha1, -alpha1, alpha2, -alpha2]))


def cartan_a_prime(a1: float, a2: float) -> np.ndarray:
    return np.diag(np.exp([a1, a2, 0.0, -a2, -a1]))


def exponents_sp_to_so(alpha1: float, alpha2: float) -> tuple[float, float]:
    return alpha1 + alpha2, alpha2 - alpha1


def exponents_so_to_sp(a1: float, a2: float) -> tuple[float, float]:
    return (a1 - a2) / 2.0, (a1 + a2) / 2.0


# ---------------------------------------------------------------------------
# KAK decomposition


@dataclass(frozen=True, eq=False)
class KAKDecomp:
    """g = k @ a @ k_prime with k, k_prime in the maximal compact subgroup.

    Attributes:
        k: Left compact factor
        a: Diagonal Cartan factor
        k_prime: Right compact factor
        exponents: (α1, α2) for Sp(4,R) or (a1, a2) for SO(3,2)
        group: Which group the decomposition lives in
    """

    k: np.ndarray
    a: np.ndarray
    k_prime: np.ndarray
    exponents: tuple[float, float]
    group: GroupKind

    def reconstruct(self) -> np.ndarray:
        return self.k @ self.a @ self.k_prime


# orthonormal frame adapted to the ±1 eigenspaces of the antidiagonal form
_S = 1.0 / np.sqrt(2.0)
_SPLIT = np.array(
    [
        [_S, 0.0, 0.0, _S, 0.0],
        [0.0, _S, 0.0, 0.0, _S],
        [0.0, 0.0, 1.0, 0.0, 0.0],
        [0.0, _S, 0.0, 0.0, -_S],
        [_S, 0.0, 0.0, -_S, 0.0],
    ]
)


def _sym_log(p: np.ndarray) -> np.ndarray:
    w, v = np.linalg.eigh((p + p.T) / 2.0)
    return v @ np.diag(np.log(w)) @ v.T


def _kak_sp(g: np.ndarray) -> KAKDecomp:
    u, p = sla.polar(g)
    w, v = np.linalg.eigh((p + p.T) / 2.0)
    top = v[:, -1]
    rest = null_space(np.column_stack([top, J @ top]).T)
    w2, v2 = np.linalg.eigh(rest.T @ p @ rest)
    second = rest @ v2[:, -1]
    frame = np.column_stack([second, J @ second, top, J @ top])
    alpha2 = float(np.log(w[-1]))
    alpha1 = max(float(np.log(w2[-1])), 0.0)
    a = frame.T @ p @ frame
    return KAKDecomp(u @ frame, np.diag(np.diag(a)), frame.T, (alpha1, alpha2), GroupKind.SP4)


def _kak_so(g: np.ndarray) -> KAKDecomp:
    u, p = sla.polar(g)
    x = _SPLIT.T @ _sym_log(p) @ _SPLIT
    left, sigma, right_t = np.linalg.svd(x[:3, 3:])
    right = right_t.T
    cols = [
        np.concatenate([left[:, 0], right[:, 0]]) * _S,
        np.concatenate([left[:, 1], right[:, 1]]) * _S,
        np.concatenate([left[:, 2], np.zeros(2)]),
    ]
    frame = _SPLIT @ np.column_stack(cols)
    frame = np.column_stack([frame, B5 @ frame[:, 1], B5 @ frame[:, 0]])
    a1, a2 = float(sigma[0]), float(sigma[1])
    return KAKDecomp(u @ frame, cartan_a_prime(a1, a2), frame.T, (a1, a2), GroupKind.SO32)


def _as_w0(g: ConformalTransform) -> np.ndarray:
    if (g.form.p, g.form.q) != (3, 2):
        raise NotInGroupError(f"expected a transform of R^3,2, got {g.form!r}")
    if g.form == W0_FORM:
        return np.array(g.matrix)
    t = intertwiner(g.form, W0_FORM)
    return t @ g.matrix @ np.linalg.inv(t)


def kak(g: object, which: GroupKind | str = GroupKind.SP4) -> KAKDecomp:
    kind = GroupKind(which)
    if kind is GroupKind.SO32:
        if isinstance(g, ConformalTransform):
            return _kak_so(_as_w0(g))
        return _kak_so(ConformalTransform(np.asarray(g, dtype=float), W0_FORM).matrix)
    mat = np.asarray(g, dtype=float)
    if mat.shape != (4, 4) or not is_symplectic(mat):
        raise NotInGroupError("matrix is not symplectic")
    return _kak_sp(mat)


# ---------------------------------------------------------------------------
# Distortion


class Distortion(StrEnum):
    NONE = "none"
    BOUNDED = "bounded"
    BALANCED = "balanced"
    MIXED = "mixed"


@dataclass(frozen=True)
class ExponentRecord:
    alpha1: float
    alpha2: float
    a1: float
    a2: float


@dataclass(frozen=True)
class DistortionReport:
    distortion: Distortion
    trace: tuple[ExponentRecord, ...]

    @property
    def last(self) -> ExponentRecord:
        return self.trace[-1]


def _as_operator(g: np.ndarray | ConformalTransform) -> tuple[np.ndarray, GroupKind]:
    # matrices in a basis where the maximal compact subgroup is orthogonal
    if isinstance(g, ConformalTransform):
        return _as_w0(g), GroupKind.SO32
    mat = np.asarray(g, dtype=float)
    if mat.shape != (4, 4):
        raise NotInGroupError(f"expected a 4x4 symplectic matrix, got shape {mat.shape}")
    return mat, GroupKind.SP4


def _record(kind: GroupKind, top: float, top_pair: float) -> ExponentRecord:
    # top = log sigma_1, top_pair = log sigma_1 sigma_2
    first, second = top_pair - top, top
    if kind is GroupKind.SP4:
        alpha1, alpha2 = max(first, 0.0), second
        a1, a2 = exponents_sp_to_so(alpha1, alpha2)
    else:
        a1, a2 = second, max(first, 0.0)
        alpha1, alpha2 = exponents_so_to_sp(a1, a2)
    return ExponentRecord(alpha1, alpha2, a1, a2)


def _log_norms(m: np.ndarray, log_scale: float = 0.0) -> tuple[float, float]:
    s = float(np.linalg.norm(m, 2))
    unit = m / s
    top = log_scale + float(np.log(s))
    return top, 2.0 * top + float(np.log(np.linalg.norm(compound2(unit), 2)))


def exponents(g: np.ndarray | ConformalTransform) -> ExponentRecord:
    """KAK exponents read off the top singular values of g and of its second compound."""
    m, kind = _as_operator(g)
    return _record(kind, *_log_norms(m))


def _scaled_powers(m: np.ndarray, depth: int) -> Iterator[tuple[np.ndarray, float]]:
    """Yield (g^n / ||g^n||, log ||g^n||) for n = 1, ..., depth."""
    acc = np.eye(m.shape[0])
    log_scale = 0.0
    for _ in range(depth):
        acc = acc @ m
        s = float(np.linalg.norm(acc, 2))
        acc = acc / s
        log_scale += float(np.log(s))
        yield acc, log_scale


def _unit_power(m: np.ndarray, depth: int) -> np.ndarray:
    unit = m
    for unit, _ in _scaled_powers(m, depth):
        pass
    return unit


def normalized_power(g: np.ndarray | ConformalTransform, depth: int) -> np.ndarray:
    m, _ = _as_operator(g)
    return _unit_power(m, depth)


def powers(
    g: np.ndarray | ConformalTransform, depth: int = DEFAULT_POWER_DEPTH
) -> list[np.ndarray | ConformalTransform]:
    """g, g^2, ..., g^depth as an explicit sequence."""
    if isinstance(g, ConformalTransform):
        return [g.power(k) for k in range(1, depth + 1)]
    mat = np.asarray(g, dtype=float)
    return [np.linalg.matrix_power(mat, k) for k in range(1, depth + 1)]


def _tail_slope(values: Sequence[float]) -> float:
    n = len(values)
    start = n // 2
    xs = np.arange(start, n, dtype=float)
    ys = np.asarray(values[start:], dtype=float)
    if xs.size < 2:
        return 0.0
    return float(np.polyfit(xs, ys, 1)[0])


def classify_trace(
    trace: Sequence[ExponentRecord], slope_threshold: float = DEFAULT_SLOPE_THRESHOLD
) -> Distortion:
    if len(trace) < 4:
        logger.warning("Boundedness fit on only %d exponent samples", len(trace))

    def bounded(values: list[float]) -> bool:
        return _tail_slope(values) < slope_threshold

    if bounded([r.alpha2 for r in trace]):
        return Distortion.NONE
    if bounded([r.alpha2 - r.alpha1 for r in trace]):
        return Distortion.BOUNDED
    if bounded([r.alpha1 for r in trace]):
        return Distortion.BALANCED
    return Distortion.MIXED


def classify_distortion(
    seq: Sequence[np.ndarray | ConformalTransform],
    slope_threshold: float = DEFAULT_SLOPE_THRESHOLD,
) -> DistortionReport:
    """Distortion class of an explicit sequence of Sp(4,R) matrices or SO(3,2) transforms."""
    if not seq:
        raise ValueError("cannot classify an empty sequence")
    trace = tuple(exponents(g) for g in seq)
    verdict = classify_trace(trace, slope_threshold)
    logger.debug("Classified sequence of %d elements as %s", len(trace), verdict)
    return DistortionReport(verdict, trace)


def classify_powers(
    g: np.ndarray | ConformalTransform,
    depth: int = DEFAULT_POWER_DEPTH,
    slope_threshold: float = DEFAULT_SLOPE_THRESHOLD,
) -> DistortionReport:
    """Distortion class of the cyclic sequence g, g^2, ..., g^depth."""
    m, kind = _as_operator(g)
    if kind is GroupKind.SP4 and not is_symplectic(m):
        raise NotInGroupError("matrix is not symplectic")
    trace = tuple(
        _record(kind, *_log_norms(unit, scale)) for unit, scale in _scaled_powers(m, depth)
    )
    return DistortionReport(classify_trace(trace, slope_threshold), trace)


# ---------------------------------------------------------------------------
# Singular limits


@dataclass(frozen=True, eq=False)
class SingularLimit:
    """Limit of g_n / ||g_n|| with its kernel and image as column bases."""

    limit: np.ndarray
    kernel: np.ndarray
    image: np.ndarray

    @property
    def rank(self) -> int:
        return int(self.image.shape[1])


def singular_limit(
    seq: Sequence[np.ndarray | ConformalTransform],
    limit_tol: float = DEFAULT_LIMIT_TOL,
    slope_threshold: float = DEFAULT_SLOPE_THRESHOLD,
) -> SingularLimit:
    if not seq:
        raise ValueError("cannot take the limit of an empty sequence")
    mats = [_as_operator(g)[0] for g in seq]
    log_norms = [float(np.log(np.linalg.norm(m, 2))) for m in mats]
    if _tail_slope(log_norms) < slope_threshold:
        raise NoEscapeError("sequence stays in a compact set")
    normalized = [m / np.linalg.norm(m, 2) for m in mats]
    last = normalized[-1]
    tail = normalized[-max(2, len(normalized) // 4) :]
    drift = max(min(np.linalg.norm(m - last), np.linalg.norm(m + last)) for m in tail)
    if drift > limit_tol:
        raise NonConvergentError(f"normalized tail drifts by {drift:.3g}")
    return SingularLimit(last, null_space(last, limit_tol), orth(last, limit_tol))


@dataclass(frozen=True, eq=False)
class TopSubspaces:
    """Leading singular line and plane on both sides of a matrix."""

    left_line: np.ndarray
    left_plane: np.ndarray
    right_line: np.ndarray
    right_plane: np.ndarray


def _plane_of(c: np.ndarray, n: int) -> np.ndarray:
    # column space of the skew matrix of a decomposable bivector
    w = np.zeros((n, n))
    for k, (i, j) in enumerate(pair_indices(n)):
        w[i, j], w[j, i] = c[k], -c[k]
    return orth(w, 1e-6)[:, :2]


def top_subspaces(m: np.ndarray) -> TopSubspaces:
    """Top singular data of m; the planes come from the second compound so that they stay
    accurate when sigma_2 / sigma_1 is below machine precision."""
    n = m.shape[0]
    unit = m / np.linalg.norm(m, 2)
    u, _, vt = np.linalg.svd(unit)
    c = compound2(unit)
    cu, _, cvt = np.linalg.svd(c / np.linalg.norm(c, 2))
    return TopSubspaces(u[:, 0], _plane_of(cu[:, 0], n), vt[0], _plane_of(cvt[0], n))


# ---------------------------------------------------------------------------
# Limit sets in Ein^{2,1}


class LimitKind(StrEnum):
    PHOTONS = "photons"
    POINT_LIGHTCONE = "point_lightcone"


@dataclass(frozen=True, eq=False)
class EinLimitSets:
    """Source and target of the limit dynamics of g^n on Ein^{2,1}.

    For LimitKind.PHOTONS both are photons. For LimitKind.POINT_LIGHTCONE the
    source is the vertex of the removed lightcone and the target is a point;
    mixed sequences additionally carry the photons of the refined dynamics,
    through which points of the removed lightcone accumulate.
    """

    kind: LimitKind
    source: Photon | EinPoint
    target: Photon | EinPoint
    distortion: Distortion
    form: FormSpec
    source_photon: Photon | None = None
    target_photon: Photon | None = None

    def attraction_distance(self, x: np.ndarray) -> float:
        if self.target_photon is not None:
            return distance_to_span(x, self.target_photon.basis)
        basis = self.target.basis if isinstance(self.target, Photon) else self.target.rep
        return distance_to_span(x, basis)


def _w0_frame(g: ConformalTransform) -> tuple[np.ndarray, np.ndarray]:
    # back maps W0 coordinates into the coordinates of g.form
    if g.form == W0_FORM:
        return np.array(g.matrix), np.eye(5)
    t = intertwiner(g.form, W0_FORM)
    return t @ g.matrix @ np.linalg.inv(t), np.linalg.inv(t)


def limit_sets_ein(
    g: ConformalTransform,
    depth: int = DEFAULT_POWER_DEPTH,
    slope_threshold: float = DEFAULT_SLOPE_THRESHOLD,
    limit_tol: float = DEFAULT_LIMIT_TOL,
) -> EinLimitSets:
    report = classify_powers(g, depth, slope_threshold)
    verdict = report.distortion
    if verdict is Distortion.NONE:
        raise DistortionClassError("powers of the transform do not escape")
    m, back = _w0_frame(g)
    top = top_subspaces(normalized_power(ConformalTransform(m, W0_FORM), depth))
    # the top line is null unless the exponents are balanced; the top plane is
    # isotropic unless they are bounded
    if verdict is not Distortion.BOUNDED:
        target_ph = Photon(back @ top.left_plane, g.form, limit_tol)
        source_ph = Photon(back @ (B5 @ top.right_plane), g.form, limit_tol)
        if verdict is Distortion.BALANCED:
            return EinLimitSets(LimitKind.PHOTONS, source_ph, target_ph, verdict, g.form)
    target = EinPoint(back @ top.left_line, g.form, limit_tol)
    source = EinPoint(back @ (B5 @ top.right_line), g.form, limit_tol)
    if verdict is Distortion.BOUNDED:
        return EinLimitSets(LimitKind.POINT_LIGHTCONE, source, target, verdict, g.form)
    return EinLimitSets(
        LimitKind.POINT_LIGHTCONE, source, target, verdict, g.form, source_ph, target_ph
    )


# ---------------------------------------------------------------------------
# Limits on the flag manifold


@dataclass(frozen=True, eq=False)
class FlagLimits:
    """Limit flag, removed set and attractor of a mixed sequence in Sp(4,R).

    Attributes:
        q_plus: Limit isotropic flag (point of the Lagrangian, photon of the line)
        removed_contact_line: Lagrangian plane whose projectivization is α-
        removed_photon: Photon β- of Lagrangians containing the repelling line
        attractor_contact_line: Lagrangian plane α+
        attractor_photon: Photon β+
        repelling_line: Line v; flags whose line is off P(v^{perp omega}) are attracted
        repelling_point: Point z; flags whose Lagrangian is off L(z) are attracted
    """

    q_plus: IsotropicFlag
    removed_contact_line: np.ndarray
    removed_photon: Photon
    attractor_contact_line: np.ndarray
    attractor_photon: Photon
    repelling_line: np.ndarray
    repelling_point: EinPoint

    def in_basin(self, line: np.ndarray, lagrangian: Lagrangian, delta: float = 1e-6) -> bool:
        if distance_to_span(line, polarity(self.repelling_line)) <= delta:
            return False
        p = lagrangian_to_point(lagrangian)
        return abs(W0_FORM.inner(p.rep, self.repelling_point.rep)) > delta


def flag_limits(
    g: np.ndarray,
    depth: int = DEFAULT_POWER_DEPTH,
    slope_threshold: float = DEFAULT_SLOPE_THRESHOLD,
    limit_tol: float = DEFAULT_LIMIT_TOL,
) -> FlagLimits:
    mat = np.asarray(g, dtype=float)
    report = classify_powers(mat, depth, slope_threshold)
    if report.distortion is not Distortion.MIXED:
        raise DistortionClassError(f"flag limits need mixed distortion, got {report.distortion}")
    top = top_subspaces(normalized_power(mat, depth))
    alpha_minus = J @ top.right_plane
    v = J @ top.right_line
    q_plus = IsotropicFlag(
        lagrangian_to_point(Lagrangian(top.left_plane, limit_tol)),
        line_to_photon(top.left_line),
    )
    return FlagLimits(
        q_plus=q_plus,
        removed_contact_line=alpha_minus,
        removed_photon=line_to_photon(v),
        attractor_contact_line=top.left_plane,
        attractor_photon=line_to_photon(top.left_line),
        repelling_line=v / np.linalg.norm(v),
        repelling_point=lagrangian_to_point(Lagrangian(alpha_minus, limit_tol)),
    )


# ---------------------------------------------------------------------------
# Words and the approximate properness domain

Word = tuple[int, ...]


def inverse_letter(letter: int) -> int:
    return -letter - 1


def word_label(word: Word) -> str:
    if not word:
        return "e"
    return " ".join(f"g{x}" if x >= 0 else f"g{inverse_letter(x)}^-1" for x in word)


def reduced_words(n: int, max_length: int, involutive: bool = False) -> Iterator[Word]:
    """Nonempty freely reduced words in shortlex order (letters 0, ~0, 1, ~1, ...)."""
    if involutive:
        letters = list(range(n))
    else:
        letters = [x for k in range(n) for x in (k, inverse_letter(k))]
    for length in range(1, max_length + 1):
        for word in product(letters, repeat=length):
            if any(
                (b == a) if involutive else (b == inverse_letter(a))
                for a, b in zip(word, word[1:], strict=False)
            ):
                continue
            yield word


def word_matrix(
    generators: Sequence[np.ndarray], word: Word, inverses: Sequence[np.ndarray] | None = None
) -> np.ndarray:
    invs = inverses if inverses is not None else [np.linalg.inv(g) for g in generators]
    out = np.eye(generators[0].shape[0])
    for x in word:
        out = out @ (generators[x] if x >= 0 else invs[inverse_letter(x)])
    return out


class DomainSpace(StrEnum):
    EIN = "ein"
    PROJ_V = "projv"
    PROJ_R32_MINUS_EIN = "projr32"


class RemovedKind(StrEnum):
    PHOTON = "photon"
    LIGHTCONE = "lightcone"
    CONTACT_LINE = "contact_line"
    HYPERPLANE = "hyperplane"
    SUBSPACE = "subspace"


@dataclass(frozen=True, eq=False)
class RemovedObject:
    """A projective subspace P(basis) removed from the domain, or the lightcone of a vertex.

    Lightcones are stored through their linear span vertex^perp, so that
    ``distance`` is the projective distance to the removed set in every case.
    """

    kind: RemovedKind
    word: Word
    basis: np.ndarray
    distortion: Distortion

    def distance(self, x: np.ndarray) -> float:
        return distance_to_span(np.asarray(x, dtype=float), self.basis)


@dataclass(frozen=True)
class WordRecord:
    word: Word
    distortion: Distortion
    exponents: ExponentRecord
    removed: tuple[RemovedObject, ...] = field(default=())


@dataclass(frozen=True, eq=False)
class ProperDomain:
    """Approximation of the domain of proper discontinuity from words up to a length."""

    space: DomainSpace
    word_length: int
    records: tuple[WordRecord, ...]

    @property
    def removed(self) -> list[RemovedObject]:
        return [obj for rec in self.records for obj in rec.removed]

    @property
    def first_kind(self) -> bool:
        """No word up to the examined length has bounded distortion. Evidence, not proof."""
        return all(rec.distortion is not Distortion.BOUNDED for rec in self.records)

    def contains(self, x: np.ndarray, delta: float = 1e-6) -> bool:
        return all(obj.distance(x) > delta for obj in self.removed)

    def table(self) -> pd.DataFrame:
        rows = [
            {
                "word": word_label(rec.word),
                "distortion": str(rec.distortion),
                "alpha1": rec.exponents.alpha1,
                "alpha2": rec.exponents.alpha2,
                "a1": rec.exponents.a1,
                "a2": rec.exponents.a2,
                "removed": ",".join(str(o.kind) for o in rec.removed),
            }
            for rec in self.records
        ]
        columns = ["word", "distortion", "alpha1", "alpha2", "a1", "a2", "removed"]
        return pd.DataFrame(rows, columns=columns)


def _removed_ein(
    word: Word, m: np.ndarray, back: np.ndarray, verdict: Distortion, depth: int
) -> list[RemovedObject]:
    out = []
    for g in (m, np.linalg.inv(m)):
        top = top_subspaces(_unit_power(g, depth))
        if verdict is Distortion.BOUNDED:
            vertex = B5 @ top.right_line
            basis = back @ null_space((vertex @ B5).reshape(1, 5))
            out.append(RemovedObject(RemovedKind.LIGHTCONE, word, basis, verdict))
        else:
            basis = back @ (B5 @ top.right_plane)
            out.append(RemovedObject(RemovedKind.PHOTON, word, basis, verdict))
    return out


def _removed_projv(
    word: Word, m: np.ndarray, verdict: Distortion, depth: int
) -> list[RemovedObject]:
    out = []
    for g in (m, np.linalg.inv(m)):
        top = top_subspaces(_unit_power(g, depth))
        if verdict is Distortion.BALANCED:
            hyperplane = null_space(top.right_line.reshape(1, 4))
            out.append(RemovedObject(RemovedKind.HYPERPLANE, word, hyperplane, verdict))
        else:
            plane = J @ top.right_plane
            out.append(RemovedObject(RemovedKind.CONTACT_LINE, word, plane, verdict))
    return out


def _removed_projr32(
    word: Word, m: np.ndarray, back: np.ndarray, verdict: Distortion, depth: int, tol: float
) -> list[RemovedObject]:
    out = []
    for g in (m, np.linalg.inv(m)):
        kernel = null_space(_unit_power(g, depth), tol)
        if kernel.shape[1]:
            out.append(RemovedObject(RemovedKind.SUBSPACE, word, back @ kernel, verdict))
    return out


def properness_domain(
    generators: Sequence[ConformalTransform | np.ndarray],
    word_length: int = DEFAULT_WORD_LENGTH,
    space: DomainSpace | str = DomainSpace.EIN,
    involutive: bool = False,
    depth: int = DEFAULT_POWER_DEPTH,
    slope_threshold: float = DEFAULT_SLOPE_THRESHOLD,
    limit_tol: float = DEFAULT_LIMIT_TOL,
    workers: int = DEFAULT_WORKERS,
) -> ProperDomain:
    """Enumerate reduced words and collect the sets their cyclic sequences remove.

    Args:
        generators: Transforms of R^{3,2}, or 4x4 symplectic matrices
        word_length: Maximal reduced word length L
        space: Where the domain lives
        involutive: Generators are involutions, so inverse letters are omitted
        depth: Number of powers used to classify each word
        slope_threshold: Boundedness threshold for exponent regression
        limit_tol: Rank tolerance for the projectivized kernels
        workers: Thread count; 1 evaluates words in the calling thread

    Returns:
        The removed objects per word, in shortlex order of words.
    """
    if not generators:
        raise ValueError("properness_domain needs at least one generator")
    if word_length < 1:
        raise ValueError(f"word_length must be positive, got {word_length!r}")
    kind = DomainSpace(space)
    if kind is DomainSpace.PROJ_V:
        mats = [np.asarray(g, dtype=float) for g in generators]
        if any(m.shape != (4, 4) or not is_symplectic(m) for m in mats):
            raise NotInGroupError("ProjV domains need symplectic generators")
        back = np.eye(4)
    else:
        transforms = [
            g if isinstance(g, ConformalTransform) else sp_to_so_group(g) for g in generators
        ]
        form = transforms[0].form
        if any(t.form != form for t in transforms):
            raise ValueError("generators live in different ambient forms")
        frames = [_w0_frame(t) for t in transforms]
        mats = [f[0] for f in frames]
        back = frames[0][1]
    inverses = [np.linalg.inv(m) for m in mats]
    words = list(reduced_words(len(mats), word_length, involutive))
    logger.debug("Examining %d reduced words up to length %d", len(words), word_length)

    def evaluate(word: Word) -> WordRecord:
        m = word_matrix(mats, word, inverses)
        if kind is DomainSpace.PROJ_V:
            report = classify_powers(m, depth, slope_threshold)
        else:
            report = classify_powers(ConformalTransform(m, W0_FORM), depth, slope_threshold)
        verdict = report.distortion
        if verdict is Distortion.NONE:
            return WordRecord(word, verdict, report.last)
        if kind is DomainSpace.EIN:
            removed = _removed_ein(word, m, back, verdict, depth)
        elif kind is DomainSpace.PROJ_V:
            removed = _removed_projv(word, m, verdict, depth)
        else:
            removed = _removed_projr32(word, m, back, verdict, depth, limit_tol)
        return WordRecord(word, verdict, report.last, tuple(removed))

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as executor:
            records = list(executor.map(evaluate, words))
    else:
        records = [evaluate(w) for w in words]
    domain = ProperDomain(kind, word_length, tuple(records))
    logger.debug(
        "Removed %d objects, first kind evidence: %s", len(domain.removed), domain.first_kind
    )
    return domain
