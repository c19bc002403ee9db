"""Tabular reports for the command line, one pandas DataFrame per command."""

from __future__ import annotations

from collections.abc import Sequence

import numpy as np
import pandas as pd

from eingeom.config import DEFAULT_EPS
from eingeom.crooked import CrookedPlane, CrookedSurface, DisjointnessCertificate, FaceLabel
from eingeom.dynamics import DistortionReport, EinLimitSets, KAKDecomp, ProperDomain, word_label
from eingeom.einstein import ConformalTransform, EinPoint, Photon, chart_inverse
from eingeom.errors import IdealPointError
from eingeom.forms import FormSpec, classify_vector
from eingeom.groups import CompositionReport, ProperCertificate, SpacelikeCircle
from eingeom.lie import ROOT_SYSTEM, positive_system


def format_vector(v: np.ndarray) -> str:
    """Space separated coordinates, 17 significant digits, no negative zeros."""
    return " ".join(f"{float(x) + 0.0:.17g}" for x in np.ravel(v))


def _basis(obj: EinPoint | Photon | np.ndarray) -> str:
    if isinstance(obj, EinPoint):
        return format_vector(obj.rep)
    cols = obj.basis if isinstance(obj, Photon) else np.atleast_2d(obj)
    return "; ".join(format_vector(c) for c in cols.T)


def classify_frame(
    vectors: Sequence[np.ndarray], spec: FormSpec, eps: float = DEFAULT_EPS
) -> pd.DataFrame:
    rows = []
    for v in vectors:
        cls = classify_vector(v, spec, eps)
        rows.append(
            {
                "vector": format_vector(v),
                "tag": str(cls.tag),
                "causal": cls.causal,
                "quadratic": spec.quadratic(np.asarray(v, dtype=float)),
            }
        )
    return pd.DataFrame(rows, columns=["vector", "tag", "causal", "quadratic"])


def points_frame(points: Sequence[EinPoint], eps: float = DEFAULT_EPS) -> pd.DataFrame:
    """Representatives with their patch coordinates, or the ideal stratum they lie on."""
    rows = []
    for p in points:
        try:
            patch, stratum = format_vector(chart_inverse(p, eps)), "patch"
        except IdealPointError as exc:
            patch, stratum = "", exc.stratum
        rows.append({"point": format_vector(p.rep), "patch": patch, "stratum": stratum})
    return pd.DataFrame(rows, columns=["point", "patch", "stratum"])


def kak_frame(decomp: KAKDecomp, g: np.ndarray) -> pd.DataFrame:
    error = float(np.linalg.norm(decomp.reconstruct() - g))
    row = {
        "group": str(decomp.group),
        "exponent1": decomp.exponents[0],
        "exponent2": decomp.exponents[1],
        "reconstruction_error": error,
    }
    return pd.DataFrame([row])


def distortion_frame(report: DistortionReport) -> pd.DataFrame:
    rows = [
        {"n": n, "alpha1": r.alpha1, "alpha2": r.alpha2, "a1": r.a1, "a2": r.a2}
        for n, r in enumerate(report.trace, start=1)
    ]
    df = pd.DataFrame(rows, columns=["n", "alpha1", "alpha2", "a1", "a2"])
    df["distortion"] = str(report.distortion)
    return df


def limits_frame(sets: EinLimitSets) -> pd.DataFrame:
    rows = [
        {"role": "source", "kind": str(sets.kind), "basis": _basis(sets.source)},
        {"role": "target", "kind": str(sets.kind), "basis": _basis(sets.target)},
    ]
    if sets.source_photon is not None and sets.target_photon is not None:
        extra = (("source_photon", sets.source_photon), ("target_photon", sets.target_photon))
        for role, photon in extra:
            rows.append({"role": role, "kind": "photon", "basis": _basis(photon)})
    df = pd.DataFrame(rows, columns=["role", "kind", "basis"])
    df["distortion"] = str(sets.distortion)
    return df


def roots_frame(v0: Sequence[float] = (1.0, 2.0)) -> pd.DataFrame:
    system = positive_system(v0)
    rows = [
        {
            "root": f"({r.pair[0]}, {r.pair[1]})",
            "slot": r.slot,
            "long": r.is_long,
            "positive": r in system.positive,
            "simple": r in system.simple,
        }
        for r in sorted(ROOT_SYSTEM)
    ]
    return pd.DataFrame(rows, columns=["root", "slot", "long", "positive", "simple"])


def membership_frame(points: Sequence[np.ndarray], labels: Sequence[FaceLabel]) -> pd.DataFrame:
    rows = [
        {"point": format_vector(x), "label": str(label), "on_surface": label.on_surface}
        for x, label in zip(points, labels, strict=True)
    ]
    return pd.DataFrame(rows, columns=["point", "label", "on_surface"])


def strata_frame(surface: CrookedSurface) -> pd.DataFrame:
    rows = [
        {"stratum": str(label), "dimension": 0, "vector": format_vector(p.rep)}
        for label, p in surface.points.items()
    ]
    rows += [
        {"stratum": str(label), "dimension": 1, "vector": _basis(seg.photon)}
        for label, seg in surface.segments.items()
    ]
    rows += [{"stratum": str(label), "dimension": 2, "vector": ""} for label in surface.faces]
    df = pd.DataFrame(rows, columns=["stratum", "dimension", "vector"])
    df.attrs["euler_characteristic"] = surface.euler_characteristic
    return df


def disjoint_frame(cert: DisjointnessCertificate) -> pd.DataFrame:
    row = {
        "disjoint": cert.disjoint,
        "distance": cert.distance,
        "face1": str(cert.faces[0]),
        "face2": str(cert.faces[1]),
        "witness": format_vector(cert.witness),
        "oracle_distance": cert.oracle_distance,
        "oracle_samples": cert.oracle_samples,
        "agrees": cert.agrees,
    }
    return pd.DataFrame([row])


def certificate_frame(
    cert: ProperCertificate, composition: CompositionReport | None = None
) -> pd.DataFrame:
    row: dict[str, object] = {
        "verdict": cert.verdict,
        "depth": cert.depth,
        "words": cert.words,
        "samples": cert.samples,
        "offending_word": word_label(cert.offending_word) if cert.offending_word else "",
        "offending_point": (
            format_vector(cert.offending_point) if cert.offending_point is not None else ""
        ),
    }
    if composition is not None:
        row["composition"] = str(composition.kind) if composition.kind else "identity"
        row["eigenvalues"] = format_vector(np.real_if_close(composition.eigenvalues).real)
    return pd.DataFrame([row])


def orbit_frame(images: Sequence[object]) -> pd.DataFrame:
    rows = []
    for k, obj in enumerate(images):
        if isinstance(obj, ConformalTransform):
            data = format_vector(obj.matrix)
        elif isinstance(obj, EinPoint | Photon):
            data = _basis(obj)
        elif isinstance(obj, CrookedPlane):
            parts = (format_vector(obj.vertex), format_vector(obj.spine), f"{obj.orientation:+d}")
            data = " | ".join(parts)
        elif isinstance(obj, SpacelikeCircle):
            data = _basis(obj.basis)
        else:
            raise TypeError(f"cannot tabulate a {type(obj).__name__}")
        rows.append({"index": k, "kind": type(obj).__name__, "data": data})
    return pd.DataFrame(rows, columns=["index", "kind", "data"])


def domain_frame(domain: ProperDomain) -> pd.DataFrame:
    df = domain.table()
    df.attrs["first_kind"] = domain.first_kind
    return df
