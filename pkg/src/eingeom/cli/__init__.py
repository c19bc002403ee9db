from __future__ import annotations

import json
import logging
import re
import sys
from pathlib import Path
from typing import Any

import click
import numpy as np
import pandas as pd

from eingeom._version import __version__
from eingeom.config import Settings
from eingeom.crooked import (
    CrookedPlane,
    build_crooked,
    closure_membership,
    closure_strata,
    disjoint,
)
from eingeom.dynamics import (
    DomainSpace,
    GroupKind,
    classify_powers,
    kak,
    limit_sets_ein,
    properness_domain,
)
from eingeom.einstein import (
    ConformalTransform,
    EinPoint,
    hypersurface_from_vector,
    inversion_apply,
    minkowski_chart,
)
from eingeom.errors import GeometryError, SceneError
from eingeom.export import report
from eingeom.export.mesh import MeshMode, export_mesh
from eingeom.forms import W0_FORM, Convention, FormSpec, intertwiner
from eingeom.groups import (
    compose_pair,
    orbit,
    properness_certificate,
    spine_reflection,
)
from eingeom.lie import Root, parabolic_basis, stabilized_subspaces
from eingeom.models import GroupObject, SceneObjects, parse_scene, realize
from eingeom.sympl4 import (
    Lagrangian,
    lagrangian_to_point,
    line_to_photon,
    point_to_lagrangian,
)

logger = logging.getLogger(__name__)

FORMATS = ["table", "csv", "json", "parquet"]


class _ExitCodeGroup(click.Group):
    """Usage errors exit with 1, failed geometric invariants with 2."""

    def main(self, *args: Any, standalone_mode: bool = True, **kwargs: Any) -> Any:
        if not standalone_mode:
            return super().main(*args, standalone_mode=False, **kwargs)
        try:
            rv = super().main(*args, standalone_mode=False, **kwargs)
        except click.ClickException as exc:
            exc.show()
            sys.exit(1)
        except click.Abort:
            click.echo("Aborted!", err=True)
            sys.exit(1)
        except GeometryError as exc:
            click.echo(f"error: {exc}", err=True)
            sys.exit(2)
        sys.exit(rv if isinstance(rv, int) else 0)


@click.group(cls=_ExitCodeGroup)
@click.version_option(version=__version__, prog_name="eingeom")
@click.option("--verbose", "-v", is_flag=True, help="Log progress at DEBUG on stderr")
@click.option(
    "--form",
    type=click.Choice([c.value for c in Convention]),
    default=None,
    help="Form convention for vectors and matrices given on the command line",
)
@click.option("--eps", type=float, default=None, help="Null/degeneracy tolerance")
@click.option("--workers", type=int, default=None, help="Threads for word enumeration")
@click.pass_context
def main(
    ctx: click.Context, verbose: bool, form: str | None, eps: float | None, workers: int | None
) -> None:
    logging.basicConfig(level=logging.DEBUG if verbose else logging.WARNING, stream=sys.stderr)
    try:
        settings = Settings.from_env().with_overrides(form=form, eps=eps, workers=workers)
    except ValueError as exc:
        raise click.UsageError(str(exc)) from exc
    logger.debug("Settings: %s", settings.to_dict())
    ctx.obj = settings


def _output_options(default_fmt: str = "table") -> Any:
    def decorate(f: Any) -> Any:
        f = click.option("--format", "fmt", type=click.Choice(FORMATS), default=default_fmt)(f)
        out = click.option("--out", "-o", "output", default="-", help="Output file (- for stdout)")
        return out(f)

    return decorate


@main.command()
@click.option("--vector", "vectors", multiple=True, required=True, help="Comma separated vector")
@click.option("--signature", default="3,2", show_default=True, help="Signature p,q")
@_output_options()
@click.pass_obj
def classify(
    settings: Settings, vectors: tuple[str, ...], signature: str, output: str, fmt: str
) -> None:
    """Causal character of vectors of R^{p,q}."""
    p, q = (int(x) for x in _parse_vector(signature, "--signature"))
    spec = FormSpec(p, q, Convention(settings.form))
    parsed = [_parse_vector(v, "--vector") for v in vectors]
    _write_df(report.classify_frame(parsed, spec, settings.eps), output, fmt)


@main.command()
@click.option("--point", "points", multiple=True, help="Patch point x,y,z of E^{2,1}")
@click.option("--null", "nulls", multiple=True, help="Null vector of R^{3,2}")
@_output_options()
@click.pass_obj
def chart(
    settings: Settings, points: tuple[str, ...], nulls: tuple[str, ...], output: str, fmt: str
) -> None:
    """Map patch points into Ein^{2,1}, or null vectors back to the patch."""
    spec = _ein_form(settings)
    out = [minkowski_chart(_parse_vector(x, "--point"), spec) for x in points]
    out += [EinPoint(_parse_vector(v, "--null"), spec, settings.eps) for v in nulls]
    if not out:
        raise click.UsageError("give at least one --point or --null")
    _write_df(report.points_frame(out, settings.eps), output, fmt)


@main.command()
@click.option("--point", "points", multiple=True, required=True, help="Patch point x,y,z")
@_output_options()
@click.pass_obj
def invert(settings: Settings, points: tuple[str, ...], output: str, fmt: str) -> None:
    """Apply the inversion x -> x / <x, x> through the conformal compactification."""
    spec = _ein_form(settings)
    images = [inversion_apply(minkowski_chart(_parse_vector(x, "--point"), spec)) for x in points]
    _write_df(report.points_frame(images, settings.eps), output, fmt)


@main.command("dict")
@click.option("--lagrangian", default=None, help="Lagrangian plane, as e1,e3 or 'v1;v2'")
@click.option("--line", default=None, help="Line of R^4 to send to its photon")
@click.option("--point", default=None, help="Point of W0 in f-coordinates to send to its plane")
@_output_options()
def dictionary(
    lagrangian: str | None, line: str | None, point: str | None, output: str, fmt: str
) -> None:
    """Translate between symplectic objects of R^4 and conformal objects of Ein^{2,1}."""
    rows = []
    if lagrangian is not None:
        p = lagrangian_to_point(Lagrangian(_parse_plane(lagrangian)))
        rows.append({"input": lagrangian, "kind": "point", "result": report.format_vector(p.rep)})
    if line is not None:
        ph = line_to_photon(_parse_vector(line, "--line"))
        basis = "; ".join(report.format_vector(c) for c in ph.basis.T)
        rows.append({"input": line, "kind": "photon", "result": basis})
    if point is not None:
        lag = point_to_lagrangian(EinPoint(_parse_vector(point, "--point"), W0_FORM))
        span = "; ".join(report.format_vector(c) for c in lag.span.T)
        rows.append({"input": point, "kind": "lagrangian", "result": span})
    if not rows:
        raise click.UsageError("give --lagrangian, --line or --point")
    _write_df(pd.DataFrame(rows, columns=["input", "kind", "result"]), output, fmt)


@main.command()
@click.option("--v0", default="1,2", show_default=True, help="Functional defining positivity")
@click.option("--subset", "subset", multiple=True, help="Negative simple root a,b for p_S")
@_output_options()
def lie(v0: str, subset: tuple[str, ...], output: str, fmt: str) -> None:
    """Roots of sp(4,R), or the parabolic subalgebra p_S with the flags it stabilizes."""
    functional = tuple(_parse_vector(v0, "--v0"))
    if not subset:
        _write_df(report.roots_frame(functional), output, fmt)
        return
    roots = [Root(tuple(int(x) for x in _parse_vector(s, "--subset"))) for s in subset]
    basis = parabolic_basis(roots, functional)
    flags = stabilized_subspaces(basis)
    rows = [
        {
            "subset": " ".join(str(r.pair) for r in roots),
            "dimension": len(basis),
            "stabilized": " | ".join(_coordinate_label(s) for s in flags),
        }
    ]
    _write_df(pd.DataFrame(rows), output, fmt)


@main.command("kak")
@click.option("--matrix", "matrix_path", required=True, type=click.Path(exists=True))
@click.option("--group", type=click.Choice([g.value for g in GroupKind]), default=None)
@_output_options()
@click.pass_obj
def kak_command(
    settings: Settings, matrix_path: str, group: str | None, output: str, fmt: str
) -> None:
    """KAK decomposition of a 4x4 symplectic or 5x5 orthogonal matrix."""
    m = _read_matrix(matrix_path)
    which = GroupKind(group) if group else (GroupKind.SP4 if m.shape == (4, 4) else GroupKind.SO32)
    if which is GroupKind.SO32:
        spec = _ein_form(settings)
        decomp = kak(ConformalTransform(m, spec, settings.eps), which)
        t = intertwiner(spec, W0_FORM)
        _write_df(report.kak_frame(decomp, t @ m @ np.linalg.inv(t)), output, fmt)
        return
    _write_df(report.kak_frame(kak(m, which), m), output, fmt)


@main.command()
@click.option("--matrix", "matrix_path", required=True, type=click.Path(exists=True))
@click.option("--depth", type=int, default=None, help="Number of powers examined")
@_output_options()
@click.pass_obj
def distortion(
    settings: Settings, matrix_path: str, depth: int | None, output: str, fmt: str
) -> None:
    """Exponent trace and distortion class of the powers of a matrix."""
    g = _group_element(_read_matrix(matrix_path), settings)
    result = classify_powers(g, depth or settings.power_depth, settings.slope_threshold)
    _write_df(report.distortion_frame(result), output, fmt)


@main.command()
@click.option("--matrix", "matrix_path", type=click.Path(exists=True), default=None)
@click.option("--scene", "scene_path", type=click.Path(exists=True), default=None)
@click.option("--group", "group_id", default=None, help="Group id in the scene")
@click.option("--space", type=click.Choice([s.value for s in DomainSpace]), default="ein")
@click.option("--depth", type=int, default=None, help="Word length for group domains")
@_output_options()
@click.pass_obj
def limits(
    settings: Settings,
    matrix_path: str | None,
    scene_path: str | None,
    group_id: str | None,
    space: str,
    depth: int | None,
    output: str,
    fmt: str,
) -> None:
    """Limit sets of powers of a transform, or the removed sets of a group's words."""
    if matrix_path is not None:
        g = ConformalTransform(_read_matrix(matrix_path), _ein_form(settings), settings.eps)
        sets = limit_sets_ein(g, settings.power_depth, settings.slope_threshold, settings.limit_tol)
        _write_df(report.limits_frame(sets), output, fmt)
        return
    if scene_path is None:
        raise click.UsageError("give --matrix or --scene")
    objects, group_obj = _load_group(scene_path, group_id)
    group = objects.groups[group_obj.id]
    domain = properness_domain(
        group.generators,
        word_length=depth or settings.word_length,
        space=space,
        involutive=group.involutive,
        depth=settings.power_depth,
        slope_threshold=settings.slope_threshold,
        limit_tol=settings.limit_tol,
        workers=settings.workers,
    )
    _write_df(report.domain_frame(domain), output, fmt)


@main.command()
@click.option("--scene", "scene_path", type=click.Path(exists=True), default=None)
@click.option("--plane", "plane_id", default=None, help="Crooked plane id in the scene")
@click.option("--vertex", default="0,0,0", show_default=True)
@click.option("--spine", default="1,0,0", show_default=True)
@click.option("--orientation", type=click.Choice(["+", "-"]), default="+")
@click.option("--point", "points", multiple=True, help="Patch point to locate")
@_output_options()
@click.pass_obj
def crooked(
    settings: Settings,
    scene_path: str | None,
    plane_id: str | None,
    vertex: str,
    spine: str,
    orientation: str,
    points: tuple[str, ...],
    output: str,
    fmt: str,
) -> None:
    """Locate points on a crooked surface, or list the strata of its closure."""
    if scene_path is not None:
        plane = _scene_plane(realize(parse_scene(scene_path)), plane_id)
    else:
        plane = build_crooked(
            _parse_vector(vertex, "--vertex"), _parse_vector(spine, "--spine"), orientation
        )
    surface = closure_strata(plane)
    if not points:
        _write_df(report.strata_frame(surface), output, fmt)
        return
    xs = [_parse_vector(x, "--point") for x in points]
    labels = [
        plane.membership(x, settings.eps)
        if len(x) == 3
        else closure_membership(EinPoint(x, _ein_form(settings)), surface, settings.eps)
        for x in xs
    ]
    _write_df(report.membership_frame(xs, labels), output, fmt)


@main.command("disjoint")
@click.option("--scene", "scene_path", required=True, type=click.Path(exists=True))
@click.option("--samples", type=int, default=None, help="Oracle samples per plane")
@click.option("--seed", type=int, default=None)
@click.option("--no-oracle", is_flag=True, help="Skip the Monte-Carlo cross-check")
@_output_options()
@click.pass_obj
def disjoint_command(
    settings: Settings,
    scene_path: str,
    samples: int | None,
    seed: int | None,
    no_oracle: bool,
    output: str,
    fmt: str,
) -> None:
    """Pairwise disjointness of every crooked plane in a scene."""
    objects = realize(parse_scene(scene_path))
    ids = list(objects.planes)
    if len(ids) < 2:
        raise click.UsageError("the scene needs at least two crooked planes")
    frames = []
    for i, first in enumerate(ids):
        for second in ids[i + 1 :]:
            cert = disjoint(
                objects.planes[first],
                objects.planes[second],
                eps=settings.eps,
                samples=samples or settings.samples,
                seed=settings.seed if seed is None else seed,
                oracle=not no_oracle,
            )
            frame = report.disjoint_frame(cert)
            frame.insert(0, "second", second)
            frame.insert(0, "first", first)
            frames.append(frame)
    _write_df(pd.concat(frames, ignore_index=True), output, fmt)


@main.command("group-certify")
@click.option("--scene", "scene_path", required=True, type=click.Path(exists=True))
@click.option("--group", "group_id", default=None, help="Group id in the scene")
@click.option("--depth", type=int, default=None, help="Maximal word length")
@click.option("--samples", type=int, default=2000, show_default=True, help="Region samples")
@click.option("--seed", type=int, default=None)
@_output_options()
@click.pass_obj
def group_certify(
    settings: Settings,
    scene_path: str,
    group_id: str | None,
    depth: int | None,
    samples: int,
    seed: int | None,
    output: str,
    fmt: str,
) -> None:
    """Check that the walls are disjoint and that short words move the region off itself."""
    objects, group_obj = _load_group(scene_path, group_id)
    walls = objects.walls[group_obj.id]
    if not walls:
        raise click.UsageError(f"group {group_obj.id!r} lists no walls")
    cert = properness_certificate(
        walls,
        objects.groups[group_obj.id],
        max_length=depth or settings.word_length,
        samples=samples,
        seed=settings.seed if seed is None else seed,
        eps=settings.eps,
    )
    composition = None
    circle_ids = [g for g in group_obj.generators if g in objects.circles]
    if len(circle_ids) >= 2:
        first, second = (spine_reflection(objects.circles[c]) for c in circle_ids[:2])
        _, composition = compose_pair(first, second)
    _write_df(report.certificate_frame(cert, composition), output, fmt)


@main.command("orbit")
@click.option("--scene", "scene_path", required=True, type=click.Path(exists=True))
@click.option("--group", "group_id", default=None, help="Group id in the scene")
@click.option("--object", "object_id", required=True, help="Seed object id")
@click.option("--depth", type=int, default=None, help="Maximal word length")
@_output_options()
@click.pass_obj
def orbit_command(
    settings: Settings,
    scene_path: str,
    group_id: str | None,
    object_id: str,
    depth: int | None,
    output: str,
    fmt: str,
) -> None:
    """Distinct images of a scene object under the short words of a group."""
    objects, group_obj = _load_group(scene_path, group_id)
    seed = _scene_object(objects, object_id)
    images = orbit(seed, objects.groups[group_obj.id], depth or settings.word_length)
    _write_df(report.orbit_frame(images), output, fmt)


@main.command("export")
@click.option("--scene", "scene_path", type=click.Path(exists=True), default=None)
@click.option("--object", "object_id", default=None, help="Object id in the scene")
@click.option("--lightcone", default=None, help="Patch point whose lightcone is exported")
@click.option("--hypersphere", default=None, help="Normal vector in R^{3,2}")
@click.option("--mode", type=click.Choice([m.value for m in MeshMode]), default="patch")
@click.option("--resolution", type=int, default=1000, show_default=True)
@click.option("--extent", type=float, default=10.0, show_default=True)
@click.option("--out", "-o", "output", default="-", help="Output OBJ file (- for stdout)")
@click.pass_obj
def export_command(
    settings: Settings,
    scene_path: str | None,
    object_id: str | None,
    lightcone: str | None,
    hypersphere: str | None,
    mode: str,
    resolution: int,
    extent: float,
    output: str,
) -> None:
    """Write a Wavefront OBJ mesh of a lightcone, hypersphere, circle or crooked surface."""
    spec = _ein_form(settings)
    obj: object
    if lightcone is not None:
        obj = minkowski_chart(_parse_vector(lightcone, "--lightcone"), spec)
    elif hypersphere is not None:
        obj = hypersurface_from_vector(_parse_vector(hypersphere, "--hypersphere"), spec)
    elif scene_path is not None and object_id is not None:
        obj = _scene_object(realize(parse_scene(scene_path)), object_id)
    else:
        raise click.UsageError("give --lightcone, --hypersphere, or --scene with --object")
    if resolution < 9:
        raise click.BadParameter("resolution must be at least 9", param_hint="--resolution")
    mesh = export_mesh(obj, mode, resolution, extent)
    _write_text(mesh.to_obj(), output)


# ---------------------------------------------------------------------------
# Helpers


def _ein_form(settings: Settings) -> FormSpec:
    return FormSpec(3, 2, Convention(settings.form))


def _parse_vector(text: str, hint: str) -> np.ndarray:
    parts = [p for p in re.split(r"[,\s]+", text.strip()) if p]
    try:
        return np.array([float(p) for p in parts])
    except ValueError as exc:
        raise click.BadParameter(f"not a list of numbers: {text!r}", param_hint=hint) from exc


def _parse_plane(text: str) -> np.ndarray:
    names = [t.strip() for t in text.split(",")]
    if all(re.fullmatch(r"e[1-4]", n) for n in names):
        return np.column_stack([np.eye(4)[int(n[1]) - 1] for n in names])
    return np.column_stack([_parse_vector(v, "--lagrangian") for v in text.split(";")])


def _coordinate_label(basis: np.ndarray) -> str:
    idx = np.flatnonzero(np.any(basis != 0, axis=1))
    return ",".join(f"e{i + 1}" for i in idx)


def _read_matrix(path: str) -> np.ndarray:
    text = Path(path).read_text()
    try:
        if text.lstrip().startswith("["):
            return np.array(json.loads(text), dtype=float)
        return np.loadtxt(path, ndmin=2)
    except ValueError as exc:
        message = f"cannot read a matrix from {path}"
        raise click.BadParameter(message, param_hint="--matrix") from exc


def _group_element(m: np.ndarray, settings: Settings) -> np.ndarray | ConformalTransform:
    if m.shape == (4, 4):
        return m
    return ConformalTransform(m, _ein_form(settings), settings.eps)


def _load_group(scene_path: str, group_id: str | None) -> tuple[SceneObjects, GroupObject]:
    scene = parse_scene(scene_path)
    objects = realize(scene)
    groups = [o for o in scene.of_kind("group") if isinstance(o, GroupObject)]
    if group_id is not None:
        chosen = scene.get(group_id)
        if not isinstance(chosen, GroupObject):
            raise SceneError("object is not a group", object_id=group_id)
        return objects, chosen
    if len(groups) != 1:
        raise click.UsageError(f"the scene has {len(groups)} groups; pick one with --group")
    return objects, groups[0]


def _scene_plane(objects: SceneObjects, plane_id: str | None) -> CrookedPlane:
    if plane_id is not None:
        if plane_id not in objects.planes:
            raise SceneError("no crooked plane with this id", object_id=plane_id)
        return objects.planes[plane_id]
    if len(objects.planes) != 1:
        raise click.UsageError("the scene has several crooked planes; pick one with --plane")
    return next(iter(objects.planes.values()))


def _scene_object(objects: SceneObjects, object_id: str) -> Any:
    for table in (objects.points, objects.photons, objects.circles, objects.planes):
        if object_id in table:
            return table[object_id]
    raise SceneError("no point, photon, circle or crooked plane with this id", object_id=object_id)


def _write_df(df: pd.DataFrame, output: str, fmt: str) -> None:
    if fmt == "parquet":
        path = output if output != "-" else "output.parquet"
        df.to_parquet(path)
        click.echo(f"Written to {path}", err=True)
        return
    if fmt == "json":
        text = df.to_json(orient="records", indent=2, double_precision=15)
    elif fmt == "csv":
        text = df.to_csv(index=False)
    else:
        text = df.to_string(index=False)
    _write_text(text or "", output)


def _write_text(text: str, output: str) -> None:
    if output == "-":
        click.echo(text.rstrip("\n"))
    else:
        Path(output).write_text(text)
        click.echo(f"Written to {output}", err=True)
