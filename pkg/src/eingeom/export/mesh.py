"""Triangle meshes of surfaces in the Minkowski patch, written as Wavefront OBJ."""

from __future__ import annotations

import logging
from collections.abc import Callable
from dataclasses import dataclass, field
from enum import StrEnum

import numpy as np

from eingeom.causal import HatPoint, lift_to_tilde, null_geodesic, spiral_embed
from eingeom.crooked import (
    DEFAULT_EXTENT,
    ConvexPiece,
    CrookedPlane,
    CrookedSurface,
    closure_strata,
)
from eingeom.einstein import EinPoint, Hypersurface, HypersurfaceKind, chart_inverse
from eingeom.errors import IdealPointError, NotSurfaceError, PatchError
from eingeom.forms import EIN_21, MINKOWSKI_21
from eingeom.groups import SpacelikeCircle
from eingeom.linalg import null_space

logger = logging.getLogger(__name__)


class MeshMode(StrEnum):
    PATCH = "patch"
    SPIRAL = "spiral"


@dataclass
class Mesh:
    """Vertices, tagged triangles and tagged polylines."""

    vertices: list[np.ndarray] = field(default_factory=list)
    faces: list[tuple[str, tuple[int, int, int]]] = field(default_factory=list)
    lines: list[tuple[str, list[int]]] = field(default_factory=list)

    @property
    def tags(self) -> list[str]:
        seen: dict[str, None] = {}
        for tag, _ in self.faces:
            seen.setdefault(tag, None)
        for tag, _ in self.lines:
            seen.setdefault(tag, None)
        return list(seen)

    @property
    def face_tags(self) -> list[str]:
        return list(dict.fromkeys(tag for tag, _ in self.faces))

    def add_grid(
        self,
        tag: str,
        func: Callable[[np.ndarray, np.ndarray], np.ndarray],
        us: np.ndarray,
        vs: np.ndarray,
        wrap_u: bool = False,
    ) -> None:
        """Triangulate func over the grid us x vs; func maps meshgrids to (..., 3) points."""
        uu, vv = np.meshgrid(us, vs, indexing="ij")
        pts = func(uu, vv)
        base = len(self.vertices)
        nu, nv = uu.shape
        self.vertices.extend(pts.reshape(-1, 3))
        cols = nu if wrap_u else nu - 1
        for i in range(cols):
            i2 = (i + 1) % nu
            for j in range(nv - 1):
                a, b = base + i * nv + j, base + i2 * nv + j
                self.faces.append((tag, (a, b, b + 1)))
                self.faces.append((tag, (a, b + 1, a + 1)))

    def add_polyline(self, tag: str, points: np.ndarray) -> None:
        base = len(self.vertices)
        self.vertices.extend(np.asarray(points, dtype=float))
        self.lines.append((tag, list(range(base, base + len(points)))))

    def to_obj(self) -> str:
        out = ["# eingeom mesh"]
        out.extend("v {:.17g} {:.17g} {:.17g}".format(*v) for v in self.vertices)
        for tag in self.face_tags:
            out.append(f"g {tag}")
            out.extend(
                f"f {a + 1} {b + 1} {c + 1}" for t, (a, b, c) in self.faces if t == tag
            )
        for tag, idx in self.lines:
            out.append(f"g {tag}")
            out.append("l " + " ".join(str(i + 1) for i in idx))
        return "\n".join(out) + "\n"


def _grid_shape(resolution: int) -> tuple[int, int]:
    """Grid (nu, nv) with nu * nv as close to resolution as near-square grids allow."""
    target = max(resolution, 9)
    root = np.sqrt(target)
    best: tuple[int, int, float] | None = None
    for nv in range(max(3, int(root / 2)), int(2 * root) + 2):
        nu = max(3, round(target / nv))
        key = (abs(nu * nv - target), abs(nv - root))
        if best is None or key < (abs(best[0] * best[1] - target), best[2]):
            best = (nu, nv, key[1])
    assert best is not None
    return best[0], best[1]


def _split(resolution: int, parts: int) -> list[int]:
    cuts = [round(k * resolution / parts) for k in range(parts + 1)]
    return [b - a for a, b in zip(cuts, cuts[1:], strict=False)]


def _circle(theta: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    return np.cos(theta), np.sin(theta)


def lightcone_mesh(p: EinPoint, resolution: int = 1000, extent: float = DEFAULT_EXTENT) -> Mesh:
    """The double cone of a point of the patch, tagged future and past."""
    try:
        x0 = chart_inverse(p)
    except IdealPointError as exc:
        raise PatchError(f"lightcone vertex lies at infinity ({exc.stratum})") from exc
    nu, nv = _grid_shape(resolution // 2)
    theta = np.linspace(0.0, 2 * np.pi, nu, endpoint=False)
    mesh = Mesh()
    halves = (("future", np.linspace(0.0, extent, nv)), ("past", np.linspace(-extent, 0.0, nv)))
    for tag, ts in halves:

        def cone(th: np.ndarray, t: np.ndarray) -> np.ndarray:
            c, s = _circle(th)
            return x0 + np.stack([t * c, t * s, t], axis=-1)

        mesh.add_grid(tag, cone, theta, ts, wrap_u=True)
    return mesh


def lightcone_spiral_mesh(p: EinPoint, resolution: int = 1000) -> Mesh:
    """Lightcone of a lift of p in the universal cover, embedded by exp(theta) phi.

    The future and past null geodesics from the lift sweep a surface of revolution
    whose meridians are logarithmic spirals, singular at the lift and at its
    conjugate points.
    """
    if p.form.dim != 5:
        raise NotSurfaceError("spiral mode embeds lightcones of Ein^{2,1}")
    x = lift_to_tilde(HatPoint(p.rep, p.form))
    phi = x.phi
    helper = np.eye(3)[int(np.argmin(np.abs(phi)))]
    e1 = helper - (helper @ phi) * phi
    e1 /= np.linalg.norm(e1)
    e2 = np.cross(phi, e1)
    nu, nv = _grid_shape(resolution)
    angles = np.linspace(0.0, 2 * np.pi, nu, endpoint=False)
    params = np.linspace(-np.pi, np.pi, nv)

    def sweep(a: np.ndarray, s: np.ndarray) -> np.ndarray:
        pts = np.empty(a.shape + (3,))
        for idx in np.ndindex(a.shape):
            direction = np.cos(a[idx]) * e1 + np.sin(a[idx]) * e2
            pts[idx] = spiral_embed(null_geodesic(x, direction, float(s[idx])))
        return pts

    mesh = Mesh()
    mesh.add_grid("lightcone", sweep, angles, params, wrap_u=True)
    return mesh


def hypersurface_mesh(
    surface: Hypersurface, resolution: int = 1000, extent: float = DEFAULT_EXTENT
) -> Mesh:
    """The part of a hypersurface P(v^perp ∩ N) inside the patch, as a quadric of E^{2,1}."""
    if surface.kind is HypersurfaceKind.LIGHTCONE:
        vertex = surface.vertex
        assert vertex is not None
        return lightcone_mesh(vertex, resolution, extent)
    if surface.kind not in (
        HypersurfaceKind.EINSTEIN_HYPERSPHERE,
        HypersurfaceKind.SPACELIKE_HYPERSPHERE,
    ):
        raise NotSurfaceError(f"{surface.kind} is not a surface")
    if surface.form != EIN_21:
        raise NotSurfaceError("patch meshes need Ein^{2,1} in the hyp2 convention")
    v = surface.defining
    w, alpha, beta = v[:3], v[3], v[4]
    q = MINKOWSKI_21.matrix
    mesh = Mesh()
    nu, nv = _grid_shape(resolution)
    theta = np.linspace(0.0, 2 * np.pi, nu, endpoint=False)
    if abs(beta) <= 1e-12 * max(1.0, float(np.linalg.norm(v))):
        # plane 2<x, w> = alpha
        normal = q @ w
        frame = null_space(normal.reshape(1, 3))
        base = normal * alpha / (2.0 * float(normal @ normal))
        ts = np.linspace(-extent, extent, nv)
        us = np.linspace(-extent, extent, nu)

        def flat(a: np.ndarray, b: np.ndarray) -> np.ndarray:
            return base + a[..., None] * frame[:, 0] + b[..., None] * frame[:, 1]

        mesh.add_grid("plane", flat, us, ts)
        return mesh
    center = w / beta
    radius2 = float(v @ surface.form.matrix @ v) / beta**2
    r = np.sqrt(abs(radius2))
    ts = np.linspace(0.0, np.arcsinh(extent / max(r, 1e-12)), nv)
    if radius2 > 0:
        ts = np.linspace(-ts[-1], ts[-1], nv)

        def sheet(th: np.ndarray, t: np.ndarray) -> np.ndarray:
            c, s = _circle(th)
            return center + r * np.stack([np.cosh(t) * c, np.cosh(t) * s, np.sinh(t)], axis=-1)

        mesh.add_grid("sheet", sheet, theta, ts, wrap_u=True)
        return mesh
    nu, nv = _grid_shape(resolution // 2)
    theta = np.linspace(0.0, 2 * np.pi, nu, endpoint=False)
    ts = np.linspace(0.0, ts[-1], nv)
    for tag, sign in (("future", 1.0), ("past", -1.0)):

        def bowl(th: np.ndarray, t: np.ndarray, sign: float = sign) -> np.ndarray:
            c, s = _circle(th)
            return center + r * np.stack(
                [np.sinh(t) * c, np.sinh(t) * s, sign * np.cosh(t)], axis=-1
            )

        mesh.add_grid(tag, bowl, theta, ts, wrap_u=True)
    return mesh


def circle_polyline(
    circle: SpacelikeCircle, resolution: int = 200, extent: float = DEFAULT_EXTENT
) -> Mesh:
    """A spacelike circle inside the patch: a line if it passes p_inf, else conic arcs."""
    mesh = Mesh()
    try:
        point, direction = circle.spine()
    except PatchError:
        arc: list[np.ndarray] = []
        for p in circle.points(resolution):
            try:
                arc.append(chart_inverse(p))
            except IdealPointError:
                if len(arc) > 1:
                    mesh.add_polyline("circle", np.array(arc))
                arc = []
        if len(arc) > 1:
            mesh.add_polyline("circle", np.array(arc))
        return mesh
    ts = np.linspace(-extent, extent, resolution)
    mesh.add_polyline("circle", point + ts[:, None] * direction)
    return mesh


def crooked_plane_mesh(
    plane: CrookedPlane, resolution: int = 1000, extent: float = DEFAULT_EXTENT
) -> Mesh:
    """Four tagged faces: the two wings and the two stem quadrants."""
    mesh = Mesh()
    for piece, share in zip(plane.pieces(), _split(resolution, 4), strict=True):
        nu, nv = _grid_shape(share)
        lo = np.maximum(piece.lower, -extent)
        hi = np.minimum(piece.upper, extent)
        us = np.linspace(lo[0], hi[0], nu)
        vs = np.linspace(lo[1], hi[1], nv)

        def face(a: np.ndarray, b: np.ndarray, piece: ConvexPiece = piece) -> np.ndarray:
            return piece.apex + a[..., None] * piece.gens[:, 0] + b[..., None] * piece.gens[:, 1]

        mesh.add_grid(str(piece.face), face, us, vs)
    return mesh


def crooked_surface_mesh(
    surface: CrookedSurface, resolution: int = 1000, extent: float = DEFAULT_EXTENT
) -> Mesh:
    """Faces of the plane plus the photons phi_i through the vertex."""
    mesh = crooked_plane_mesh(surface.base, resolution, extent)
    ts = np.array([0.0, extent])
    for i, ell in enumerate(surface.base.null_directions, start=1):
        for sign, suffix in ((1.0, "+"), (-1.0, "-")):
            mesh.add_polyline(f"phi{i}{suffix}", surface.base.vertex + sign * ts[:, None] * ell)
    return mesh


def export_mesh(
    obj: object,
    mode: MeshMode | str = MeshMode.PATCH,
    resolution: int = 1000,
    extent: float = DEFAULT_EXTENT,
) -> Mesh:
    """Mesh a surface-like object: lightcone vertex, hypersurface, circle or crooked plane/surface.

    Raises:
        NotSurfaceError: If the object has no surface to mesh in the requested mode
    """
    mode = MeshMode(mode)
    if mode is MeshMode.SPIRAL:
        if isinstance(obj, Hypersurface) and obj.kind is HypersurfaceKind.LIGHTCONE:
            assert obj.vertex is not None
            obj = obj.vertex
        if not isinstance(obj, EinPoint):
            raise NotSurfaceError("spiral mode embeds lightcones only")
        mesh = lightcone_spiral_mesh(obj, resolution)
    elif isinstance(obj, EinPoint):
        mesh = lightcone_mesh(obj, resolution, extent)
    elif isinstance(obj, Hypersurface):
        mesh = hypersurface_mesh(obj, resolution, extent)
    elif isinstance(obj, SpacelikeCircle):
        mesh = circle_polyline(obj, resolution, extent)
    elif isinstance(obj, CrookedPlane):
        mesh = crooked_surface_mesh(closure_strata(obj), resolution, extent)
    elif isinstance(obj, CrookedSurface):
        mesh = crooked_surface_mesh(obj, resolution, extent)
    else:
        raise NotSurfaceError(f"cannot mesh a {type(obj).__name__}")
    logger.debug(
        "mesh with %d vertices, %d faces, tags %s", len(mesh.vertices), len(mesh.faces), mesh.tags
    )
    return mesh
