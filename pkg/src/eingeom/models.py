"""Scene files: a JSON list of tagged geometric objects in one form convention."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Annotated, Any, Literal

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator

from eingeom.crooked import CrookedPlane, build_crooked
from eingeom.einstein import ConformalTransform, EinPoint, Photon
from eingeom.errors import GeometryError, SceneError
from eingeom.forms import EIN_21, Convention, FormSpec, Subspace, intertwiner
from eingeom.groups import GroupPresentation, SpacelikeCircle, spine_reflection

Vector = list[float]
Matrix = list[list[float]]


class _SceneObject(BaseModel):
    model_config = ConfigDict(extra="forbid")

    id: str


class PointObject(_SceneObject):
    kind: Literal["point"] = "point"
    vector: Vector


class PhotonObject(_SceneObject):
    kind: Literal["photon"] = "photon"
    basis: Matrix

    @field_validator("basis")
    @classmethod
    def _two_vectors(cls, v: Matrix) -> Matrix:
        if len(v) != 2:
            raise ValueError("a photon is spanned by exactly two vectors")
        return v


class CircleObject(_SceneObject):
    """A spacelike circle, by a spanning triple or by a spine of the patch."""

    kind: Literal["circle"] = "circle"
    basis: Matrix | None = None
    spine_point: Vector | None = None
    spine_direction: Vector | None = None

    @field_validator("basis")
    @classmethod
    def _three_vectors(cls, v: Matrix | None) -> Matrix | None:
        if v is not None and len(v) != 3:
            raise ValueError("a spacelike circle is spanned by exactly three vectors")
        return v


class CrookedPlaneObject(_SceneObject):
    kind: Literal["crooked_plane"] = "crooked_plane"
    vertex: Vector
    spine: Vector
    orientation: Literal["+", "-"] = "+"


class TransformObject(_SceneObject):
    kind: Literal["transform"] = "transform"
    matrix: Matrix


class GroupObject(_SceneObject):
    """Generators are ids of transforms or of circles (standing for their spine reflections)."""

    kind: Literal["group"] = "group"
    generators: list[str]
    relations: list[list[int]] = Field(default_factory=list)
    involutive: bool = False
    walls: list[str] = Field(default_factory=list)


SceneObject = Annotated[
    PointObject | PhotonObject | CircleObject | CrookedPlaneObject | TransformObject | GroupObject,
    Field(discriminator="kind"),
]


class Scene(BaseModel):
    model_config = ConfigDict(extra="forbid")

    form: Convention = Convention.LAST_PAIR_HYPERBOLIC
    objects: list[SceneObject] = Field(default_factory=list)
    metadata: dict[str, Any] = Field(default_factory=dict)

    def get(self, object_id: str) -> SceneObject:
        for obj in self.objects:
            if obj.id == object_id:
                return obj
        raise SceneError("unknown object", object_id=object_id)

    def of_kind(self, kind: str) -> list[SceneObject]:
        return [o for o in self.objects if o.kind == kind]


def load_scene(text: str) -> Scene:
    if not text.strip():
        return Scene()
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SceneError(exc.msg, line=exc.lineno, column=exc.colno) from exc
    try:
        scene = Scene.model_validate(raw)
    except ValidationError as exc:
        err = exc.errors()[0]
        raise SceneError(_describe(err), object_id=_object_id(raw, err["loc"])) from exc
    ids = [o.id for o in scene.objects]
    dupes = sorted({i for i in ids if ids.count(i) > 1})
    if dupes:
        raise SceneError("duplicate object id", object_id=dupes[0])
    return scene


def parse_scene(path: str | Path) -> Scene:
    return load_scene(Path(path).read_text())


def dump_scene(scene: Scene) -> str:
    """Canonical JSON: two-space indent, shortest round-trip float repr."""
    data = scene.model_dump(mode="json", exclude_none=True)
    return json.dumps(data, indent=2) + "\n"


def _describe(err: Any) -> str:
    loc = ".".join(str(x) for x in err["loc"])
    return f"{loc}: {err['msg']}"


def _object_id(raw: Any, loc: tuple[Any, ...]) -> str | None:
    if len(loc) >= 2 and loc[0] == "objects" and isinstance(loc[1], int):
        try:
            return str(raw["objects"][loc[1]]["id"])
        except (KeyError, IndexError, TypeError):
            return f"#{loc[1]}"
    return None


# ---------------------------------------------------------------------------
# Realization


@dataclass
class SceneObjects:
    """Geometric objects built from a scene, keyed by object id."""

    points: dict[str, EinPoint] = field(default_factory=dict)
    photons: dict[str, Photon] = field(default_factory=dict)
    circles: dict[str, SpacelikeCircle] = field(default_factory=dict)
    planes: dict[str, CrookedPlane] = field(default_factory=dict)
    transforms: dict[str, ConformalTransform] = field(default_factory=dict)
    groups: dict[str, GroupPresentation] = field(default_factory=dict)
    walls: dict[str, list[CrookedPlane]] = field(default_factory=dict)

    @property
    def counts(self) -> dict[str, int]:
        return {
            "points": len(self.points),
            "photons": len(self.photons),
            "circles": len(self.circles),
            "planes": len(self.planes),
            "transforms": len(self.transforms),
            "groups": len(self.groups),
        }


class _Converter:
    """Carries vectors and matrices from the scene convention to the library one."""

    def __init__(self, convention: Convention) -> None:
        source = FormSpec(3, 2, convention)
        self.t = np.eye(5) if source == EIN_21 else intertwiner(source, EIN_21)
        self.t_inv = np.linalg.inv(self.t)

    def vector(self, v: Vector) -> np.ndarray:
        arr = np.asarray(v, dtype=float)
        if arr.shape != (5,):
            raise ValueError(f"expected 5 coordinates, got {len(v)}")
        return self.t @ arr

    def columns(self, vectors: Matrix) -> np.ndarray:
        return np.column_stack([self.vector(v) for v in vectors])

    def matrix(self, m: Matrix) -> np.ndarray:
        arr = np.asarray(m, dtype=float)
        if arr.shape != (5, 5):
            raise ValueError(f"expected a 5x5 matrix, got shape {arr.shape}")
        return self.t @ arr @ self.t_inv


def realize(scene: Scene) -> SceneObjects:
    """Build every object of the scene, validating it against its constructor.

    Raises:
        SceneError: Naming the first object whose geometric invariant fails
    """
    conv = _Converter(scene.form)
    out = SceneObjects()
    for obj in scene.objects:
        try:
            _realize_one(obj, conv, out)
        except SceneError:
            raise
        except (GeometryError, ValueError) as exc:
            raise SceneError(str(exc), object_id=obj.id) from exc
    return out


def _realize_one(obj: SceneObject, conv: _Converter, out: SceneObjects) -> None:
    if isinstance(obj, PointObject):
        out.points[obj.id] = EinPoint(conv.vector(obj.vector))
    elif isinstance(obj, PhotonObject):
        out.photons[obj.id] = Photon(conv.columns(obj.basis))
    elif isinstance(obj, CircleObject):
        if obj.basis is not None:
            out.circles[obj.id] = SpacelikeCircle(Subspace(conv.columns(obj.basis), EIN_21))
        elif obj.spine_point is not None and obj.spine_direction is not None:
            out.circles[obj.id] = SpacelikeCircle.from_spine(obj.spine_point, obj.spine_direction)
        else:
            raise ValueError("circle needs a basis or a spine point and direction")
    elif isinstance(obj, CrookedPlaneObject):
        out.planes[obj.id] = build_crooked(obj.vertex, obj.spine, obj.orientation)
    elif isinstance(obj, TransformObject):
        out.transforms[obj.id] = ConformalTransform(conv.matrix(obj.matrix))
    elif isinstance(obj, GroupObject):
        gens: list[ConformalTransform] = []
        for ref in obj.generators:
            if ref in out.transforms:
                gens.append(out.transforms[ref])
            elif ref in out.circles:
                gens.append(spine_reflection(out.circles[ref]).transform)
            else:
                raise SceneError("generator is not a previously defined transform or circle", ref)
        relations = tuple(tuple(r) for r in obj.relations)
        out.groups[obj.id] = GroupPresentation(tuple(gens), relations, obj.involutive)
        missing = [w for w in obj.walls if w not in out.planes]
        if missing:
            raise SceneError("wall is not a previously defined crooked plane", missing[0])
        out.walls[obj.id] = [out.planes[w] for w in obj.walls]
