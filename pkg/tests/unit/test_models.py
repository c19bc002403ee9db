from __future__ import annotations

import json
from pathlib import Path

import numpy as np
import pytest

from eingeom.einstein import chart_section, minkowski_chart
from eingeom.errors import SceneError
from eingeom.forms import EIN_21, Convention, FormSpec, intertwiner
from eingeom.groups import ultraparallel
from eingeom.models import (
    CircleObject,
    CrookedPlaneObject,
    PointObject,
    Scene,
    dump_scene,
    load_scene,
    parse_scene,
    realize,
)

FIXTURE = Path(__file__).parent.parent / "fixtures" / "example_group.json"


def _scene(*objects: dict, form: str = "hyp2") -> str:
    return json.dumps({"form": form, "objects": list(objects)})


class TestLoad:
    def test_fixture(self):
        scene = parse_scene(FIXTURE)
        assert scene.form is Convention.LAST_PAIR_HYPERBOLIC
        assert [o.id for o in scene.of_kind("circle")] == ["c1", "c2", "c3"]
        assert isinstance(scene.get("C1"), CrookedPlaneObject)

    def test_empty_text(self):
        assert load_scene("  \n").objects == []

    def test_dump_is_stable(self):
        text = FIXTURE.read_text()
        once = dump_scene(load_scene(text))
        assert dump_scene(load_scene(once)) == once
        assert once.endswith("\n")

    def test_dump_drops_unset_fields(self):
        circle = CircleObject(id="c", spine_point=[0, 0, 0], spine_direction=[1, 0, 0])
        assert "basis" not in dump_scene(Scene(objects=[circle]))

    def test_bad_json(self):
        with pytest.raises(SceneError) as info:
            load_scene('{"objects": [}')
        assert info.value.line == 1

    def test_unknown_kind_names_the_object(self):
        with pytest.raises(SceneError) as info:
            load_scene(_scene({"id": "x", "kind": "sphere"}))
        assert info.value.object_id == "x"

    def test_extra_fields_are_rejected(self):
        with pytest.raises(SceneError):
            load_scene(_scene({"id": "p", "kind": "point", "vector": [0] * 5, "colour": 1}))

    def test_duplicate_ids(self):
        point = {"id": "p", "kind": "point", "vector": [0, 0, 0, 0, 1]}
        with pytest.raises(SceneError, match="duplicate") as info:
            load_scene(_scene(point, point))
        assert info.value.object_id == "p"

    def test_photon_needs_two_vectors(self):
        with pytest.raises(SceneError, match="two vectors"):
            load_scene(_scene({"id": "l", "kind": "photon", "basis": [[0, 0, 0, 1, 0]]}))

    def test_get_unknown(self):
        with pytest.raises(SceneError, match="unknown"):
            Scene().get("nope")


class TestRealize:
    def test_fixture(self):
        objects = realize(parse_scene(FIXTURE))
        assert objects.counts == {
            "points": 0,
            "photons": 0,
            "circles": 3,
            "planes": 3,
            "transforms": 0,
            "groups": 1,
        }
        group = objects.groups["gamma"]
        assert group.involutive
        assert group.rank == 3
        assert len(objects.walls["gamma"]) == 3
        assert ultraparallel(objects.circles["c1"], objects.circles["c2"])

    def test_other_convention(self):
        source = FormSpec(3, 2, Convention.DIAGONAL)
        vec = intertwiner(EIN_21, source) @ chart_section([1.0, 2.0, 0.0])
        scene = Scene(form=Convention.DIAGONAL, objects=[PointObject(id="p", vector=vec.tolist())])
        assert realize(scene).points["p"] == minkowski_chart([1.0, 2.0, 0.0])

    def test_non_null_point(self):
        scene = load_scene(_scene({"id": "p", "kind": "point", "vector": [1, 0, 0, 0, 0]}))
        with pytest.raises(SceneError) as info:
            realize(scene)
        assert info.value.object_id == "p"

    def test_unknown_generator(self):
        scene = load_scene(_scene({"id": "g", "kind": "group", "generators": ["t"]}))
        with pytest.raises(SceneError, match="generator") as info:
            realize(scene)
        assert info.value.object_id == "t"

    def test_unknown_wall(self):
        circle = {
            "id": "c",
            "kind": "circle",
            "spine_point": [0, 0, 0],
            "spine_direction": [1, 0, 0],
        }
        group = {"id": "g", "kind": "group", "generators": ["c"], "walls": ["W"]}
        with pytest.raises(SceneError, match="wall"):
            realize(load_scene(_scene(circle, group)))

    def test_circle_needs_a_definition(self):
        scene = Scene(objects=[CircleObject(id="c")])
        with pytest.raises(SceneError, match="basis or a spine"):
            realize(scene)

    def test_diagonal_point_stays_null(self):
        source = FormSpec(3, 2, Convention.DIAGONAL)
        scene = Scene(
            form=Convention.DIAGONAL,
            objects=[PointObject(id="p", vector=[1.0, 0.0, 0.0, 1.0, 0.0])],
        )
        point = realize(scene).points["p"]
        back = np.linalg.solve(intertwiner(source, EIN_21), point.rep)
        assert abs(source.quadratic(back)) < 1e-12
