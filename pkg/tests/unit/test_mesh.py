from __future__ import annotations

import numpy as np
import pytest

from eingeom.crooked import closure_strata, standard_crooked_plane
from eingeom.einstein import (
    hypersurface_from_vector,
    improper_point,
    lightcone,
    lightcone_pair_intersection,
    minkowski_chart,
    origin,
)
from eingeom.errors import NotSurfaceError, PatchError
from eingeom.export import MeshMode, export_mesh
from eingeom.export.mesh import Mesh, circle_polyline, lightcone_mesh
from eingeom.groups import SpacelikeCircle

Q = np.diag([1.0, 1.0, -1.0])


def _quadratic(points: np.ndarray) -> np.ndarray:
    return np.einsum("ij,jk,ik->i", points, Q, points)


class TestLightcone:
    def test_resolution(self):
        mesh = lightcone_mesh(origin(), resolution=1000)
        assert abs(len(mesh.vertices) - 1000) <= 20
        assert mesh.face_tags == ["future", "past"]

    def test_vertices_are_null_from_the_vertex(self):
        x0 = np.array([1.0, -2.0, 0.5])
        mesh = export_mesh(minkowski_chart(x0), resolution=400)
        pts = np.array(mesh.vertices) - x0
        assert np.allclose(_quadratic(pts), 0.0, atol=1e-9)

    def test_ideal_vertex(self):
        with pytest.raises(PatchError):
            lightcone_mesh(improper_point())

    def test_hypersurface_lightcone(self):
        mesh = export_mesh(lightcone(origin()), resolution=200)
        assert mesh.face_tags == ["future", "past"]

    def test_spiral(self):
        mesh = export_mesh(origin(), MeshMode.SPIRAL, resolution=200)
        assert abs(len(mesh.vertices) - 200) <= 4
        assert np.all(np.isfinite(np.array(mesh.vertices)))

    def test_spiral_needs_a_lightcone(self):
        with pytest.raises(NotSurfaceError, match="lightcones"):
            export_mesh(standard_crooked_plane(), "spiral")


class TestHypersurfaces:
    def test_one_sheeted(self):
        surface = hypersurface_from_vector([0.0, 0.0, 0.0, -1.0, 1.0])
        mesh = export_mesh(surface, resolution=300)
        assert mesh.face_tags == ["sheet"]
        assert np.allclose(_quadratic(np.array(mesh.vertices)), 1.0)

    def test_two_sheeted(self):
        surface = hypersurface_from_vector([0.0, 0.0, 0.0, 1.0, 1.0])
        mesh = export_mesh(surface, resolution=300)
        assert mesh.face_tags == ["future", "past"]
        assert np.allclose(_quadratic(np.array(mesh.vertices)), -1.0)

    def test_plane(self):
        surface = hypersurface_from_vector([1.0, 0.0, 0.0, 2.0, 0.0])
        pts = np.array(export_mesh(surface, resolution=100).vertices)
        assert np.allclose(pts[:, 0], 1.0)

    def test_circles_are_not_surfaces(self):
        circle = lightcone_pair_intersection(origin(), improper_point())
        with pytest.raises(NotSurfaceError):
            export_mesh(circle)

    def test_unsupported_object(self):
        with pytest.raises(NotSurfaceError, match="cannot mesh"):
            export_mesh(np.zeros(3))


class TestCrookedMeshes:
    def test_faces_and_photons(self):
        mesh = export_mesh(standard_crooked_plane(), resolution=1000)
        assert mesh.face_tags == ["wing1", "wing2", "stem+", "stem-"]
        assert [tag for tag, _ in mesh.lines] == ["phi1+", "phi1-", "phi2+", "phi2-"]
        assert abs(len(mesh.vertices) - 8 - 1000) <= 20

    def test_surface_vertices_lie_on_the_plane(self):
        surface = closure_strata(standard_crooked_plane())
        mesh = export_mesh(surface, resolution=200)
        for v in mesh.vertices:
            assert surface.base.distance(v) < 1e-7

    def test_spine_circle_is_a_line(self):
        circle = SpacelikeCircle.from_spine([0.0, 1.0, 0.0], [1.0, 0.0, 0.0])
        mesh = circle_polyline(circle, resolution=50)
        assert len(mesh.lines) == 1
        pts = np.array(mesh.vertices)
        assert pts.shape == (50, 3)
        assert np.allclose(pts[:, 1:], [1.0, 0.0])


class TestObj:
    def test_format(self):
        mesh = Mesh()
        mesh.add_grid(
            "sq",
            lambda a, b: np.stack([a, b, np.zeros_like(a)], axis=-1),
            np.array([0.0, 1.0]),
            np.array([0.0, 1.0]),
        )
        mesh.add_polyline("edge", np.array([[0.0, 0.0, 0.0], [1.0, 1.0, 1.0]]))
        lines = mesh.to_obj().splitlines()
        assert lines[0] == "# eingeom mesh"
        assert sum(line.startswith("v ") for line in lines) == 6
        assert lines.count("g sq") == 1
        assert [line for line in lines if line.startswith("f ")] == ["f 1 3 4", "f 1 4 2"]
        assert lines[-2:] == ["g edge", "l 5 6"]
