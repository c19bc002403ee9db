from __future__ import annotations

import numpy as np
import pytest

from eingeom.crooked import build_crooked, standard_crooked_plane
from eingeom.einstein import (
    ConformalTransform,
    improper_point,
    inversion_matrix,
    minkowski_chart,
    similarity_matrix,
)
from eingeom.errors import (
    DegenerateError,
    FactorizationError,
    NotInGroupError,
    NotInvolutionError,
    NotUltraparallelError,
    PatchError,
    WallsIntersectError,
)
from eingeom.forms import EIN_21, W0_FORM, Subspace
from eingeom.groups import (
    GroupPresentation,
    LinearClass,
    SpacelikeCircle,
    SpineReflection,
    compose_pair,
    example_group,
    factor_triple,
    fundamental_region_contains,
    invariant_line,
    linear_class,
    lorentz_cross,
    maps_halfspace_into,
    orbit,
    properness_certificate,
    region_sides,
    spine_reflection,
    ultraparallel,
)

SQRT2 = np.sqrt(2.0)


@pytest.fixture(scope="module")
def example():
    return example_group()


def _x_axis() -> SpacelikeCircle:
    return SpacelikeCircle.from_spine(np.zeros(3), [1.0, 0.0, 0.0])


class TestSpacelikeCircle:
    def test_from_spine_contains_the_geodesic(self):
        circle = _x_axis()
        assert circle.contains(improper_point())
        assert circle.contains(minkowski_chart([5.0, 0.0, 0.0]))
        assert not circle.contains(minkowski_chart([0.0, 1.0, 0.0]))

    def test_spine_round_trip(self):
        circle = SpacelikeCircle.from_spine([1.0, 2.0, 0.0], [0.0, 1.0, 0.5])
        point, direction = circle.spine()
        assert circle.contains(minkowski_chart(point))
        assert circle.contains(minkowski_chart(point + 3.0 * direction))
        assert np.isclose(direction @ np.diag([1.0, 1.0, -1.0]) @ direction, 1.0)

    def test_spine_needs_the_improper_point(self):
        circle = SpacelikeCircle(Subspace(np.eye(5)[:, :3], EIN_21))
        with pytest.raises(PatchError):
            circle.spine()

    def test_rejects_degenerate_subspace(self):
        with pytest.raises(DegenerateError):
            SpacelikeCircle(Subspace(np.eye(5)[:, [0, 2, 3]], EIN_21))

    def test_points_lie_on_the_circle(self):
        circle = SpacelikeCircle.from_spine([0.0, 1.0, 1.0], [1.0, 1.0, 1.0])
        assert all(circle.contains(p) for p in circle.points(8))


class TestSpineReflection:
    def test_half_turn_about_the_spine(self):
        refl = spine_reflection(_x_axis())
        assert np.allclose(refl.matrix, np.diag([1.0, -1.0, -1.0, 1.0, 1.0]))
        assert refl.transform.is_involution()
        assert refl.transform.time_orientation == -1
        assert refl.transform.determinant_sign == 1

    def test_fixes_its_circle(self):
        circle = SpacelikeCircle.from_spine([1.0, 0.0, 2.0], [0.0, 1.0, 0.3])
        refl = spine_reflection(circle)
        assert circle.transformed(refl.transform).isclose(circle)
        for p in circle.points(5):
            assert p.transformed(refl.transform) == p
        for p in refl.fixed_points:
            assert p.transformed(refl.transform) == p
            assert not circle.contains(p)

    def test_from_matrix(self):
        refl = SpineReflection.from_matrix(np.diag([1.0, -1.0, -1.0, 1.0, 1.0]))
        assert refl.circle.isclose(_x_axis())
        flipped = SpineReflection.from_matrix(-np.diag([1.0, -1.0, -1.0, 1.0, 1.0]))
        assert flipped.transform.determinant_sign == 1

    def test_from_matrix_rejects_other_involutions(self):
        with pytest.raises(NotInvolutionError):
            SpineReflection.from_matrix(inversion_matrix().matrix)
        with pytest.raises(NotInvolutionError):
            SpineReflection.from_matrix(np.diag([1.0, 1.0, -1.0, 1.0, 1.0]))


class TestUltraparallel:
    def test_example_circles(self, example):
        first, second, third = example.circles
        assert ultraparallel(first, second)
        assert ultraparallel(second, third)
        assert ultraparallel(third, first)

    def test_crossing_spines(self):
        other = SpacelikeCircle.from_spine(np.zeros(3), [0.0, 1.0, 0.0])
        assert not ultraparallel(_x_axis(), other)

    def test_coincident_circles(self):
        with pytest.raises(NotUltraparallelError, match="coincide"):
            ultraparallel(_x_axis(), _x_axis())

    def test_circles_without_a_common_point(self):
        other = SpacelikeCircle(Subspace(np.eye(5)[:, :3], EIN_21))
        with pytest.raises(NotUltraparallelError, match="no point"):
            ultraparallel(_x_axis(), other)


class TestCompositions:
    def test_linear_classes(self):
        c, s = np.cos(0.4), np.sin(0.4)
        rotation = np.array([[c, -s, 0.0], [s, c, 0.0], [0.0, 0.0, 1.0]])
        ch, sh = np.cosh(0.4), np.sinh(0.4)
        boost = np.array([[ch, 0.0, sh], [0.0, 1.0, 0.0], [sh, 0.0, ch]])
        assert linear_class(np.eye(3)).kind is None
        assert linear_class(rotation).kind is LinearClass.ELLIPTIC
        assert linear_class(boost).hyperbolic

    def test_example_pairs_are_hyperbolic(self, example):
        i1, i2, i3 = example.reflections
        for first, second in ((i1, i2), (i2, i3), (i3, i1)):
            gamma, report = compose_pair(first, second)
            assert report.hyperbolic
            assert gamma.isclose(second.transform @ first.transform)

    def test_invariant_line(self, example):
        i1, i2, _ = example.reflections
        gamma, _ = compose_pair(i1, i2)
        line = invariant_line(gamma)
        image = gamma.apply(minkowski_chart(line.point)).rep
        moved = image[:3] / image[4] - line.point
        assert np.allclose(np.cross(moved, line.direction), 0.0, atol=1e-8)

    def test_factor_triple(self, example):
        i1, i2, i3 = (r.transform for r in example.reflections)
        f1, f2, f3 = factor_triple((i1 @ i2, i2 @ i3, i3 @ i1))
        assert f1.transform.isclose(i1, 1e-6)
        assert f2.transform.isclose(i2, 1e-6)
        assert f3.transform.isclose(i3, 1e-6)

    def test_factor_triple_needs_identity_product(self, example):
        i1, i2, _ = (r.transform for r in example.reflections)
        with pytest.raises(FactorizationError, match="identity"):
            factor_triple((i1 @ i2, i1 @ i2, i1 @ i2))

    def test_lorentz_cross(self):
        rng = np.random.default_rng(61)
        u, v, x = rng.normal(size=(3, 3))
        n = lorentz_cross(u, v)
        assert np.isclose(n @ np.diag([1.0, 1.0, -1.0]) @ x, np.linalg.det(np.array([u, v, x])))


class TestPresentation:
    def test_words(self, example):
        group = example.presentation
        assert group.rank == 3
        assert group.involutive
        assert len(group.words(2)) == 9
        assert group.element((0,)).isclose(example.reflections[0].transform)

    def test_rejects_empty(self):
        with pytest.raises(ValueError, match="at least one"):
            GroupPresentation(())

    def test_rejects_other_forms(self):
        with pytest.raises(NotInGroupError):
            GroupPresentation((ConformalTransform(np.eye(5), W0_FORM),))

    def test_rejects_non_involutions(self):
        shift = similarity_matrix(1.0, np.eye(3), [1.0, 0.0, 0.0])
        with pytest.raises(NotInvolutionError):
            GroupPresentation((shift,), involutive=True)

    def test_orbit_of_a_circle(self, example):
        first = example.circles[0]
        assert len(orbit(first, example.presentation, 0)) == 1
        assert len(orbit(first, example.presentation, 1)) == 3

    def test_improper_point_is_fixed(self, example):
        assert len(orbit(improper_point(), example.presentation, 3)) == 1

    def test_orbit_length(self, example):
        with pytest.raises(ValueError, match="non-negative"):
            orbit(improper_point(), example.presentation, -1)


class TestFundamentalRegion:
    def test_region_sides(self, example):
        sides = region_sides(list(example.planes))
        assert len(sides) == 3
        assert len(set(sides)) == 1

    def test_region_contains(self, example):
        planes = list(example.planes)
        assert fundamental_region_contains(planes, [0.0, 0.0, 1.0])
        assert not fundamental_region_contains(planes, [0.0, 2 * SQRT2, 1.0])

    def test_reflection_swaps_the_sides_of_its_wall(self, example):
        plane = example.planes[0]
        inside = region_sides(list(example.planes))[0]
        refl = example.reflections[0].transform
        assert maps_halfspace_into(refl, (plane, -inside), (plane, inside), samples=500)
        identity = ConformalTransform(np.eye(5))
        assert not maps_halfspace_into(identity, (plane, -inside), (plane, inside), samples=500)

    def test_certificate(self, example):
        cert = properness_certificate(list(example.planes), example.presentation, 3, samples=500)
        assert cert.certified
        assert cert.verdict == "certified-to-depth-3"
        assert cert.words == 3 + 6 + 12
        assert cert.offending_word is None

    def test_intersecting_walls(self, example):
        planes = [standard_crooked_plane(), build_crooked(np.zeros(3), [0.0, 1.0, 0.0])]
        with pytest.raises(WallsIntersectError) as info:
            properness_certificate(planes, example.presentation, 1)
        assert info.value.pair == (0, 1)

    def test_example_orientation(self, example):
        assert all(p.orientation == 1 for p in example.planes)
