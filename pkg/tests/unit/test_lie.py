from __future__ import annotations

import numpy as np
import pytest
from scipy.linalg import expm

from eingeom.errors import NotInGroupError, WallError
from eingeom.lie import (
    ALPHA,
    BETA,
    ROOT_SYSTEM,
    Root,
    Sp4Element,
    assemble,
    bracket,
    cartan,
    dynamical_quadruple,
    parabolic_basis,
    positive_system,
    root_of,
    roots,
    stabilized_subspaces,
    standard_stem_configuration,
    weyl_group_sp4,
    weyl_symmetries,
)
from eingeom.linalg import projective_distance
from eingeom.sympl4 import J, in_sp4_algebra, is_symplectic


class TestCoordinates:
    def test_basis_lies_in_the_algebra(self):
        basis = Sp4Element.basis()
        assert len(basis) == 10
        for element in basis:
            assert in_sp4_algebra(element.matrix())

    def test_from_matrix_round_trip(self):
        coords = Sp4Element(a=1.0, b=-2.0, a12=0.5, r11=3.0, r22=-1.0, b21=4.0)
        assert Sp4Element.from_matrix(coords.matrix()) == coords

    def test_from_matrix_rejects_outside_the_algebra(self):
        with pytest.raises(NotInGroupError):
            Sp4Element.from_matrix(np.eye(4))

    def test_assemble(self):
        assert not np.any(assemble(Sp4Element()))
        assert np.array_equal(assemble(Sp4Element(a=1.0, b=2.0)), cartan(1.0, 2.0))

    def test_random_coordinates_assemble_into_the_algebra(self):
        rng = np.random.default_rng(3)
        for _ in range(20):
            m = assemble(Sp4Element(*rng.normal(size=10)))
            assert np.allclose(m.T @ J + J @ m, 0.0, atol=1e-12)

    def test_bracket_is_antisymmetric(self):
        x, y = Sp4Element(a12=1.0).matrix(), Sp4Element(r11=1.0).matrix()
        assert np.allclose(bracket(x, y), -bracket(y, x))
        assert in_sp4_algebra(bracket(x, y))


class TestRoots:
    def test_eight_roots_four_long(self):
        assert len(ROOT_SYSTEM) == 8
        assert sum(r.is_long for r in ROOT_SYSTEM) == 4

    def test_root_vectors_are_eigenvectors(self):
        h = cartan(0.7, -1.3)
        for space in roots():
            x = space.generator
            assert np.allclose(bracket(h, x), space.root((0.7, -1.3)) * x)
            assert root_of(x) == space.root

    def test_cartan_is_not_a_root_vector(self):
        assert root_of(cartan(1.0, 2.0)) is None
        assert root_of(np.zeros((4, 4))) is None
        assert root_of(Sp4Element(a12=1.0, b12=1.0).matrix()) is None

    def test_rejects_non_roots(self):
        with pytest.raises(ValueError, match="not a root"):
            Root((1, 0))

    def test_negation(self):
        assert -ALPHA == Root((-2, 0))
        assert (-BETA).slot == "r11"


class TestPositiveSystem:
    def test_default_functional(self):
        system = positive_system((1.0, 2.0))
        assert set(system.simple) == {ALPHA, BETA}
        assert system.positive[0] == BETA
        assert set(system.positive) == {BETA, ALPHA, Root((1, 1)), Root((0, 2))}

    def test_wall(self):
        with pytest.raises(WallError):
            positive_system((1.0, 1.0))


class TestParabolics:
    def test_borel_stabilizes_an_isotropic_flag(self):
        basis = parabolic_basis()
        assert len(basis) == 6
        flag = stabilized_subspaces(basis)
        assert [s.shape[1] for s in flag] == [1, 2, 3]
        assert np.array_equal(flag[0][:, 0], [0.0, 0.0, 1.0, 0.0])

    def test_line_stabilizer(self):
        basis = parabolic_basis([-ALPHA])
        assert len(basis) == 7
        assert [s.shape[1] for s in stabilized_subspaces(basis)] == [1, 3]

    def test_lagrangian_stabilizer(self):
        basis = parabolic_basis([-BETA])
        subspaces = stabilized_subspaces(basis)
        assert len(subspaces) == 1
        assert subspaces[0].shape == (4, 2)

    def test_full_algebra(self):
        basis = parabolic_basis([-ALPHA, -BETA])
        assert len(basis) == 10
        assert stabilized_subspaces(basis) == []

    def test_rejects_non_simple(self):
        with pytest.raises(ValueError, match="simple"):
            parabolic_basis([Root((-1, -1))])


class TestWeylGroup:
    def test_order_eight(self):
        group = weyl_group_sp4()
        assert len(group) == 8
        assert all(is_symplectic(w) for w in group)

    def test_stem_symmetries_permute_the_points(self):
        cfg = standard_stem_configuration()
        symmetries = weyl_symmetries(cfg)
        assert len(symmetries) == 8
        for sym in symmetries:
            for i, image in enumerate(sym.permutation):
                assert cfg.points[i].transformed(sym.transform) == cfg.points[image]

    def test_stem_adjacency_is_a_four_cycle(self):
        adj = standard_stem_configuration().adjacency()
        assert adj.sum() == 8
        assert not adj[0, 1]
        assert not adj[2, 3]


class TestDynamicalQuadruple:
    def test_standard_basis(self):
        quad = dynamical_quadruple()
        assert np.array_equal(quad.attract, [0.0, 0.0, 1.0, 0.0])
        assert np.array_equal(quad.repel, [0.0, 0.0, 0.0, 1.0])

    def test_rejects_non_symplectic_basis(self):
        with pytest.raises(NotInGroupError):
            dynamical_quadruple(np.diag([2.0, 1.0, 1.0, 1.0]))

    @pytest.mark.parametrize("conjugated", [False, True])
    def test_powers_converge_to_the_quadruple(self, conjugated):
        rng = np.random.default_rng(5)
        frame = np.eye(4)
        if conjugated:
            s = rng.normal(size=(4, 4))
            frame = expm(0.3 * J @ (s + s.T))
        quad = dynamical_quadruple(frame)
        diag = np.exp([1.0, -1.0, 2.0, -2.0])
        step = frame @ np.diag(diag) @ np.linalg.inv(frame)
        for _ in range(50):
            v = rng.normal(size=4)
            for _ in range(60):
                v = step @ v
                v /= np.linalg.norm(v)
            assert projective_distance(v, quad.attract) <= 1e-6

    def test_starts_off_the_attracting_line_converge_to_the_codim1_point(self):
        rng = np.random.default_rng(6)
        s = rng.normal(size=(4, 4))
        frame = expm(0.3 * J @ (s + s.T))
        quad = dynamical_quadruple(frame)
        diag = np.exp([1.0, -1.0, 2.0, -2.0])
        for _ in range(50):
            # frame coordinates with no e3 part stay without one under the powers
            c = rng.normal(size=4)
            c[2] = 0.0
            for _ in range(60):
                c = diag * c
                c /= np.linalg.norm(c)
            assert projective_distance(frame @ c, quad.codim1_attract) <= 1e-6
