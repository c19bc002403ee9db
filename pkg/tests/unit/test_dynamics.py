from __future__ import annotations

import logging

import numpy as np
import pytest
from scipy.linalg import expm

from eingeom.dynamics import (
    Distortion,
    DomainSpace,
    GroupKind,
    LimitKind,
    RemovedKind,
    cartan_a,
    cartan_a_prime,
    classify_distortion,
    classify_powers,
    exponents,
    exponents_so_to_sp,
    exponents_sp_to_so,
    flag_limits,
    kak,
    limit_sets_ein,
    powers,
    properness_domain,
    reduced_words,
    singular_limit,
    word_label,
    word_matrix,
)
from eingeom.einstein import ConformalTransform, EinPoint, Photon
from eingeom.errors import (
    DistortionClassError,
    NoEscapeError,
    NonConvergentError,
    NotInGroupError,
)
from eingeom.forms import EIN_21, W0_FORM, intertwiner
from eingeom.linalg import projective_distance
from eingeom.sympl4 import J, Lagrangian, lagrangian_to_point, sp_to_so_group

E = np.eye(4)


def _elliptic(angle: float) -> np.ndarray:
    c, s = np.cos(angle), np.sin(angle)
    g = np.eye(4)
    g[:2, :2] = [[c, -s], [s, c]]
    return g


def _in_ein21(g: ConformalTransform) -> ConformalTransform:
    t = intertwiner(W0_FORM, EIN_21)
    return ConformalTransform(t @ g.matrix @ np.linalg.inv(t), EIN_21)


def _random_compact(rng: np.random.Generator) -> np.ndarray:
    # antisymmetric generators commuting with J exponentiate into Sp(4,R) ∩ O(4)
    x = rng.normal(size=(4, 4))
    x = x - x.T
    return expm((x - J @ x @ J) / 2.0)


def _random_null(rng: np.random.Generator) -> EinPoint:
    # (x1, x2, x3, x4, x5) with 2 x1 x5 + 2 x2 x4 + x3^2 = 0
    x1, x2, x4, x5 = rng.normal(size=4)
    if x1 * x5 + x2 * x4 > 0:
        x4, x5 = -x4, -x5
    x3 = np.sqrt(-2.0 * (x1 * x5 + x2 * x4))
    return EinPoint(np.array([x1, x2, x3, x4, x5]), W0_FORM)


class TestExponents:
    def test_conversion_round_trip(self):
        assert exponents_sp_to_so(1.0, 2.0) == (3.0, 1.0)
        assert exponents_so_to_sp(3.0, 1.0) == (1.0, 2.0)

    def test_exponents_of_a_cartan_element(self):
        rec = exponents(cartan_a(1.0, 2.0))
        assert np.isclose(rec.alpha1, 1.0)
        assert np.isclose(rec.alpha2, 2.0)
        assert np.isclose(rec.a1, 3.0)
        assert np.isclose(rec.a2, 1.0)

    def test_exponents_agree_across_the_homomorphism(self):
        rec = exponents(sp_to_so_group(cartan_a(0.5, 1.5)))
        assert np.isclose(rec.a1, 2.0)
        assert np.isclose(rec.a2, 1.0)
        assert np.isclose(rec.alpha1, 0.5)


class TestKAK:
    def test_cartan_element(self):
        g = cartan_a(1.0, 2.0)
        decomp = kak(g)
        assert decomp.group is GroupKind.SP4
        assert np.allclose(decomp.exponents, (1.0, 2.0))
        assert np.allclose(decomp.reconstruct(), g)

    def test_compact_factors_are_orthogonal(self):
        g = _elliptic(0.3) @ cartan_a(0.4, 1.1) @ _elliptic(-1.2)
        decomp = kak(g)
        for k in (decomp.k, decomp.k_prime):
            assert np.allclose(k @ k.T, np.eye(4), atol=1e-9)
        assert np.allclose(decomp.exponents, (0.4, 1.1))
        assert np.allclose(decomp.reconstruct(), g, atol=1e-9)

    def test_so32_cartan_element(self):
        decomp = kak(cartan_a_prime(3.0, 1.0), GroupKind.SO32)
        assert np.allclose(decomp.exponents, (3.0, 1.0))
        assert np.allclose(decomp.reconstruct(), cartan_a_prime(3.0, 1.0), atol=1e-9)

    def test_so32_of_the_image(self):
        image = _in_ein21(sp_to_so_group(cartan_a(1.0, 2.0)))
        decomp = kak(image, "so32")
        assert np.allclose(decomp.exponents, (3.0, 1.0))

    def test_random_compact_factors_sp4(self):
        rng = np.random.default_rng(11)
        for _ in range(20):
            g = _random_compact(rng) @ cartan_a(0.3, 1.7) @ _random_compact(rng)
            decomp = kak(g)
            assert np.allclose(decomp.exponents, (0.3, 1.7), atol=1e-8)
            assert np.allclose(decomp.reconstruct(), g, atol=1e-8)

    def test_random_compact_factors_so32(self):
        rng = np.random.default_rng(12)
        for _ in range(20):
            k1 = sp_to_so_group(_random_compact(rng)).matrix
            k2 = sp_to_so_group(_random_compact(rng)).matrix
            g = k1 @ cartan_a_prime(1.7, 0.3) @ k2
            decomp = kak(g, GroupKind.SO32)
            assert np.allclose(decomp.exponents, (1.7, 0.3), atol=1e-8)
            assert np.allclose(decomp.reconstruct(), g, atol=1e-8)

    def test_rejects_non_symplectic(self):
        with pytest.raises(NotInGroupError):
            kak(np.diag([2.0, 1.0, 1.0, 1.0]))


class TestDistortion:
    @pytest.mark.parametrize(
        ("alphas", "expected"),
        [
            ((0.0, 1.0), Distortion.BALANCED),
            ((1.0, 1.0), Distortion.BOUNDED),
            ((1.0, 2.0), Distortion.MIXED),
        ],
    )
    def test_cartan_powers(self, alphas, expected):
        assert classify_powers(cartan_a(*alphas)).distortion is expected

    def test_elliptic_powers_do_not_escape(self):
        assert classify_powers(_elliptic(0.7)).distortion is Distortion.NONE

    def test_class_is_invariant_under_the_homomorphism(self):
        for alphas in ((0.0, 1.0), (1.0, 1.0), (1.0, 2.0)):
            sp = classify_powers(cartan_a(*alphas)).distortion
            so = classify_powers(_in_ein21(sp_to_so_group(cartan_a(*alphas)))).distortion
            assert sp is so

    def test_explicit_sequence(self):
        report = classify_distortion(powers(cartan_a(1.0, 2.0), 12))
        assert report.distortion is Distortion.MIXED
        assert len(report.trace) == 12
        assert np.isclose(report.last.alpha2, 24.0)

    def test_empty_sequence(self):
        with pytest.raises(ValueError, match="empty"):
            classify_distortion([])

    def test_short_trace_warns(self, caplog):
        with caplog.at_level(logging.WARNING, logger="eingeom.dynamics"):
            classify_distortion(powers(cartan_a(1.0, 2.0), 3))
        assert "only 3" in caplog.text

    def test_rejects_non_symplectic(self):
        with pytest.raises(NotInGroupError):
            classify_powers(np.diag([2.0, 1.0, 1.0, 1.0]))


class TestSingularLimit:
    def test_rank_one_limit(self):
        limit = singular_limit(powers(cartan_a(1.0, 2.0), 30))
        assert limit.rank == 1
        assert limit.kernel.shape == (4, 3)
        assert projective_distance(limit.image[:, 0], E[2]) < 1e-9

    def test_bounded_sequence(self):
        with pytest.raises(NoEscapeError):
            singular_limit(powers(_elliptic(0.7), 20))

    def test_rotating_sequence(self):
        seq = []
        for n in range(1, 21):
            m = np.eye(4)
            m[:2, :2] = np.exp(n) * _elliptic(float(n))[:2, :2]
            seq.append(m)
        with pytest.raises(NonConvergentError):
            singular_limit(seq)


class TestEinLimitSets:
    def test_mixed_sequence(self):
        g = sp_to_so_group(cartan_a(1.0, 2.0))
        sets = limit_sets_ein(g)
        assert sets.kind is LimitKind.POINT_LIGHTCONE
        assert sets.distortion is Distortion.MIXED
        assert sets.target_photon is not None
        assert sets.target_photon.contains(sets.target)
        assert sets.target.transformed(g) == sets.target
        assert sets.source.transformed(g) == sets.source

    def test_generic_points_are_attracted(self):
        g = sp_to_so_group(cartan_a(1.0, 2.0))
        sets = limit_sets_ein(g)
        rng = np.random.default_rng(41)
        g20 = g.power(20)
        for _ in range(5):
            x = _random_null(rng)
            assert projective_distance(g20.apply(x).rep, sets.target.rep) < 1e-6

    def test_balanced_sequence_has_photons(self):
        g = sp_to_so_group(cartan_a(0.0, 1.0))
        sets = limit_sets_ein(g)
        assert sets.kind is LimitKind.PHOTONS
        assert isinstance(sets.target, Photon)
        assert sets.target.transformed(g) == sets.target

    @pytest.mark.parametrize("a", [0.5, 1.0, 2.0])
    def test_bounded_sequence_has_no_photons(self, a):
        sets = limit_sets_ein(_in_ein21(sp_to_so_group(cartan_a(a, a))))
        assert sets.distortion is Distortion.BOUNDED
        assert sets.kind is LimitKind.POINT_LIGHTCONE
        assert isinstance(sets.source, EinPoint)
        assert isinstance(sets.target, EinPoint)
        assert sets.form == EIN_21
        assert sets.target_photon is None

    def test_no_escape(self):
        with pytest.raises(DistortionClassError):
            limit_sets_ein(sp_to_so_group(_elliptic(0.4)))


class TestFlagLimits:
    def test_limit_flag(self):
        limits = flag_limits(cartan_a(1.0, 2.0))
        expected = lagrangian_to_point(Lagrangian(np.column_stack([E[0], E[2]])))
        assert limits.q_plus.point == expected
        assert projective_distance(limits.repelling_line, E[3]) < 1e-9

    def test_basin(self):
        limits = flag_limits(cartan_a(1.0, 2.0))
        lag = Lagrangian(np.column_stack([E[0], E[2]]))
        assert limits.in_basin(E[0] + E[2] + E[3], lag)
        assert not limits.in_basin(E[0], lag)

    def test_needs_mixed(self):
        with pytest.raises(DistortionClassError, match="mixed"):
            flag_limits(cartan_a(0.0, 1.0))


class TestWords:
    def test_counts(self):
        assert len(list(reduced_words(2, 2))) == 16
        assert len(list(reduced_words(3, 2, involutive=True))) == 9

    def test_words_are_reduced(self):
        for word in reduced_words(3, 3, involutive=True):
            assert all(a != b for a, b in zip(word, word[1:], strict=False))

    def test_labels(self):
        assert word_label(()) == "e"
        assert word_label((0, -2)) == "g0 g1^-1"

    def test_word_matrix(self):
        g = cartan_a(1.0, 2.0)
        assert np.allclose(word_matrix([g], (0, -1)), np.eye(4))
        assert np.allclose(word_matrix([g], (0, 0)), g @ g)


class TestProperDomain:
    def test_mixed_generator_removes_photons(self):
        domain = properness_domain([sp_to_so_group(cartan_a(1.0, 2.0))], word_length=2)
        assert len(domain.records) == 4
        assert domain.first_kind
        assert {o.kind for o in domain.removed} == {RemovedKind.PHOTON}
        assert list(domain.table().columns) == [
            "word",
            "distortion",
            "alpha1",
            "alpha2",
            "a1",
            "a2",
            "removed",
        ]

    def test_removed_points_are_excluded(self):
        domain = properness_domain([sp_to_so_group(cartan_a(1.0, 2.0))], word_length=1)
        photon = domain.removed[0]
        assert not domain.contains(photon.basis[:, 0])

    def test_bounded_generator_is_not_first_kind(self):
        domain = properness_domain([sp_to_so_group(cartan_a(1.0, 1.0))], word_length=1)
        assert not domain.first_kind
        assert {o.kind for o in domain.removed} == {RemovedKind.LIGHTCONE}

    def test_projv_domains(self):
        balanced = properness_domain([cartan_a(0.0, 1.0)], 1, DomainSpace.PROJ_V)
        mixed = properness_domain([cartan_a(1.0, 2.0)], 1, "projv")
        assert {o.kind for o in balanced.removed} == {RemovedKind.HYPERPLANE}
        assert {o.kind for o in mixed.removed} == {RemovedKind.CONTACT_LINE}

    def test_projr32_domain(self):
        domain = properness_domain([cartan_a(1.0, 2.0)], 1, DomainSpace.PROJ_R32_MINUS_EIN)
        assert {o.kind for o in domain.removed} == {RemovedKind.SUBSPACE}

    def test_workers_do_not_change_the_result(self):
        gens = [sp_to_so_group(cartan_a(1.0, 2.0)), sp_to_so_group(_elliptic(0.5))]
        serial = properness_domain(gens, word_length=2)
        threaded = properness_domain(gens, word_length=2, workers=3)
        assert serial.table().equals(threaded.table())

    def test_argument_errors(self):
        with pytest.raises(ValueError, match="at least one"):
            properness_domain([])
        with pytest.raises(ValueError, match="positive"):
            properness_domain([cartan_a(1.0, 2.0)], word_length=0)
        with pytest.raises(NotInGroupError):
            properness_domain([np.diag([2.0, 1.0, 1.0, 1.0])], 1, DomainSpace.PROJ_V)
