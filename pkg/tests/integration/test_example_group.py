"""The three-circle reflection group end to end: scene file, walls, removed sets and certificate."""

from __future__ import annotations

from itertools import combinations
from pathlib import Path

import numpy as np
import pytest

from eingeom.crooked import closure_strata, disjoint, surface_automorphism
from eingeom.dynamics import Distortion, properness_domain, reduced_words
from eingeom.groups import (
    compose_pair,
    example_group,
    factor_triple,
    maps_halfspace_into,
    properness_certificate,
    region_sides,
    ultraparallel,
)
from eingeom.models import parse_scene, realize

FIXTURE = Path(__file__).parent.parent / "fixtures" / "example_group.json"


@pytest.fixture(scope="module")
def example():
    return example_group()


@pytest.fixture(scope="module")
def scene_objects():
    return realize(parse_scene(FIXTURE))


def test_fixture_matches_the_built_group(example, scene_objects):
    for k, circle in enumerate(example.circles, start=1):
        assert scene_objects.circles[f"c{k}"].isclose(circle)
    for k, plane in enumerate(example.planes, start=1):
        assert scene_objects.planes[f"C{k}"] == plane
    gens = scene_objects.groups["gamma"].generators
    for g, refl in zip(gens, example.reflections, strict=True):
        assert g.isclose(refl.transform)


def test_circles_are_pairwise_ultraparallel(example):
    for first, second in combinations(example.circles, 2):
        assert ultraparallel(first, second)


def test_walls_are_disjoint_with_a_million_samples(example):
    for first, second in combinations(example.planes, 2):
        cert = disjoint(first, second, samples=1_000_000, seed=0)
        assert cert.disjoint
        assert cert.agrees
        assert cert.oracle_samples == 1_000_000


def test_reflections_preserve_their_walls(example):
    for refl, plane in zip(example.reflections, example.planes, strict=True):
        assert surface_automorphism(refl.transform, closure_strata(plane), samples=32)


def test_compositions_are_hyperbolic_and_factor_back(example):
    i1, i2, i3 = example.reflections
    gammas = []
    for first, second in ((i2, i1), (i3, i2), (i1, i3)):
        gamma, report = compose_pair(first, second)
        assert report.hyperbolic
        assert np.isclose(np.prod(report.eigenvalues), 1.0)
        gammas.append(gamma)
    recovered = factor_triple((gammas[0], gammas[1], gammas[2]))
    for got, want in zip(recovered, example.reflections, strict=True):
        assert got.transform.isclose(want.transform, 1e-6)


def test_ping_pong(example):
    planes = list(example.planes)
    sides = region_sides(planes)
    for k, (plane, refl) in enumerate(zip(planes, example.reflections, strict=True)):
        assert maps_halfspace_into(
            refl.transform, (plane, -sides[k]), (plane, sides[k]), samples=1000, seed=k
        )


def test_certificate_to_depth_four(example):
    cert = properness_certificate(list(example.planes), example.presentation, 4, samples=2000)
    assert cert.verdict == "certified-to-depth-4"
    assert cert.words == 3 + 6 + 12 + 24


def test_removed_set_enumeration(example):
    gens = [refl.transform for refl in example.reflections]
    domain = properness_domain(gens, word_length=2, involutive=True)
    words = [record.word for record in domain.records]
    assert words == list(reduced_words(3, 2, involutive=True))
    assert len(words) == 3 + 6
    for record in domain.records:
        assert bool(record.removed) == (record.distortion is not Distortion.NONE)
    threaded = properness_domain(gens, word_length=2, involutive=True, workers=3)
    assert domain.table().equals(threaded.table())
