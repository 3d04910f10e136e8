"""Shared fixtures: seeded, certified presentations reused across modules."""

import numpy as np
import pytest

from ulrich_forge.presentation import UlrichPresentation, random_presentation


def seeded_presentation(d: int, r: int, seed: int = 0, p: int = 32003) -> UlrichPresentation:
    rng = np.random.default_rng(np.random.SeedSequence([seed, d, r]))
    return random_presentation(d, r, rng, p=p)


@pytest.fixture(scope="session")
def pres_d2r2():
    return seeded_presentation(2, 2)


@pytest.fixture(scope="session")
def pres_d3r2():
    return seeded_presentation(3, 2)


@pytest.fixture(scope="session")
def pres_d5r2():
    return seeded_presentation(5, 2)


@pytest.fixture(scope="session")
def pres_d7r3():
    return seeded_presentation(7, 3)
