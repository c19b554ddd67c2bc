import os

import numpy as np
import pytest

from sah.polysys import AffinePoly, AffineSystem, DegreePattern, HomoPoly

FIXTURES = os.path.join(os.path.dirname(__file__), "fixtures")


def fixture_path(name: str) -> str:
    return os.path.join(FIXTURES, name)


def two_points_system() -> AffineSystem:
    """F = (x^2 - 1) in R^1; solution set {-1, +1}."""
    p = AffinePoly(1, {(2,): 1.0, (0,): -1.0})
    return AffineSystem(1, (p,), (), (), DegreePattern((2,), 1, 0))


def circle_system() -> AffineSystem:
    p = AffinePoly(2, {(2, 0): 1.0, (0, 2): 1.0, (0, 0): -1.0})
    return AffineSystem(2, (p,), (), (), DegreePattern((2,), 1, 0))


def disk_system(strict: bool = False) -> AffineSystem:
    g = AffinePoly(2, {(0, 0): 1.0, (2, 0): -1.0, (0, 2): -1.0})
    return AffineSystem(2, (), (g,), (strict,), DegreePattern((2,), 0, 1))


def annulus_system() -> AffineSystem:
    g1 = AffinePoly(2, {(2, 0): 1.0, (0, 2): 1.0, (0, 0): -1.0})
    g2 = AffinePoly(2, {(0, 0): 4.0, (2, 0): -1.0, (0, 2): -1.0})
    return AffineSystem(2, (), (g1, g2), (False, False),
                        DegreePattern((2, 2), 0, 2))


def random_homo_poly(rng: np.random.Generator, num_vars: int,
                     degree: int) -> HomoPoly:
    """Dense random homogeneous polynomial with standard normal coefficients."""
    import itertools

    terms = {}
    for exps in itertools.product(range(degree + 1), repeat=num_vars):
        if sum(exps) == degree:
            terms[exps] = float(rng.standard_normal())
    return HomoPoly(num_vars, degree, terms)


def random_unit(rng: np.random.Generator, dim: int) -> np.ndarray:
    v = rng.standard_normal(dim)
    return v / np.linalg.norm(v)


@pytest.fixture
def rng():
    return np.random.default_rng(20260823)
