"""Shared generators for the test suite.

The "tame" generators build barycentric instances whose support points are
well separated (pairwise gaps of at least ~8) with weights of magnitude in
[1, 2] and data values near 1.  On such instances the general barycentric
formulas are well conditioned, so equivalence oracles can run at tight
tolerances without interference from cancellation.
"""

import numpy as np
import pytest

from aaalqo import (
    BarycentricLqo,
    conjugate_close,
    log_space_axis,
    random_lqo,
    sample_lqo,
)


def tame_bary(n, seed, complex_support=False):
    """Well-separated support, moderate weights, data near 1."""
    rng = np.random.default_rng(seed)
    xi = 10.0 * (np.arange(1, n + 1) + rng.uniform(0.0, 0.3, n))
    xi = xi.astype(complex)
    if complex_support:
        xi = xi + 1j * rng.uniform(-1.0, 1.0, n)
    w = rng.uniform(1.0, 2.0, n) * np.exp(2j * np.pi * rng.uniform(size=n))
    h = 1.0 + 0.25 * (rng.normal(size=n) + 1j * rng.normal(size=n))
    hmat = 1.0 + 0.25 * (
        rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    )
    return BarycentricLqo(xi, w, h, hmat)


def random_bary(n, seed):
    """Unstructured complex instance for round-trip and algebra tests."""
    rng = np.random.default_rng(seed)
    xi = rng.normal(size=n) + 1j * rng.normal(size=n)
    w = rng.normal(size=n) + 1j * rng.normal(size=n)
    w += np.where(np.abs(w) < 0.1, 0.5, 0.0)
    h = rng.normal(size=n) + 1j * rng.normal(size=n)
    hmat = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    return BarycentricLqo(xi, w, h, hmat)


def make_samples(order, seed, m=20, c_zero=False):
    """Conjugate-closed samples of a random stable real generator."""
    model = random_lqo(order, seed, c_zero=c_zero)
    points, pairing = conjugate_close(log_space_axis(-1.0, 2.0, m))
    return model, sample_lqo(model, points, pairing=pairing)


@pytest.fixture
def rng():
    return np.random.default_rng(0)
