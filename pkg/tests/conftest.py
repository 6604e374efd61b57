from functools import lru_cache

import numpy as np
import pytest

from entguess import DensityMatrix, SeedSpec, max_entangled, mub_family, random_density


@lru_cache(maxsize=None)
def cached_mubs(d):
    return mub_family(d)


@pytest.fixture
def mubs():
    return cached_mubs


def max_entangled_state(d) -> DensityMatrix:
    return DensityMatrix.from_pure(max_entangled(d), (d, d))


def random_bipartite(d_a, d_b, rank, seed, stream=0) -> DensityMatrix:
    return random_density(d_a * d_b, rank, SeedSpec(seed, stream), dims=(d_a, d_b))


def hermitian(gen, d) -> np.ndarray:
    m = gen.normal(size=(d, d)) + 1j * gen.normal(size=(d, d))
    return m + m.conj().T


def psd(gen, d, rank=None) -> np.ndarray:
    g = gen.normal(size=(d, rank or d)) + 1j * gen.normal(size=(d, rank or d))
    return g @ g.conj().T
