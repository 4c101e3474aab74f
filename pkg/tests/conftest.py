import functools

import pytest

from hyperdec.complexes import build_hypercubic_torus


@functools.lru_cache(maxsize=None)
def _torus(d: int, L: int):
    return build_hypercubic_torus(d, L)


@pytest.fixture(scope="session")
def torus():
    """Factory fixture; complexes are cached across the whole session."""
    return _torus
