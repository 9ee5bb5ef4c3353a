import sys
from functools import lru_cache
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from congrank import enumerate_group, modulus


@lru_cache(maxsize=None)
def _table(descriptor: str, n: int, p: int, e: int):
    return enumerate_group(descriptor, n, modulus(p, e))


@pytest.fixture(scope="session")
def table_factory():
    """Cached group tables shared across the whole test session."""
    return _table
