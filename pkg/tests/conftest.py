import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

import oracles  # noqa: E402
from skmaass.classify import ClassifierConfig  # noqa: E402
from skmaass.lift import SkContext  # noqa: E402


@pytest.fixture(scope="session")
def oracle_a():
    """Oracle q-expansions a(0..120) for each supported weight."""
    return {k: oracles.eigenform(k, 120) for k in (10, 12, 14)}


@pytest.fixture(scope="session")
def ctx10():
    return SkContext.build(10, N=2000, prime_limit=5000)


@pytest.fixture(scope="session")
def small_ctx():
    return {k: SkContext.build(k, N=300) for k in (10, 12, 14)}


@pytest.fixture
def cfg():
    return ClassifierConfig()
