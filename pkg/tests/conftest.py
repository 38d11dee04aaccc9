"""Common test fixtures and configuration."""

from fractions import Fraction
import random

from hypothesis import HealthCheck, settings
import pytest

from superprolong.cache import ScopedCache
from superprolong.liesuper import build_gamma
from superprolong.roots import ParabolicSpec, graded_algebra
from superprolong.scalars import RationalField, default_field, generic_field
from superprolong.workbench import Workbench

settings.register_profile(
    "superprolong",
    derandomize=True,
    deadline=None,
    max_examples=40,
    suppress_health_check=[HealthCheck.function_scoped_fixture],
)
settings.load_profile("superprolong")

# One representative per parabolic class
REPRESENTATIVES = ("p1I", "p2I", "p12I", "p23I", "p123I", "p123IV")


@pytest.fixture(scope="session")
def field():
    """Q(a)."""
    return default_field()


@pytest.fixture(scope="session")
def generic():
    """Q(s1, s2)."""
    return generic_field()


@pytest.fixture(params=[Fraction(2), Fraction(-3, 5), Fraction(7, 3)], ids=["a=2", "a=-3/5", "a=7/3"])
def rational_field(request):
    """Q at a sample value of a off {0, -1}."""
    return RationalField({"a": request.param})


@pytest.fixture(scope="session")
def gamma(field):
    """Gamma(-1-a, 1, a) over Q(a)."""
    return build_gamma(field)


@pytest.fixture(scope="session")
def graded(gamma):
    """Graded Gamma for the class representatives, built lazily."""
    cache = {}

    def get(label, opposite=False):
        key = (label, opposite)
        if key not in cache:
            cache[key] = graded_algebra(gamma, ParabolicSpec.parse(label), opposite=opposite)
        return cache[key]

    return get


@pytest.fixture(scope="session")
def workbench(field):
    """Shared workbench over Q(a) so expensive results are computed once."""
    return Workbench(field, ScopedCache())


@pytest.fixture
def rng():
    """Seeded random generator."""
    return random.Random(20240601)
