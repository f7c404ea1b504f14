import os

import pytest
from hypothesis import HealthCheck, settings

from rotabasis.models.tensors import SquareMatrix
from rotabasis.services.determinantal import BasisSequence
from rotabasis.services.tensor_algebra import levi_civita_tensor

settings.register_profile(
    "default", max_examples=50, deadline=None, suppress_health_check=[HealthCheck.filter_too_much]
)
settings.register_profile(
    "fast", max_examples=10, deadline=None, suppress_health_check=[HealthCheck.filter_too_much]
)
settings.load_profile(os.getenv("HYPOTHESIS_PROFILE", "default"))


@pytest.fixture
def e2():
    return levi_civita_tensor(2)


@pytest.fixture
def e3():
    return levi_civita_tensor(3)


@pytest.fixture
def identity_bases():
    def make(n):
        return BasisSequence([SquareMatrix.identity(n)] * n)

    return make
