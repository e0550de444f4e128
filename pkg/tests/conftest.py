import numpy as np
import pytest

from skewquiver import backend
from skewquiver.exactfield import FieldSpec
from skewquiver.fixtures import a3_indecomposables, a3_sigma


@pytest.fixture(params=backend.available())
def kernel_backend(request):
    """Run the test once per available elimination backend."""
    previous = backend.NAME
    backend.use(request.param)
    yield request.param
    backend.use(previous)


@pytest.fixture
def F101():
    return FieldSpec(101)


@pytest.fixture
def a3(F101):
    return a3_sigma(), a3_indecomposables(F101)


@pytest.fixture
def rng():
    return np.random.Generator(np.random.Philox(12345))
