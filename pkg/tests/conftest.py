import pytest

from memwave import ExponentialKernel


@pytest.fixture
def k1() -> ExponentialKernel:
    return ExponentialKernel(c=[1.0], gamma=[1.0])


@pytest.fixture
def k2() -> ExponentialKernel:
    return ExponentialKernel(c=[1.0, 2.0], gamma=[1.0, 3.0])


@pytest.fixture
def k3() -> ExponentialKernel:
    return ExponentialKernel(c=[0.5, 1.0, 2.0], gamma=[1.0, 2.0, 5.0])
