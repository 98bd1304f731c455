import pytest
from hypothesis import settings

from mixedsums.arith import PrimeModulus
from mixedsums.diophantine import Theta
from mixedsums.weights import WeightFunction

settings.register_profile("ci", derandomize=True, deadline=None)
settings.load_profile("ci")


@pytest.fixture(scope="session")
def pm5():
    return PrimeModulus(5)


@pytest.fixture(scope="session")
def pm7():
    return PrimeModulus(7)


@pytest.fixture(scope="session")
def pm101():
    return PrimeModulus(101)


@pytest.fixture(scope="session")
def theta_sqrt2():
    return Theta.sqrt(2)


@pytest.fixture(scope="session")
def theta_golden():
    # (sqrt(5) - 1) / 2, the golden rotation
    return Theta.quadratic(-1, 1, 5, 2)


@pytest.fixture(scope="session")
def bump():
    return WeightFunction.bump()


@pytest.fixture(scope="session")
def flat():
    return WeightFunction.flat()
