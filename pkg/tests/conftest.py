import pytest

from platoonshare import Composition, Fleet, SavingsParams


@pytest.fixture
def params():
    """Default desk-scale setting: 0.07 / 0.048 EUR/km over 300 km."""
    return SavingsParams(epsilon_f=0.07, epsilon_e=0.048, distance=300.0)


@pytest.fixture
def comp23():
    return Composition(2, 3)


@pytest.fixture
def fleet23(comp23):
    return Fleet.from_composition(comp23)
