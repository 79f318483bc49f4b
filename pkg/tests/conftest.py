import pytest

from codedagg.commitment import TINY_GROUP, PrimeOrderGroup
from codedagg.field import PrimeField


def naive_eval(coeffs, x, p):
    """Power-sum evaluation, independent of the Horner code under test."""
    return sum(c * pow(x, k, p) for k, c in enumerate(coeffs)) % p


@pytest.fixture
def F17():
    return PrimeField(17)


@pytest.fixture
def F11():
    return PrimeField(11)


@pytest.fixture
def tiny_group():
    return PrimeOrderGroup(*TINY_GROUP)
