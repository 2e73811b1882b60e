import pytest

from src.scalars.scalars import Ring
from src.finalg.finalg import matrix_algebra, truncated_polynomial


@pytest.fixture
def F5():
    return Ring.prime_field(5)


@pytest.fixture
def F7():
    return Ring.prime_field(7)


@pytest.fixture
def Q():
    return Ring.rationals()


@pytest.fixture
def m2_f5(F5):
    return matrix_algebra(F5, 2)


@pytest.fixture
def sqrt2_f5(F5):
    """k[x]/(x^2 - 2), a field extension of GF(5)."""
    return truncated_polynomial(F5, [2, 0])
