import pytest

from optrns.rns import validate_moduli

PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23)


@pytest.fixture
def m3():
    return validate_moduli([11, 19, 23])
