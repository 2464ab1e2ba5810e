import pytest

from ffspectra import field_for


@pytest.fixture(scope="session")
def F4():
    return field_for(2, 2)


@pytest.fixture(scope="session")
def F16():
    return field_for(2, 4)


@pytest.fixture(scope="session")
def F64():
    return field_for(2, 6)


@pytest.fixture(scope="session")
def F81():
    return field_for(3, 4)


@pytest.fixture(scope="session")
def F256():
    return field_for(2, 8)


@pytest.fixture(scope="session")
def F625():
    return field_for(5, 4)


@pytest.fixture(scope="session")
def F4096():
    return field_for(2, 12)


@pytest.fixture(scope="session")
def F14641():
    return field_for(11, 4)
