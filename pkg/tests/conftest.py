import pytest

from nc_forge.sieve import build_tables


@pytest.fixture(scope="session")
def tables_small():
    """Tables to 10^4: enough for the worked examples."""
    return build_tables(10_000)


@pytest.fixture(scope="session")
def tables_1e6():
    return build_tables(10**6)


@pytest.fixture(scope="session")
def tables_1e7():
    return build_tables(10**7)
