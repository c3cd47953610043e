import pytest

from bruhatkit.enumerator import build_order_cache


@pytest.fixture(scope="session")
def cache3():
    return build_order_cache(3)


@pytest.fixture(scope="session")
def cache4():
    return build_order_cache(4)


@pytest.fixture(scope="session")
def cache5():
    return build_order_cache(5)


@pytest.fixture(scope="session")
def cache6():
    return build_order_cache(6)
