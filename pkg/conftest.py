import os

import pytest

from config import get_settings

collect_ignore = ["examples"]


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: extended suites, run with SOCKSORT_RUN_SLOW=1")


def pytest_collection_modifyitems(config, items):
    if os.getenv("SOCKSORT_RUN_SLOW") == "1":
        return
    skip_slow = pytest.mark.skip(reason="set SOCKSORT_RUN_SLOW=1 to run")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip_slow)


@pytest.fixture(autouse=True)
def fresh_settings():
    get_settings.cache_clear()
    yield
    get_settings.cache_clear()
