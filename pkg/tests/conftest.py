import os

# Every constructed curve point re-checks the curve equation during tests.
os.environ.setdefault("FSETS_CHECK_CURVE", "1")

import pytest  # noqa: E402
from hypothesis import settings  # noqa: E402

settings.register_profile("default", max_examples=200, deadline=None, derandomize=True)
settings.load_profile("default")


@pytest.fixture(scope="session")
def ex1():
    from fsets.intersector import example1_setup

    return example1_setup()


@pytest.fixture(scope="session")
def ex2():
    from fsets.intersector import example2_setup

    return example2_setup()
