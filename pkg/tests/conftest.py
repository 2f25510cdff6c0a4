import numpy as np
import pytest
from hypothesis import settings

from ermakov_lab.validation import all_cases, catalog_cases


def _ids(cases):
    return [m.variant for m, _ in cases]


# fixed example sequence so repeated runs are identical
settings.register_profile("repro", derandomize=True, deadline=None)
settings.load_profile("repro")

CATALOG_CASES = catalog_cases()
ALL_CASES = all_cases()


@pytest.fixture(params=CATALOG_CASES, ids=_ids(CATALOG_CASES))
def catalog_case(request):
    return request.param


@pytest.fixture(params=ALL_CASES, ids=_ids(ALL_CASES))
def any_case(request):
    return request.param


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def pytest_terminal_summary(terminalreporter):
    from test_acceptance import RESULTS

    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for k in sorted(RESULTS):
            terminalreporter.write_line(RESULTS[k])
