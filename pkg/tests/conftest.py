import pytest
from hypothesis import settings

settings.register_profile("exact", deadline=None, derandomize=True)
settings.load_profile("exact")

from algebroidkit import catalog
from algebroidkit.poisson import cotangent_algebroid


def valid_algebroids():
    """The nine valid corpus entries, bivectors turned into cotangent algebroids."""
    out = {name: catalog.builders()[name]() for name in catalog.VALID_ALGEBROIDS}
    for name in catalog.VALID_BIVECTORS:
        out[name] = cotangent_algebroid(catalog.builders()[name]())
    return out


VALID = valid_algebroids()
LIE_ALGEBRAS = {k: v for k, v in VALID.items() if v.m == 0}


@pytest.fixture(params=sorted(VALID))
def algebroid(request):
    return VALID[request.param]


@pytest.fixture(params=sorted(LIE_ALGEBRAS))
def lie_alg(request):
    return LIE_ALGEBRAS[request.param]


ACCEPTANCE_LINES = []
SUITE_BUDGET = 60.0


def pytest_configure(config):
    import time
    config._algebroidkit_start = time.perf_counter()


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    import time
    if not ACCEPTANCE_LINES:
        return
    elapsed = time.perf_counter() - config._algebroidkit_start
    terminalreporter.section("acceptance criteria")
    for line in ACCEPTANCE_LINES:
        terminalreporter.write_line(line)
    verdict = "PASS" if elapsed < SUITE_BUDGET else "FAIL"
    terminalreporter.write_line(f"{verdict} criterion 9 (full suite): {elapsed:.1f}s against a "
                                f"{SUITE_BUDGET:.0f}s budget")
    if elapsed >= SUITE_BUDGET:
        terminalreporter.session.exitstatus = 1
