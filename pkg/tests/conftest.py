import os

import pytest

from totient_strata import _backend, sieve, strata

EXTENDED = os.environ.get("TOTIENT_STRATA_EXTENDED") == "1"


@pytest.fixture(params=sorted(_backend.IMPLEMENTATIONS))
def kern(request):
    return _backend.IMPLEMENTATIONS[request.param]


@pytest.fixture
def pure_backend(monkeypatch):
    """Route the whole pipeline through the numpy kernels."""
    k = _backend.IMPLEMENTATIONS["numpy"]
    monkeypatch.setattr(sieve, "kernels", k)
    monkeypatch.setattr(strata, "kernels", k)
    strata.clear_memo()
    yield k
    strata.clear_memo()


def pytest_collection_modifyitems(config, items):
    if EXTENDED:
        return
    skip = pytest.mark.skip(reason="set TOTIENT_STRATA_EXTENDED=1 for beyond-gating scale rows")
    for item in items:
        if "extended" in item.keywords:
            item.add_marker(skip)


def pytest_terminal_summary(terminalreporter):
    from . import test_acceptance

    if test_acceptance.RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in test_acceptance.RESULTS:
            terminalreporter.write_line(line)
