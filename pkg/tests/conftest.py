import pytest

from shimquot.catalog import find_record, load_catalog


@pytest.fixture(scope="session")
def catalog():
    return load_catalog()


@pytest.fixture(scope="session")
def rec(catalog):
    return lambda key: find_record(key, catalog)


@pytest.fixture(scope="session")
def modelled(catalog):
    return [r for r in catalog if r.model is not None]


_CRITERIA: dict[str, str] = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    if "test_criterion_" in item.name and (rep.when == "call" or rep.failed):
        if _CRITERIA.get(item.name) != "FAIL":
            _CRITERIA[item.name] = "PASS" if rep.passed else "FAIL"


def pytest_terminal_summary(terminalreporter):
    if _CRITERIA:
        terminalreporter.section("acceptance criteria")
        for name, verdict in sorted(_CRITERIA.items()):
            terminalreporter.write_line(f"{verdict} {name}")
