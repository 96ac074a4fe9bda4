from pathlib import Path

import pytest

from dimerfuk import catalog
from dimerfuk.dimer import load_dimer

FIXTURES = Path(__file__).parent / "fixtures"


@pytest.fixture(scope="session")
def fixtures_dir():
    return FIXTURES


def fixture_model(name):
    return load_dimer(FIXTURES / f"{name}.dimer")


@pytest.fixture(scope="session", params=catalog.names())
def catalog_model(request):
    return request.param, catalog.get(request.param).model()


def pytest_terminal_summary(terminalreporter):
    rows = []
    for status in ("passed", "failed"):
        for rep in terminalreporter.stats.get(status, []):
            if rep.when != "call":
                continue
            props = dict(rep.user_properties)
            if "criterion" in props:
                rows.append((props["criterion"], props["title"], status))
    if not rows:
        return
    terminalreporter.section("acceptance criteria")
    for n, title, status in sorted(rows):
        terminalreporter.write_line(f"criterion {n:>2}: {'PASS' if status == 'passed' else 'FAIL'}  {title}")
