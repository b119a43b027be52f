import pytest

from wanderflow.flowctl.formats import load_fixture

PLANE_FOL = ["trivial", "twoseps", "twoseps_mirror", "fourseps", "fourseps_mirror",
             "sine_trunc5", "sine_trunc5_mirror", "sine2_trunc5", "waz_trunc"]
CYLINDER_FOL = ["cylinder_f1", "cylinder_f2"]


@pytest.fixture(scope="session")
def fol():
    cache = {}

    def get(name):
        if name not in cache:
            cache[name] = load_fixture(name)
        return cache[name]

    return get


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.LINES:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(mod.LINES):
        terminalreporter.write_line(mod.LINES[number])
