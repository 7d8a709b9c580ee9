import hypothesis
import numpy as np
import pytest

from pmedian_ga import Instance

hypothesis.settings.register_profile("ci", deadline=None, max_examples=100)
hypothesis.settings.register_profile("fast", deadline=None, max_examples=10)
hypothesis.settings.load_profile("ci")

EXAMPLE1_COSTS = [
    [7, 10, 16, 11],
    [15, 17, 7, 7],
    [10, 4, 6, 6],
    [7, 11, 18, 12],
    [10, 22, 14, 8],
]


@pytest.fixture
def example1():
    return Instance(EXAMPLE1_COSTS, 2, "example1")


def random_instance(rng: np.random.Generator, n: int, m: int, p: int, high: int = 100) -> Instance:
    return Instance(rng.integers(0, high, size=(n, m)), p)


_criteria: dict[str, tuple[str, str]] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(id, text): acceptance criterion")


def pytest_runtest_makereport(item, call):
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    cid, text = marker.args
    if call.when == "setup" and call.excinfo is not None and call.excinfo.errisinstance(pytest.skip.Exception):
        _criteria[cid] = ("SKIP", f"{text} ({call.excinfo.value})")
    elif call.when == "call":
        if call.excinfo is None:
            _criteria[cid] = ("PASS", text)
        elif call.excinfo.errisinstance(pytest.skip.Exception):
            _criteria[cid] = ("SKIP", f"{text} ({call.excinfo.value})")
        else:
            _criteria[cid] = ("FAIL", text)


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for cid in sorted(_criteria, key=lambda c: int(c[1:])):
        status, text = _criteria[cid]
        terminalreporter.write_line(f"{cid:>3}  {status:4}  {text}")
