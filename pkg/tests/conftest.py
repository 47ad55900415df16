import functools
from pathlib import Path

import pytest

from periodic_ar import load_algebra_file
from periodic_ar import artheory as ar

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"


@functools.lru_cache(maxsize=None)
def algebra(name: str, p: int | None = None):
    return load_algebra_file(FIXTURES / f"{name}.toml", p)


@functools.lru_cache(maxsize=None)
def fixed_quiver(name: str, n: int):
    return ar.knit_fixed_size(algebra(name), n)


@functools.lru_cache(maxsize=None)
def periodic_quiver(name: str, n: int, m: int, method: int = 1):
    Q = fixed_quiver(name, n)
    if method == 1:
        return ar.periodic_ar_quiver_method1(Q, m)
    return ar.periodic_ar_quiver_method2(Q, m)


@pytest.fixture(scope="session")
def chain3():
    return algebra("chain3")


@pytest.fixture(scope="session")
def chain4():
    return algebra("chain4")


@pytest.fixture(scope="session")
def a2():
    return algebra("a2")


@pytest.fixture(scope="session")
def a3():
    return algebra("a3")


@pytest.fixture(scope="session")
def q3():
    return fixed_quiver("chain3", 3)


@pytest.fixture(scope="session")
def p3():
    return periodic_quiver("chain3", 3, 4)


@pytest.fixture(scope="session")
def p4():
    return periodic_quiver("chain4", 4, 2)


def fixture_path(name: str) -> str:
    return str(FIXTURES / f"{name}.toml")


_CRITERIA: dict = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    # setup errors count as failures; setup time counts towards the runtime
    if mark is None:
        return
    num, title = mark.args
    ok, _, secs = _CRITERIA.get(num, (True, title, 0.0))
    _CRITERIA[num] = (ok and rep.passed, title, secs + rep.duration)

def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(_CRITERIA):
        ok, title, secs = _CRITERIA[num]
        terminalreporter.write_line(
            f"criterion {num:2d}: {'PASS' if ok else 'FAIL'}  {title}  ({secs:.1f} s)")
