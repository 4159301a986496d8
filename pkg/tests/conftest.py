import pytest

from biinterp.groups import QuotientKind
from biinterp.ring import ProductRing
from biinterp.sl2 import GroupCtx


@pytest.fixture(scope="session")
def F5():
    return ProductRing.parse("5")


@pytest.fixture(scope="session")
def F7():
    return ProductRing.parse("7")


@pytest.fixture(scope="session")
def F35():
    return ProductRing.parse("5,7")


@pytest.fixture(scope="session")
def G5(F5):
    return GroupCtx(F5)


@pytest.fixture(scope="session")
def G7(F7):
    return GroupCtx(F7)


_ACCEPTANCE = pytest.StashKey[dict]()


def pytest_configure(config):
    config.stash[_ACCEPTANCE] = {}


@pytest.fixture
def acceptance(request):
    """Record ``(criterion, part, ok, detail)`` for the terminal summary."""
    table = request.config.stash[_ACCEPTANCE]

    def record(n, part, ok, detail):
        table.setdefault(n, []).append((part, bool(ok), detail))
        return ok

    return record


def pytest_terminal_summary(terminalreporter, config):
    table = config.stash.get(_ACCEPTANCE, {})
    if not table:
        return
    terminalreporter.section("acceptance criteria (exact equality)")
    for n in sorted(table):
        parts = table[n]
        ok = all(p[1] for p in parts)
        detail = "; ".join(f"{name}: {'pass' if good else 'FAIL'} ({d})" for name, good, d in parts)
        terminalreporter.write_line(f"criterion {n:2d}: {'PASS' if ok else 'FAIL'}  {detail}")
