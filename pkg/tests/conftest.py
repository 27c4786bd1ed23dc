import pytest

from diamondtrs import corpus
from diamondtrs.formats import parse_trs

R1_TEXT = """(VAR)
(RULES
  b -> a
  b -> c
)
"""

R2_TEXT = """(VAR)
(RULES
  b -> a
  b -> c
  a -> d
  c -> d
)
"""


@pytest.fixture(scope="session")
def machines():
    return {name: corpus.load(name) for name in corpus.NAMES}


@pytest.fixture
def r1():
    return parse_trs(R1_TEXT)


@pytest.fixture
def r2():
    return parse_trs(R2_TEXT)


_ACCEPTANCE: list[str] = []


@pytest.fixture
def criterion():
    """Record one acceptance line: ``criterion(n, ok, detail)``."""
    def record(n, ok, detail):
        _ACCEPTANCE.append(f"criterion {n}: {'PASS' if ok else 'FAIL'}  {detail}")
        return ok
    return record


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in sorted(_ACCEPTANCE):
            terminalreporter.write_line(line)
