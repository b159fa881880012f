import itertools

import pytest
from hypothesis import settings, strategies as st

from fincomm.algebra import Algebra
from fincomm.corpus import corpus_algebra

settings.register_profile("default", deadline=None)
settings.load_profile("default")

# criterion number -> (passed, first report line); filled by test_acceptance
ACCEPTANCE: dict[int, tuple[bool, str]] = {}


@st.composite
def small_algebras(draw, max_size: int = 3, max_ops: int = 2):
    """Random algebras with up to ``max_ops`` unary or binary operations."""
    n = draw(st.integers(1, max_size))
    k = draw(st.integers(0, max_ops))
    ops = []
    for i in range(k):
        r = draw(st.integers(1, 2))
        table = draw(st.lists(st.integers(0, n - 1), min_size=n ** r, max_size=n ** r))
        ops.append((f"f{i}", r, table))
    return Algebra.from_tables("R", n, ops)


@st.composite
def binary_algebras(draw, size: int = 3):
    table = draw(st.lists(st.integers(0, size - 1), min_size=size * size,
                          max_size=size * size))
    return Algebra.from_tables("B", size, [("f", 2, table)])


@pytest.fixture(scope="session")
def corpus():
    return corpus_algebra


def all_pairs(con):
    return list(itertools.product(con, repeat=2))


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE):
        ok, line = ACCEPTANCE[k]
        terminalreporter.write_line(f"criterion {k}: {'PASS' if ok else 'FAIL'}  {line}")
