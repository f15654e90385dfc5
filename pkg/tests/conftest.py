import itertools
from fractions import Fraction

import pytest

from kneser_mix.model import KneserParams

TINY = [(1, 1), (1, 2), (2, 1), (2, 2), (3, 1), (3, 2)]


def enumerate_hypergeometric(N, m, n):
    """Exact pmf of H(N, m, n) by listing every n-draw from N items."""
    counts = {}
    draws = list(itertools.combinations(range(N), n))
    for d in draws:
        hits = sum(1 for x in d if x < m)
        counts[hits] = counts.get(hits, 0) + 1
    return {i: Fraction(c, len(draws)) for i, c in counts.items()}


@pytest.fixture(params=TINY, ids=lambda nk: f"n{nk[0]}k{nk[1]}")
def tiny(request):
    return KneserParams(*request.param)


@pytest.fixture
def petersen():
    return KneserParams(2, 1)


_CRITERIA = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(num, title): acceptance criterion")


def pytest_runtest_makereport(item, call):
    mark = item.get_closest_marker("criterion")
    if mark is None or call.when != "call":
        return
    num, title = mark.args
    ok = call.excinfo is None
    prev = _CRITERIA.get(num, (title, True, []))
    _CRITERIA[num] = (title, prev[1] and ok, prev[2] + [(item.name, ok)])


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(_CRITERIA):
        title, ok, parts = _CRITERIA[num]
        terminalreporter.write_line(f"criterion {num:>2} {'PASS' if ok else 'FAIL'}  {title}")
        if len(parts) > 1:
            for name, part_ok in parts:
                terminalreporter.write_line(f"              {'pass' if part_ok else 'FAIL'}  {name}")
