import itertools

import pytest

from rigidkit import linalg
from rigidkit.graphs import SemisimpleGraph


def all_graphs(n, loops=False):
    """Every graph on vertex set 0..n-1 (optionally with any loop pattern)."""
    pairs = list(itertools.combinations(range(n), 2))
    if loops:
        pairs += [(v, v) for v in range(n)]
    for mask in range(1 << len(pairs)):
        yield SemisimpleGraph(n, tuple(p for i, p in enumerate(pairs) if mask >> i & 1))


@pytest.fixture(params=linalg.available_backends())
def backend(request):
    before = linalg.get_backend()
    linalg.set_backend(request.param)
    yield request.param
    linalg.set_backend(before)


def pytest_terminal_summary(terminalreporter):
    lines = []
    for reports in terminalreporter.stats.values():
        for rep in reports:
            if getattr(rep, "when", None) != "call":
                continue
            lines += [v for k, v in getattr(rep, "user_properties", ()) if k == "acceptance"]
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines, key=lambda s: int(s.split()[2].rstrip(":"))):
            terminalreporter.write_line(line)
