import pytest

from sparsematroids.johnson import johnson, mask_of
from sparsematroids.matroid import Matroid, graphic

K4_EDGES = [(1, 2), (1, 3), (2, 3), (1, 4), (2, 4), (3, 4)]
# element i of M(K4) is K4_EDGES[i - 1]; these are the four triangles
K4_TRIANGLES = [mask_of(t) for t in ({1, 2, 3}, {1, 4, 5}, {2, 4, 6}, {3, 5, 6})]


def parallel_pair_matroid() -> Matroid:
    """U_{3,5} with a sixth element parallel to 5: the non-bases contain {5,6}."""
    G = johnson(6, 3)
    pair = mask_of({5, 6})
    return Matroid(6, 3, sum(1 << i for i, X in enumerate(G.masks) if X & pair != pair))


@pytest.fixture
def mk4():
    return graphic(4, K4_EDGES)


@pytest.fixture
def ppair():
    return parallel_pair_matroid()


ACCEPTANCE_LINES: dict[int, str] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(ACCEPTANCE_LINES[k])
