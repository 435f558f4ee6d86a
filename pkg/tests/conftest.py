import random

import pytest

from mixtree.enumeration import prufer_decode
from mixtree.tree import Tree

FIG2_EDGES = [(0, 1), (1, 6), (1, 7), (1, 8), (1, 2), (2, 3), (3, 4), (4, 5),
              (3, 12), (2, 9), (9, 10), (10, 11)]


def random_tree(rng: random.Random, n: int) -> Tree:
    """Uniform labelled tree via a random Pruefer sequence."""
    if n <= 2:
        return Tree([(0, 1)] if n == 2 else [], n=n)
    return prufer_decode([rng.randrange(n) for _ in range(n - 2)], n)


def random_caterpillar(rng: random.Random, d: int, extra: int) -> tuple[Tree, tuple]:
    """Spine 0..d with ``extra`` leaves scattered on interior spine vertices."""
    edges = [(k, k + 1) for k in range(d)]
    nxt = d + 1
    for _ in range(extra):
        edges.append((rng.randint(1, d - 1), nxt))
        nxt += 1
    return Tree(edges), tuple(range(d + 1))


@pytest.fixture
def fig2_tree():
    return Tree(FIG2_EDGES)


def pytest_terminal_summary(terminalreporter):
    import sys as _sys
    mod = _sys.modules.get("test_acceptance")
    if mod is not None and mod.RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in mod.RESULTS:
            terminalreporter.write_line(line)
