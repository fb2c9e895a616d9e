import random

import pytest
from hypothesis import strategies as st

from domgrover.graph import Graph, fixture_path, load_graph

# (criterion, description, passed) rows filled in by test_acceptance.py
ACCEPTANCE_LOG: list[tuple[str, str, bool]] = []


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LOG:
        return
    terminalreporter.section("acceptance criteria")
    for num, desc, ok in ACCEPTANCE_LOG:
        terminalreporter.write_line(f"[{'PASS' if ok else 'FAIL'}] criterion {num}: {desc}")


@pytest.fixture(scope="session")
def surrogate():
    return load_graph(fixture_path("surrogate6.dimacs"))


@pytest.fixture(scope="session")
def k3():
    return load_graph(fixture_path("k3.json"))


@pytest.fixture(scope="session")
def p3():
    return load_graph(fixture_path("p3.dimacs"))


@pytest.fixture(scope="session")
def edgeless3():
    return load_graph(fixture_path("edgeless3.json"))


def random_graph(rng: random.Random, n: int, p: float = 0.5) -> Graph:
    edges = [(u, v) for u in range(n) for v in range(u + 1, n) if rng.random() < p]
    return Graph.from_edges(n, edges)


@st.composite
def graphs(draw, min_n=1, max_n=6):
    n = draw(st.integers(min_n, max_n))
    pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
    chosen = draw(st.lists(st.sampled_from(pairs), unique=True)) if pairs else []
    return Graph.from_edges(n, chosen)
