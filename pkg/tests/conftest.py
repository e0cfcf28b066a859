import itertools
import random

import pytest

from thetawitness import Graph


def brute_force_alpha(g):
    """Max weight over all 2^n vertex subsets that contain no edge."""
    best = 0
    for mask in range(1 << g.n):
        verts = [v for v in range(g.n) if mask >> v & 1]
        if any(g.has_edge(i, j) for i, j in itertools.combinations(verts, 2)):
            continue
        best = max(best, sum(g.weight(v) for v in verts))
    return best


def random_graph(rng, n, p):
    return Graph(n, [e for e in itertools.combinations(range(n), 2) if rng.random() < p])


def seeded_graphs(count, n_max=12, seed=20240611, n_min=1):
    rng = random.Random(seed)
    out = []
    for _ in range(count):
        n = rng.randint(n_min, n_max)
        out.append(random_graph(rng, n, rng.choice([0.2, 0.35, 0.5, 0.7])))
    return out


@pytest.fixture
def c5():
    return Graph(5, [(i, (i + 1) % 5) for i in range(5)])


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    if rep.when == "call":
        item.rep_call = rep
