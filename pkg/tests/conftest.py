import itertools

import numpy as np
import pytest

from gbm_active.graph_model import Graph


def brute_force_triangles(g):
    """Per-edge triangle counts by enumerating every node triple."""
    n = g.node_count
    adj = np.zeros((n, n), dtype=bool)
    e = g.edges()
    adj[e[:, 0], e[:, 1]] = adj[e[:, 1], e[:, 0]] = True
    counts = {tuple(map(int, uv)): 0 for uv in e}
    total = 0
    for a, b, c in itertools.combinations(range(n), 3):
        if adj[a, b] and adj[b, c] and adj[a, c]:
            total += 1
            for uv in ((a, b), (b, c), (a, c)):
                counts[uv] += 1
    return counts, total


def erdos_renyi(n, p, seed):
    rng = np.random.default_rng(seed)
    iu, ju = np.triu_indices(n, 1)
    keep = rng.random(len(iu)) < p
    return Graph.from_edges(n, np.stack([iu[keep], ju[keep]], axis=1))


def complete(n):
    iu, ju = np.triu_indices(n, 1)
    return Graph.from_edges(n, np.stack([iu, ju], axis=1))


def cycle(n):
    return Graph.from_edges(n, [(i, (i + 1) % n) for i in range(n)])


def path(n):
    return Graph.from_edges(n, [(i, i + 1) for i in range(n - 1)])


@pytest.fixture
def k4():
    return complete(4)


@pytest.fixture
def two_triangles():
    return Graph.from_edges(6, [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)])
