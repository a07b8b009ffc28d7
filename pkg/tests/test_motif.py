import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from conftest import brute_force_triangles, complete, cycle, erdos_renyi
from gbm_active.errors import ParameterError
from gbm_active.graph_model import GbmParams, sample_gbm
from gbm_active.motif import prune_below, prune_interval, prune_threshold, triangle_counts


def edge_set(g):
    return set(map(tuple, g.edges().tolist()))


def test_k4_and_cycle(k4):
    assert set(triangle_counts(k4).as_dict().values()) == {2}
    assert set(triangle_counts(cycle(5)).as_dict().values()) == {0}


def test_matches_brute_force_er():
    g = erdos_renyi(30, 0.3, seed=7)
    expected, _ = brute_force_triangles(g)
    assert triangle_counts(g).as_dict() == expected


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 25), st.floats(0, 1), st.integers(0, 2**32))
def test_count_invariants(n, p, seed):
    g = erdos_renyi(n, p, seed)
    tc = triangle_counts(g)
    _, total = brute_force_triangles(g)
    assert tc.counts.sum() == 3 * total
    deg = g.degrees()
    e = g.edges()
    assert np.all(tc.counts <= np.minimum(deg[e[:, 0]], deg[e[:, 1]]))
    assert np.array_equal(tc.edges, e)


def test_prune_threshold_examples(k4):
    c = triangle_counts(k4)
    assert prune_threshold(k4, c, 2).edge_count == 0
    assert prune_threshold(k4, c, 1) == k4
    c5 = cycle(5)
    assert prune_threshold(c5, triangle_counts(c5), 0).edge_count == 0


def test_prune_interval_examples(k4):
    c = triangle_counts(k4)
    assert prune_interval(k4, c, 3, 5) == k4
    assert prune_interval(k4, c, 2, 2).edge_count == 0
    assert prune_interval(k4, c, 0, 1) == k4
    with pytest.raises(ParameterError):
        prune_interval(k4, c, 2, 1)


def test_prune_strict_variant(k4):
    c = triangle_counts(k4)
    assert prune_below(k4, c, 2) == k4
    assert prune_below(k4, c, 3).edge_count == 0


def test_input_graph_unchanged(k4):
    before = k4.edges().copy()
    prune_threshold(k4, triangle_counts(k4), 10)
    assert np.array_equal(k4.edges(), before)


def test_counts_must_match_graph(k4):
    with pytest.raises(ParameterError):
        prune_threshold(cycle(5), triangle_counts(k4), 1)


@settings(max_examples=40, deadline=None)
@given(st.integers(2, 25), st.floats(0, 1), st.integers(0, 2**32), st.floats(-1, 20), st.floats(0, 10))
def test_pruning_properties(n, p, seed, t, dt):
    g = erdos_renyi(n, p, seed)
    c = triangle_counts(g)
    lo = prune_threshold(g, c, t)
    hi = prune_threshold(g, c, t + dt)
    assert edge_set(lo) <= edge_set(g)
    assert edge_set(hi) <= edge_set(lo)
    # re-applying the original counts to the already pruned edges changes nothing
    keep = np.array([tuple(uv) in edge_set(lo) for uv in g.edges().tolist()], dtype=bool)
    again = g.keep_edges(keep & ~(c.counts <= t))
    assert again == lo
    assert edge_set(prune_interval(g, c, t, t + dt)) <= edge_set(g)


def test_cross_edge_counts_follow_binomial_mean():
    n, t1, t2 = 2000, 10.0, 2.0
    expected = (n - 2) * 2 * t2 * math.log(n) / n
    means = []
    for s in range(5):
        lg = sample_gbm(GbmParams(n, t1, t2, s))
        tc = triangle_counts(lg.graph)
        cross = lg.sigma[tc.edges[:, 0]] != lg.sigma[tc.edges[:, 1]]
        means.append(tc.counts[cross].mean())
        assert tc.counts[~cross].mean() > tc.counts[cross].mean()
    assert np.mean(means) == pytest.approx(expected, rel=0.05)
